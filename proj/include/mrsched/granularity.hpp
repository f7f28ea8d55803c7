#pragma once

#include <functional>

#include "mrsched/cost_model.hpp"
#include "mrsched/vectors.hpp"

namespace mrsched {

struct GranularityParams {
  double f = 0.6;       // communication budget as a fraction of processing area
  double lambda = 0.3;  // per-clone memory granularity bound, in (0, 1)
  void validate() const;
};

// Maps a clone count to the fraction of the operator each clone handles.
// Weights must be positive and sum to 1.  The default is a uniform split.
using WeightGen = std::function<std::vector<double>(int)>;

std::vector<double> uniform_weights(int n);

struct CloneSplit {
  int n = 1;
  std::vector<double> weights;
  // Communication/processing ratio actually incurred.  Equals f unless the
  // memory bound forced more clones than the communication budget allows.
  double effective_f = 0.0;
};

// Total time-shared work of the operator across all dimensions (ms).
double processing_area(const OperatorCost& oc);

// Overhead of running the operator as n clones: n startups plus shipping
// the operator's output across the interconnect (ms).
double communication_area(const OperatorCost& oc, int n, const HardwareParams& hw);

// Fraction of the operator's demand held by its largest clone.
double max_mem(const OperatorCost& oc, int n, const WeightGen& wg);

// Largest clone count whose communication overhead stays within f times the
// processing area, bounded by the number of sites, but never below the count
// the memory granularity bound requires.  The memory term may exceed the
// site count: several thin clones of one operator can share a site.
CloneSplit max_degree(const OperatorCost& oc, const GranularityParams& g,
                      const HardwareParams& hw, int p_sites, const WeightGen& wg = {});

// Common degree for a join's two phases.  The communication budget is taken
// against the combined areas of both operators and the memory bound against
// whichever phase is hungrier, so both can run as co-located clone pairs.
CloneSplit paired_degree(const OperatorCost& parent, const OperatorCost& child,
                         const GranularityParams& g, const HardwareParams& hw,
                         int p_sites, const WeightGen& wg = {});

// Materializes the clones of an operator under a chosen split.  Every clone
// carries its weight of the base work and demand plus its share of the
// shipped bytes on the network dimension; clone 0 additionally pays the
// startup cost for the whole set, split evenly between cpu and network.
std::vector<Clone> split_clones(const OperatorCost& oc, const CloneSplit& split,
                                const GranularityParams& g, const HardwareParams& hw,
                                double epsilon);

}  // namespace mrsched
