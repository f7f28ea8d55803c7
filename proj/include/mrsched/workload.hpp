#pragma once

#include <cstdint>

#include "mrsched/plan.hpp"

namespace mrsched {

enum class PlanShape { BushyRandom, RightDeep };

const char* shape_name(PlanShape s);
PlanShape shape_from_name(const std::string& name);

// A batch of queries sharing one join count, e.g. {5, 4} = five 4-join plans.
struct QueryMix {
  int queries = 1;
  int joins = 1;
};

struct WorkloadSpec {
  std::uint64_t seed = 1;
  PlanShape shape = PlanShape::BushyRandom;
  std::vector<QueryMix> mix{{1, 10}};
  long long min_tuples = 10000;
  long long max_tuples = 1000000;
  int page_tuples = 32;

  void validate() const;
};

struct Workload {
  WorkloadSpec spec;
  Catalog catalog;
  std::vector<Plan> plans;

  int total_joins() const;
};

// Deterministic workload generation: every leaf gets a fresh catalog relation
// with a log-uniform tuple count; bushy plans grow by repeatedly splicing a
// join above a uniformly chosen node, right-deep plans chain probes with base
// tables on every build side.  All randomness derives from spec.seed through
// our own uniform helpers, so files are byte-stable across platforms.
Workload gen_workload(const WorkloadSpec& spec);

// Where base relations live.  Controls the rooted scans that expand_plan
// emits and the join homes the zsched baseline is forced to use.
enum class PlacementPolicy {
  None,              // no home sites: scans are free to run anywhere
  Declust,           // every relation across all sites
  DeclustQuarter,    // every relation across the same quarter of the sites
  NoDeclust,         // one random site per relation
  NoDeclustQuarter,  // one random site per relation, drawn from one quarter
  Random,            // random degree (size-capped) and random site set
  QueryBasedDeclust  // per query: split-table fit degree, non-overlapping
};

const char* placement_name(PlacementPolicy p);
PlacementPolicy placement_from_name(const std::string& name);

// Fills workload.catalog.home_sites in place.  `seed` drives the random
// policies; the hardware model supplies the split-table fit computation for
// QueryBasedDeclust (fudge factor times pages against one site's memory).
void apply_placement(Workload& w, PlacementPolicy policy, int p_sites, const HardwareParams& hw,
                     std::uint64_t seed);

}  // namespace mrsched
