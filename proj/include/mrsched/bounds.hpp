#pragma once

#include <optional>

#include "mrsched/schedule.hpp"

namespace mrsched {

// Closed-form lower bound on the response time of any feasible schedule,
// together with the individual terms so callers can see what dominates.
struct BoundsReport {
  double t_max = 0.0;       // slowest single clone
  double avg_work = 0.0;    // length of summed work over the site count
  double avg_volume = 0.0;  // length of summed time-demand volume over sites
  std::optional<double> crit_path;  // blocking-structure variant only
  double lb = 0.0;
  std::string dominant_term;
};

// Independent clones: volume is each clone's own duration times its demand.
BoundsReport lb_independent(const std::vector<Clone>& clones, int p);

// Co-scheduled pipelines: every member holds its reservation for at least the
// pipeline's slowest clone, so volumes scale with the pipeline t_max.
BoundsReport lb_pipelines(const std::vector<Pipeline>& pipes, int p);

// Full task trees: the slowest-clone term strengthens to the critical path
// over memory-merged units.
BoundsReport tree_bound(const MergedTree& merged, int p);
BoundsReport tree_bound(const TaskTree& tree, int p, double epsilon);

// response / lower bound; zero bound with nonzero response is rejected.
double perf_ratio(const Schedule& schedule, const BoundsReport& report);

// The three bulk scalars used to prune dominated plan alternatives.
struct BulkParameters {
  double crit_path = 0.0;
  double avg_work = 0.0;
  double avg_volume = 0.0;
  double combined = 0.0;  // max of the three
};

BulkParameters bulk_parameters(const TaskTree& tree, int p, double epsilon);

enum class BulkOrder { FirstDominates, SecondDominates, Equal, Incomparable };

// Componentwise partial order; smaller in every coordinate dominates.
BulkOrder compare_bulk(const BulkParameters& a, const BulkParameters& b);

}  // namespace mrsched
