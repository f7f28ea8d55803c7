#pragma once

#include <map>
#include <string>
#include <vector>

#include "mrsched/config.hpp"
#include "mrsched/plan.hpp"
#include "mrsched/schedule.hpp"

namespace mrsched {

// The co-scheduling granularity a schedule is checked against.  Every group
// is a gang whose clones must run together inside a single level; edges add
// blocking (disk) and co-location (memory) constraints between groups.
struct Instance {
  std::vector<Pipeline> groups;
  std::vector<TaskEdge> edges;
};

Instance instance_of(const TaskTree& tree);
Instance instance_of(const MergedTree& merged);
Instance instance_of(const std::vector<Pipeline>& pipes);
// Independent clones: each becomes its own single-clone group keyed by its id.
Instance instance_of(const std::vector<Clone>& clones);

struct Violation {
  std::string kind;  // "capacity", "co-scheduling", "co-location", ...
  std::string detail;
};

// Checks a schedule against an instance: every clone placed exactly once on
// a known site, pins respected, per-level per-site demand within capacity,
// groups gang-scheduled, memory-materialized partners co-located, and
// disk-materialized producers finished before their consumers start.
// The site count is taken from schedule params when present, else from cfg.
std::vector<Violation> validate(const Schedule& sched, const Instance& inst,
                                const SystemConfig& cfg);

// Resource account of one site within one level: total effective use per
// time-shared dimension, held reservation per space-shared dimension, and
// the stretched running time of the co-resident subset.
struct SiteLevelUse {
  int level = 0;
  int site = 0;
  std::vector<double> busy_ms;
  std::vector<double> peak_demand;
  double duration_ms = 0.0;
};

struct ExecutionTrace {
  std::vector<SiteLevelUse> use;  // occupied (level, site) pairs, in order
  std::vector<double> level_start_ms;
  std::vector<double> level_end_ms;
  std::map<int, double> group_completion_ms;
  double total_ms = 0.0;
};

// Replays a schedule under the uniform-stretching model, measuring response
// time and utilization independently of the scheduler's own accounting.
// With synchronized levels, level i starts when level i-1 ends (or at its
// recorded start when that is later); with per-site shelves, each site runs
// its own shelves back to back and the response is the busiest site's total.
// Throws SchedError naming the first violation if validation fails.
ExecutionTrace execute(const Schedule& sched, const Instance& inst, const SystemConfig& cfg);

}  // namespace mrsched
