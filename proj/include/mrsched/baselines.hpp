#pragma once

#include <vector>

#include "mrsched/config.hpp"
#include "mrsched/plan.hpp"
#include "mrsched/simexec.hpp"

namespace mrsched {

// Outcome of a baseline scheduler: the schedule plus the gang-granularity
// view it was built for (every clone pinned), ready for validation and
// replay.  `query_gangs` maps each input query to the instance groups that
// carry its operators, so callers can read off per-query completion times.
// `deferred` lists queries that could not be started at all because their
// memory needs can never be met at their fixed sites; their operators are
// absent from the instance, the schedule, and `query_gangs`.
struct BaselineResult {
  Instance instance;
  Schedule schedule;
  std::vector<std::vector<int>> query_gangs;
  std::vector<int> deferred;
};

// One-dimensional hierarchical processor allotment.  Every query collapses
// into a single parallel job whose joins receive disjoint site blocks.  The
// search starts from the fewest sites that keep each hash table in memory
// in one pass, repeatedly list-schedules the jobs by scalar work, grows the
// most wasteful job's slowest join by one site, and keeps the allotment with
// the best estimated makespan.  Throws InfeasibleError when some query needs
// more sites than the system has.
BaselineResult hier_sched(const std::vector<Plan>& plans, const Catalog& catalog, int p_sites,
                          const SystemConfig& cfg);

// Home-site scheduler: every operator runs exactly at the sites where its
// build input lives (the home sites of the leftmost relation under its
// join), and the final result is stored across all sites.  A query executes
// as a chain of pipeline segments: consecutive joins share a segment while
// their hash tables fit together at their home sites, and when the next
// table would overflow a site the segment closes and the chain resumes in a
// follow-up segment that rereads its output.  A segment may only start in a
// round after every segment feeding it has finished; within that constraint,
// pending segments are packed first-fit into synchronized levels so that no
// site's memory is ever oversubscribed.  A query whose segments cannot fit
// even a level of their own is deferred.  Every relation must have homes.
BaselineResult zsched(const std::vector<Plan>& plans, const Catalog& catalog, int p_sites,
                      const SystemConfig& cfg);

}  // namespace mrsched
