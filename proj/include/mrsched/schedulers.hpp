#pragma once

#include "mrsched/config.hpp"
#include "mrsched/schedule.hpp"

namespace mrsched {

// Shelf scheduling for independent clones.  Longest processing time first;
// each clone goes to the site with the smallest accumulated total and is
// packed next-fit into that site's topmost shelf.  Clones must fit a single
// site (demand length <= 1); pinned clones keep their site.
Schedule op_sched(const std::vector<Clone>& clones, int p_sites, const SystemConfig& cfg);

// Places one pipeline as a single co-scheduled level.  Clones are taken in
// non-increasing work-density order (density = work length / demand length,
// zero-demand clones first) and each goes to the least-loaded site, by work
// length, among the sites with capacity left.  Fails identifying the clone
// when no site can host it.
Schedule pipe_sched(const Pipeline& pipe, int p_sites, const SystemConfig& cfg);

// Co-schedules a list of independent pipelines in synchronized levels.
// Pipelines are ordered by t_max non-increasing and greedily cut into
// maximal groups whose summed demand length stays within
// p * (1 - lambda) / ssr_dims; each group becomes one level placed like
// pipe_sched.  With re_check (default), every remaining pipeline that still
// fits the open level's budget joins it before the level is sealed.
Schedule level_sched(const std::vector<Pipeline>& pipes, int p_sites, const SystemConfig& cfg,
                     bool re_check = true);

struct TreeSchedResult {
  MergedTree merged;   // instance actually scheduled, including inherited pins
  Schedule schedule;
};

// Full task trees: memory-blocked producers are fused into their consumers
// (one combined clone per pair), then the ready units are levelled like
// level_sched; once a disk-blocked child finishes, its parent becomes ready
// with the consuming operator's clones rooted on the producer's sites.
TreeSchedResult tree_sched(const TaskTree& tree, int p_sites, const SystemConfig& cfg,
                           bool re_check = true);

struct Arrival {
  double at_ms = 0.0;
  TaskTree tree;
};

struct QueryCompletion {
  int query = -1;       // index into the arrival list
  double arrive_ms = 0.0;
  double done_ms = 0.0;
};

struct OnlineResult {
  MergedTree merged;    // all queries' units, ids in arrival-list order
  Schedule schedule;    // levels carry absolute start times
  std::vector<QueryCompletion> completions;
};

// On-line variant: queries are admitted at level boundaries only.  With every
// arrival at time 0 this degenerates to tree_sched over the whole batch.
OnlineResult tree_sched_online(const std::vector<Arrival>& arrivals, int p_sites,
                               const SystemConfig& cfg, bool re_check = true);

}  // namespace mrsched
