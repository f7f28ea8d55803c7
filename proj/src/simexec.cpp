#include "mrsched/simexec.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "mrsched/vectors.hpp"

namespace mrsched {

Instance instance_of(const TaskTree& tree) { return {tree.pipelines, tree.edges}; }

Instance instance_of(const MergedTree& merged) { return {merged.units, merged.edges}; }

Instance instance_of(const std::vector<Pipeline>& pipes) { return {pipes, {}}; }

Instance instance_of(const std::vector<Clone>& clones) {
  Instance inst;
  for (const Clone& c : clones) {
    Pipeline p;
    p.id = c.id;
    p.clones.push_back(c);
    p.refresh_t_max();
    inst.groups.push_back(std::move(p));
  }
  return inst;
}

namespace {

struct Placement {
  int level = -1;
  int site = -1;
};

int site_count(const Schedule& sched, const SystemConfig& cfg) {
  auto it = sched.params.find("sites");
  if (it != sched.params.end()) return int(std::lround(it->second));
  return cfg.sites;
}

std::string at(int level, int site) {
  return "level " + std::to_string(level) + ", site " + std::to_string(site);
}

// Clone lookup plus its owning group, built from the instance.
struct CloneIndex {
  std::map<int, const Clone*> clone;
  std::map<int, int> group_of;  // clone id -> group id

  explicit CloneIndex(const Instance& inst) {
    for (const Pipeline& g : inst.groups)
      for (const Clone& c : g.clones) {
        if (!clone.emplace(c.id, &c).second)
          throw SchedError("validate: instance repeats clone id " + std::to_string(c.id));
        group_of[c.id] = g.id;
      }
  }
};

std::map<int, Placement> collect_places(const Schedule& sched, const CloneIndex& idx, int p,
                                        std::vector<Violation>& out) {
  std::map<int, Placement> placed;
  for (std::size_t l = 0; l < sched.levels.size(); ++l)
    for (auto [id, site] : sched.levels[l].places) {
      if (!idx.clone.count(id)) {
        out.push_back({"unknown-clone",
                       "clone " + std::to_string(id) + " is not part of the instance"});
        continue;
      }
      if (site < 0 || site >= p) {
        out.push_back({"site-range", "clone " + std::to_string(id) + " placed on site " +
                                         std::to_string(site) + " of " + std::to_string(p)});
        continue;
      }
      auto [it, fresh] = placed.emplace(id, Placement{int(l), site});
      if (!fresh)
        out.push_back({"duplicate", "clone " + std::to_string(id) + " placed in level " +
                                        std::to_string(it->second.level) + " and again in level " +
                                        std::to_string(l)});
    }
  return placed;
}

void check_pins_and_coverage(const Instance& inst, const std::map<int, Placement>& placed,
                             std::vector<Violation>& out) {
  for (const Pipeline& g : inst.groups)
    for (const Clone& c : g.clones) {
      auto it = placed.find(c.id);
      if (it == placed.end()) {
        out.push_back({"unplaced", "clone " + std::to_string(c.id) + " (" + c.op +
                                       ") never runs"});
        continue;
      }
      if (c.site && *c.site != it->second.site)
        out.push_back({"pinning", "clone " + std::to_string(c.id) + " (" + c.op +
                                      ") is rooted at site " + std::to_string(*c.site) +
                                      " but placed on site " + std::to_string(it->second.site)});
    }
}

void check_capacity(const Schedule& sched, const CloneIndex& idx, std::vector<Violation>& out) {
  for (std::size_t l = 0; l < sched.levels.size(); ++l) {
    std::map<int, std::vector<double>> demand;  // site -> componentwise sum
    for (auto [id, site] : sched.levels[l].places) {
      auto it = idx.clone.find(id);
      if (it == idx.clone.end()) continue;
      auto& acc = demand[site];
      const DemandVector& d = it->second->demand;
      if (acc.size() < d.dim()) acc.resize(d.dim(), 0.0);
      for (std::size_t k = 0; k < d.dim(); ++k) acc[k] += d[k];
    }
    for (const auto& [site, acc] : demand)
      for (std::size_t k = 0; k < acc.size(); ++k)
        if (acc[k] > 1.0 + kCapacityTol)
          out.push_back({"capacity", at(int(l), site) + ", dimension " + std::to_string(k) +
                                         ": demand " + std::to_string(acc[k]) +
                                         " exceeds capacity 1"});
  }
}

void check_gangs(const Schedule& sched, const Instance& inst,
                 const std::map<int, Placement>& placed, std::vector<Violation>& out) {
  bool shelves = sched.mode == ScheduleMode::PerSiteShelves;
  for (const Pipeline& g : inst.groups) {
    const Placement* first = nullptr;
    for (const Clone& c : g.clones) {
      auto it = placed.find(c.id);
      if (it == placed.end()) continue;
      if (!first) {
        first = &it->second;
        continue;
      }
      if (it->second.level != first->level) {
        out.push_back({"co-scheduling", "group " + std::to_string(g.id) +
                                            " is split across levels " +
                                            std::to_string(first->level) + " and " +
                                            std::to_string(it->second.level)});
        break;
      }
      if (shelves && it->second.site != first->site) {
        out.push_back({"co-scheduling",
                       "group " + std::to_string(g.id) +
                           " spans several sites, but per-site shelves give no cross-site sync"});
        break;
      }
    }
  }
}

void check_edges(const Schedule& sched, const Instance& inst,
                 const std::map<int, Placement>& placed, std::vector<Violation>& out) {
  std::map<int, const Pipeline*> groups;
  for (const Pipeline& g : inst.groups) groups[g.id] = &g;
  bool synced = sched.mode == ScheduleMode::SyncedLevels;

  for (const TaskEdge& e : inst.edges) {
    auto ci = groups.find(e.child);
    auto pi = groups.find(e.parent);
    if (ci == groups.end() || pi == groups.end()) {
      out.push_back({"dependency", "edge references unknown group " +
                                       std::to_string(ci == groups.end() ? e.child : e.parent)});
      continue;
    }

    if (e.kind == EdgeKind::MemMat) {
      // Producer and consumer partners with the same clone index stream
      // through memory, so they must share a site within one level.
      std::map<int, const Clone*> consumers;
      for (const Clone& c : pi->second->clones)
        if (op_matches(c.op, e.consumer_op)) consumers[c.index] = &c;
      bool any = false;
      for (const Clone& c : ci->second->clones) {
        if (!op_matches(c.op, e.producer_op)) continue;
        any = true;
        auto match = consumers.find(c.index);
        if (match == consumers.end()) {
          out.push_back({"co-location", e.consumer_op + " has no partner for " + e.producer_op +
                                            " clone index " + std::to_string(c.index)});
          continue;
        }
        auto a = placed.find(c.id);
        auto b = placed.find(match->second->id);
        if (a == placed.end() || b == placed.end()) continue;  // reported as unplaced
        if (a->second.site != b->second.site || a->second.level != b->second.level)
          out.push_back({"co-location", e.producer_op + " clone index " +
                                            std::to_string(c.index) + " runs at " +
                                            at(a->second.level, a->second.site) + " but " +
                                            e.consumer_op + " at " +
                                            at(b->second.level, b->second.site)});
      }
      if (!any)
        out.push_back({"co-location", "edge names operator " + e.producer_op +
                                          " absent from group " + std::to_string(e.child)});
      continue;
    }

    // Disk materialization: the whole child must finish before any part of
    // the parent starts, which only synchronized levels can express.
    if (!synced) {
      out.push_back({"dependency", "group " + std::to_string(e.child) + " -> " +
                                       std::to_string(e.parent) +
                                       " needs synchronized levels to order materialization"});
      continue;
    }
    int child_last = -1, parent_first = -1;
    for (const Clone& c : ci->second->clones) {
      auto it = placed.find(c.id);
      if (it != placed.end()) child_last = std::max(child_last, it->second.level);
    }
    for (const Clone& c : pi->second->clones) {
      auto it = placed.find(c.id);
      if (it != placed.end())
        parent_first = parent_first < 0 ? it->second.level
                                        : std::min(parent_first, it->second.level);
    }
    if (child_last >= 0 && parent_first >= 0 && child_last >= parent_first)
      out.push_back({"dependency", "group " + std::to_string(e.parent) + " starts in level " +
                                       std::to_string(parent_first) + " before its input " +
                                       std::to_string(e.child) + " finishes in level " +
                                       std::to_string(child_last)});
  }
}

// Per-(level, site) resource sums for the clones actually placed there.
struct UseAcc {
  std::vector<double> busy, peak;
  double max_seq = 0.0;

  void add(const Clone& c) {
    if (busy.size() < c.work.dim()) busy.resize(c.work.dim(), 0.0);
    if (peak.size() < c.demand.dim()) peak.resize(c.demand.dim(), 0.0);
    for (std::size_t k = 0; k < c.work.dim(); ++k) busy[k] += c.work[k];
    for (std::size_t k = 0; k < c.demand.dim(); ++k) peak[k] += c.demand[k];
    max_seq = std::max(max_seq, c.seq_ms);
  }
  double duration() const { return std::max(max_seq, vector_length(busy)); }
};

}  // namespace

std::vector<Violation> validate(const Schedule& sched, const Instance& inst,
                                const SystemConfig& cfg) {
  std::vector<Violation> out;
  CloneIndex idx(inst);
  auto placed = collect_places(sched, idx, site_count(sched, cfg), out);
  check_pins_and_coverage(inst, placed, out);
  check_capacity(sched, idx, out);
  check_gangs(sched, inst, placed, out);
  check_edges(sched, inst, placed, out);
  return out;
}

ExecutionTrace execute(const Schedule& sched, const Instance& inst, const SystemConfig& cfg) {
  auto violations = validate(sched, inst, cfg);
  if (!violations.empty())
    throw SchedError("execute: " + violations.front().kind + ": " + violations.front().detail);

  CloneIndex idx(inst);
  ExecutionTrace trace;
  std::size_t n_levels = sched.levels.size();
  trace.level_start_ms.assign(n_levels, 0.0);
  trace.level_end_ms.assign(n_levels, 0.0);

  // Stretched duration of every occupied (level, site) pair.
  std::vector<std::map<int, UseAcc>> by_level(n_levels);
  std::map<int, Placement> placed;
  for (std::size_t l = 0; l < n_levels; ++l)
    for (auto [id, site] : sched.levels[l].places) {
      by_level[l][site].add(*idx.clone.at(id));
      placed[id] = {int(l), site};
    }

  std::vector<double> heights(n_levels, 0.0);
  std::vector<std::map<int, double>> dur(n_levels);  // level -> site -> duration
  for (std::size_t l = 0; l < n_levels; ++l) {
    for (auto& [site, acc] : by_level[l]) {
      double d = acc.duration();
      dur[l][site] = d;
      heights[l] = std::max(heights[l], d);
      trace.use.push_back({int(l), site, std::move(acc.busy), std::move(acc.peak), d});
    }
  }

  if (sched.mode == ScheduleMode::SyncedLevels) {
    double clock = 0.0;
    for (std::size_t l = 0; l < n_levels; ++l) {
      clock = std::max(clock, sched.levels[l].start_ms);
      trace.level_start_ms[l] = clock;
      clock += heights[l];
      trace.level_end_ms[l] = clock;
    }
    trace.total_ms = clock;
    for (const Pipeline& g : inst.groups) {
      int last = -1;
      for (const Clone& c : g.clones)
        if (auto it = placed.find(c.id); it != placed.end())
          last = std::max(last, it->second.level);
      if (last >= 0) trace.group_completion_ms[g.id] = trace.level_end_ms[std::size_t(last)];
    }
    return trace;
  }

  // Per-site shelves: each site runs its own stack back to back; the level
  // boundaries reported here are the nominal max-height envelopes.
  std::map<int, std::vector<double>> site_done;  // site -> cumulative end per level
  std::map<int, double> site_clock;
  for (std::size_t l = 0; l < n_levels; ++l) {
    trace.level_start_ms[l] = l == 0 ? 0.0 : trace.level_end_ms[l - 1];
    trace.level_end_ms[l] = trace.level_start_ms[l] + heights[l];
    for (const auto& [site, d] : dur[l]) site_clock[site] += d;
    for (const auto& [site, clock] : site_clock) {
      auto& done = site_done[site];
      done.resize(n_levels, 0.0);
      done[l] = clock;
    }
  }
  for (const auto& [site, clock] : site_clock) trace.total_ms = std::max(trace.total_ms, clock);

  for (const Pipeline& g : inst.groups) {
    double done = -1.0;
    for (const Clone& c : g.clones)
      if (auto it = placed.find(c.id); it != placed.end())
        done = std::max(done, site_done[it->second.site][std::size_t(it->second.level)]);
    if (done >= 0.0) trace.group_completion_ms[g.id] = done;
  }
  return trace;
}

}  // namespace mrsched
