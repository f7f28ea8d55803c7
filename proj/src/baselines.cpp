#include "mrsched/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <utility>

#include "mrsched/cost_model.hpp"
#include "mrsched/granularity.hpp"
#include "mrsched/vectors.hpp"

namespace mrsched {

namespace {

// Componentwise site loads of one level, priced under the stretching model.
struct SiteLoad {
  std::vector<double> work, demand;
  double max_seq = 0.0;

  void add(const Clone& c) {
    if (work.size() < c.work.dim()) work.resize(c.work.dim(), 0.0);
    if (demand.size() < c.demand.dim()) demand.resize(c.demand.dim(), 0.0);
    for (std::size_t k = 0; k < c.work.dim(); ++k) work[k] += c.work[k];
    for (std::size_t k = 0; k < c.demand.dim(); ++k) demand[k] += c.demand[k];
    max_seq = std::max(max_seq, c.seq_ms);
  }
  double height() const { return std::max(max_seq, vector_length(work)); }
  bool over_capacity() const {
    for (double d : demand)
      if (d > 1.0 + kCapacityTol) return true;
    return false;
  }
};

// Builds one synchronized level holding the given gangs (ids index `gangs`).
ScheduleLevel seal_level(const std::vector<int>& members, const std::vector<Pipeline>& gangs,
                         double start_ms) {
  ScheduleLevel lv;
  lv.groups = members;
  std::sort(lv.groups.begin(), lv.groups.end());
  std::map<int, SiteLoad> sites;
  for (int q : lv.groups)
    for (const Clone& c : gangs[std::size_t(q)].clones) {
      lv.places.emplace_back(c.id, *c.site);
      sites[*c.site].add(c);
    }
  std::sort(lv.places.begin(), lv.places.end());
  for (const auto& [s, load] : sites) lv.height_ms = std::max(lv.height_ms, load.height());
  lv.start_ms = start_ms;
  return lv;
}

void base_params(Schedule& s, int p, const SystemConfig& cfg) {
  s.mode = ScheduleMode::SyncedLevels;
  s.params["sites"] = double(p);
  s.params["epsilon"] = cfg.epsilon;
  s.params["lambda"] = cfg.grain.lambda;
}

// Emits an operator as `sites.size()` uniform clones, one pinned per site.
// Baseline clones obey the one-pass rule (a clone must fit a site) but not
// the list schedulers' finer memory granularity bound, so lambda is lifted.
void emit_clones(const OperatorCost& oc, const std::vector<int>& sites, const SystemConfig& cfg,
                 Pipeline& gang, int& next_id) {
  CloneSplit split{int(sites.size()), uniform_weights(int(sites.size())), cfg.grain.f};
  GranularityParams one_pass = cfg.grain;
  one_pass.lambda = 1.0;
  for (Clone& c : split_clones(oc, split, one_pass, cfg.hw, cfg.epsilon)) {
    c.id = next_id++;
    c.site = sites[std::size_t(c.index) % sites.size()];
    gang.clones.push_back(std::move(c));
  }
}

std::map<int, std::vector<double>> demand_by_site(const Pipeline& gang) {
  std::map<int, std::vector<double>> m;
  for (const Clone& c : gang.clones) {
    auto& acc = m[*c.site];
    if (acc.size() < c.demand.dim()) acc.resize(c.demand.dim(), 0.0);
    for (std::size_t k = 0; k < c.demand.dim(); ++k) acc[k] += c.demand[k];
  }
  return m;
}

bool fits_into(const std::map<int, std::vector<double>>& level,
               const std::map<int, std::vector<double>>& query) {
  for (const auto& [site, dv] : query) {
    auto it = level.find(site);
    if (it == level.end()) continue;
    for (std::size_t k = 0; k < dv.size(); ++k) {
      double have = k < it->second.size() ? it->second[k] : 0.0;
      if (have + dv[k] > 1.0 + kCapacityTol) return false;
    }
  }
  return true;
}

void merge_into(std::map<int, std::vector<double>>& level,
                const std::map<int, std::vector<double>>& query) {
  for (const auto& [site, dv] : query) {
    auto& acc = level[site];
    if (acc.size() < dv.size()) acc.resize(dv.size(), 0.0);
    for (std::size_t k = 0; k < dv.size(); ++k) acc[k] += dv[k];
  }
}

// ---------------------------------------------------------------------------
// Home-site scheduler.

struct ZQuery {
  std::vector<Pipeline> gangs;           // pipeline segments, inner joins first
  std::vector<std::vector<int>> preds;   // local gang -> feeding local gangs
  std::vector<TaskEdge> edges;           // child/parent hold LOCAL gang ids
};

// What a plan subtree hands to the join above it: the producing operator,
// the sites holding its output, and the local gang that computes it (-1 for
// a bare relation, whose scan the consuming join runs itself).
struct ZFeed {
  OperatorCost cost;
  std::vector<int> homes;
  int gang = -1;
};

ZQuery expand_at_homes(const Plan& plan, const Catalog& catalog, int query, int p_sites,
                       const SystemConfig& cfg, int& next_id) {
  ZQuery out;
  std::vector<std::map<int, std::vector<double>>> held;  // per segment, by site
  std::string prefix = "q" + std::to_string(query);
  int join_seq = 0;

  std::function<ZFeed(int, bool)> walk = [&](int node_id, bool feeds_split) -> ZFeed {
    const PlanNode& nd = plan.nodes[std::size_t(node_id)];
    if (nd.is_leaf()) {
      const RelationStats& rel = catalog.find(nd.relation);
      const std::vector<int>* homes = catalog.homes(nd.relation);
      if (!homes || homes->empty())
        throw SchedError("zsched: relation " + nd.relation + " has no home sites");
      auto cost = estimate_operator(OpKind::Scan, prefix + ".scan." + nd.relation, rel, nullptr,
                                    cfg.hw, cfg.ssr_dims, 1.0, feeds_split);
      return {std::move(cost), *homes, -1};
    }

    int tag = join_seq++;
    ZFeed l = walk(nd.left, true);
    ZFeed r = walk(nd.right, true);

    auto build = estimate_operator(OpKind::Build, prefix + ".build." + std::to_string(tag),
                                   l.cost.output, nullptr, cfg.hw, cfg.ssr_dims);
    auto probe = estimate_operator(OpKind::Probe, prefix + ".probe." + std::to_string(tag),
                                   r.cost.output, &l.cost.output, cfg.hw, cfg.ssr_dims, 1.0,
                                   feeds_split);
    // Everything this join adds to whichever segment hosts it: scans of base
    // operands, the hash build, and the probe, all pinned at home sites.
    Pipeline add;
    if (l.gang < 0) emit_clones(l.cost, l.homes, cfg, add, next_id);
    if (r.gang < 0) emit_clones(r.cost, r.homes, cfg, add, next_id);
    emit_clones(build, l.homes, cfg, add, next_id);
    emit_clones(probe, l.homes, cfg, add, next_id);
    auto need = demand_by_site(add);

    // The probe streams out of the segment computing its input; that segment
    // keeps growing while the new hash table fits beside the tables it
    // already holds.  When a site would overflow, the segment closes and the
    // chain resumes in a follow-up segment that rereads its output.
    int g;
    if (r.gang >= 0 && fits_into(held[std::size_t(r.gang)], need)) {
      g = r.gang;
    } else {
      g = int(out.gangs.size());
      out.gangs.emplace_back();
      out.preds.emplace_back();
      held.emplace_back();
      if (r.gang >= 0) {
        out.preds[std::size_t(g)].push_back(r.gang);
        out.edges.push_back({r.gang, g, EdgeKind::DiskMat, r.cost.op_id, probe.op_id});
      }
    }
    merge_into(held[std::size_t(g)], need);
    for (Clone& c : add.clones) out.gangs[std::size_t(g)].clones.push_back(std::move(c));
    // A build over another join's output waits for that subtree to finish.
    if (l.gang >= 0) {
      out.preds[std::size_t(g)].push_back(l.gang);
      out.edges.push_back({l.gang, g, EdgeKind::DiskMat, l.cost.op_id, build.op_id});
    }
    out.edges.push_back({g, g, EdgeKind::MemMat, build.op_id, probe.op_id});
    return {std::move(probe), l.homes, g};
  };

  ZFeed top = walk(plan.root, false);
  if (top.gang < 0) {  // joinless plan: the scan needs a gang of its own
    out.gangs.emplace_back();
    out.preds.emplace_back();
    emit_clones(top.cost, top.homes, cfg, out.gangs.back(), next_id);
    top.gang = 0;
  }
  auto store = estimate_operator(OpKind::Store, prefix + ".store", top.cost.output, nullptr,
                                 cfg.hw, cfg.ssr_dims);
  std::vector<int> all(static_cast<std::size_t>(p_sites));
  for (int i = 0; i < p_sites; ++i) all[std::size_t(i)] = i;
  emit_clones(store, all, cfg, out.gangs[std::size_t(top.gang)], next_id);

  for (Pipeline& g : out.gangs) g.refresh_t_max();
  return out;
}

}  // namespace

BaselineResult zsched(const std::vector<Plan>& plans, const Catalog& catalog, int p_sites,
                      const SystemConfig& cfg) {
  if (p_sites < 1) throw SchedError("zsched: need at least one site");
  cfg.validate();

  BaselineResult out;
  out.schedule.algo = "zsched";
  base_params(out.schedule, p_sites, cfg);
  out.query_gangs.resize(plans.size());

  std::vector<Pipeline> gangs;                 // indexed by global gang id
  std::vector<std::vector<int>> preds;         // global gang -> feeding gangs
  int next_id = 0;
  for (std::size_t q = 0; q < plans.size(); ++q) {
    ZQuery zq;
    int id_mark = next_id;
    try {
      zq = expand_at_homes(plans[q], catalog, int(q), p_sites, cfg, next_id);
    } catch (const InfeasibleError&) {
      // A single clone already overflows its home site; running it there can
      // never satisfy the memory switch, so the query is deferred outright.
      next_id = id_mark;
      out.deferred.push_back(int(q));
      continue;
    }

    bool solo_ok = true;
    for (const Pipeline& g : zq.gangs)
      for (const auto& [site, dv] : demand_by_site(g)) {
        (void)site;
        for (double d : dv) solo_ok = solo_ok && d <= 1.0 + kCapacityTol;
      }
    if (!solo_ok) {
      out.deferred.push_back(int(q));
      continue;
    }

    int base = int(gangs.size());
    for (std::size_t g = 0; g < zq.gangs.size(); ++g) {
      zq.gangs[g].id = base + int(g);
      out.query_gangs[q].push_back(base + int(g));
      preds.emplace_back();
      for (int pr : zq.preds[g]) preds.back().push_back(base + pr);
      gangs.push_back(zq.gangs[g]);
      out.instance.groups.push_back(std::move(zq.gangs[g]));
    }
    for (TaskEdge e : zq.edges) {
      e.child += base;
      e.parent += base;
      out.instance.edges.push_back(std::move(e));
    }
  }

  // Round-based first fit.  A segment becomes eligible once every segment
  // feeding it finished in an earlier round; eligible segments join the open
  // round while their whole memory footprint still fits, the rest wait.
  std::vector<int> round_of(gangs.size(), -1);
  std::size_t placed = 0;
  while (placed < gangs.size()) {
    int round = int(out.schedule.levels.size());
    std::map<int, std::vector<double>> used;
    std::vector<int> members;
    for (std::size_t g = 0; g < gangs.size(); ++g) {
      if (round_of[g] >= 0) continue;
      bool ready = true;
      for (int pr : preds[g]) ready = ready && round_of[std::size_t(pr)] >= 0 &&
                                      round_of[std::size_t(pr)] < round;
      if (!ready) continue;
      auto need = demand_by_site(gangs[g]);
      if (!fits_into(used, need)) continue;
      merge_into(used, need);
      round_of[g] = round;
      members.push_back(int(g));
      ++placed;
    }
    if (members.empty())
      throw SchedError("zsched: no pending segment fits an empty round");  // unreachable
    ScheduleLevel lv = seal_level(members, gangs, out.schedule.response_ms);
    out.schedule.response_ms += lv.height_ms;
    out.schedule.levels.push_back(std::move(lv));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hierarchical one-dimensional allotment.

namespace {

// A per-join allotment slot: the join's two phases plus any operators that
// stream into it, reduced to scalar work for the search.
struct HSlot {
  std::optional<OperatorCost> build, probe;
  double area_ms = 0.0;    // scalar work incl. attached operators
  double mem = 0.0;        // one-pass hash table demand (largest component)
  int min_sites = 1;
};

// An operator that is not a join phase: rooted ones keep their pins; the
// rest run on the sites of the slot they stream into.
struct HExtra {
  OperatorCost cost;
  std::vector<int> pins;  // empty: co-locate with the owning slot
  int slot = 0;
};

struct HQuery {
  std::vector<HSlot> slots;
  std::vector<HExtra> extras;
};

HQuery analyze_query(const Plan& plan, const Catalog& catalog, int query, const SystemConfig& cfg) {
  HQuery out;
  std::string prefix = "q" + std::to_string(query);
  int join_seq = 0;

  auto attach = [&](OperatorCost cost, const std::vector<int>* pins, int slot) {
    out.slots[std::size_t(slot)].area_ms += processing_area(cost);
    HExtra e;
    e.cost = std::move(cost);
    if (pins) e.pins = *pins;
    e.slot = slot;
    out.extras.push_back(std::move(e));
  };

  // Returns the producing operator's cost; leaves hand their scan to the
  // consuming join via `attach_to`.
  std::function<OperatorCost(int, bool, int)> walk = [&](int node_id, bool feeds_split,
                                                         int attach_to) -> OperatorCost {
    const PlanNode& nd = plan.nodes[std::size_t(node_id)];
    if (nd.is_leaf()) {
      const RelationStats& rel = catalog.find(nd.relation);
      auto cost = estimate_operator(OpKind::Scan, prefix + ".scan." + nd.relation, rel, nullptr,
                                    cfg.hw, cfg.ssr_dims, 1.0, feeds_split);
      const std::vector<int>* homes = catalog.homes(nd.relation);
      attach(cost, homes && !homes->empty() ? homes : nullptr, attach_to);
      return cost;
    }

    int tag = join_seq++;
    if (int(out.slots.size()) <= tag) out.slots.resize(std::size_t(tag) + 1);
    OperatorCost lcost = walk(nd.left, true, tag);
    OperatorCost rcost = walk(nd.right, true, tag);
    HSlot& slot = out.slots[std::size_t(tag)];
    slot.build = estimate_operator(OpKind::Build, prefix + ".build." + std::to_string(tag),
                                   lcost.output, nullptr, cfg.hw, cfg.ssr_dims);
    slot.probe = estimate_operator(OpKind::Probe, prefix + ".probe." + std::to_string(tag),
                                   rcost.output, &lcost.output, cfg.hw, cfg.ssr_dims, 1.0,
                                   feeds_split);
    slot.area_ms += processing_area(*slot.build) + processing_area(*slot.probe);
    slot.mem = length(slot.build->total_demand);
    return *slot.probe;
  };

  if (plan.nodes[std::size_t(plan.root)].is_leaf()) out.slots.resize(1);
  OperatorCost top = walk(plan.root, false, 0);
  auto store = estimate_operator(OpKind::Store, prefix + ".store", top.output, nullptr, cfg.hw,
                                 cfg.ssr_dims);
  attach(store, nullptr, 0);  // placed across all sites at realization time
  for (auto& s : out.slots) s.min_sites = std::max(1, int(std::ceil(s.mem - kCapacityTol)));
  return out;
}

struct Shelf {
  std::vector<int> jobs;
  int used = 0;
  double height = 0.0;
};

// LPT list schedule of whole jobs under fixed site counts (scalar model).
std::vector<Shelf> list_shelves(const std::vector<double>& time, const std::vector<int>& width,
                                int p) {
  std::vector<int> order(time.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = int(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (time[std::size_t(a)] != time[std::size_t(b)])
      return time[std::size_t(a)] > time[std::size_t(b)];
    return a < b;
  });
  std::vector<Shelf> shelves;
  for (int q : order) {
    bool placed = false;
    for (auto& sh : shelves)
      if (sh.used + width[std::size_t(q)] <= p) {
        sh.jobs.push_back(q);
        sh.used += width[std::size_t(q)];
        sh.height = std::max(sh.height, time[std::size_t(q)]);
        placed = true;
        break;
      }
    if (!placed) shelves.push_back({{q}, width[std::size_t(q)], time[std::size_t(q)]});
  }
  return shelves;
}

using Allotment = std::vector<std::vector<int>>;  // query -> slot -> sites

// Explores allotments from the memory minimum upward, growing the slowest
// join of the most wasteful job until a zero-waste shelf packing appears,
// and returns the allotment with the smallest estimated makespan.
Allotment search_allotment(const std::vector<HQuery>& queries, int p) {
  std::size_t nq = queries.size();
  Allotment allot(nq);
  std::vector<int> width(nq, 0);
  for (std::size_t q = 0; q < nq; ++q) {
    for (const HSlot& s : queries[q].slots) {
      allot[q].push_back(s.min_sites);
      width[q] += s.min_sites;
    }
    if (width[q] > p)
      throw InfeasibleError("q" + std::to_string(q),
                            "query q" + std::to_string(q) + " needs " + std::to_string(width[q]) +
                                " sites to keep its hash tables in memory, but only " +
                                std::to_string(p) + " exist");
  }

  auto job_time = [&](std::size_t q) {
    double t = 0.0;
    for (std::size_t j = 0; j < queries[q].slots.size(); ++j)
      t = std::max(t, queries[q].slots[j].area_ms / double(allot[q][j]));
    return t;
  };

  Allotment best = allot;
  double best_makespan = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<double> time(nq);
    for (std::size_t q = 0; q < nq; ++q) time[q] = job_time(q);
    auto shelves = list_shelves(time, width, p);
    double makespan = 0.0;
    for (const auto& sh : shelves) makespan += sh.height;
    if (makespan < best_makespan) {
      best_makespan = makespan;
      best = allot;
    }

    int grow = -1;
    double max_waste = 0.0;
    for (const auto& sh : shelves)
      for (int q : sh.jobs) {
        double waste = double(width[std::size_t(q)]) * (sh.height - time[std::size_t(q)]);
        if (waste > max_waste + 1e-9 && width[std::size_t(q)] < p) {
          max_waste = waste;
          grow = q;
        }
      }
    if (grow < 0) break;

    std::size_t gq = std::size_t(grow);
    std::size_t slowest = 0;
    double slowest_t = -1.0;
    for (std::size_t j = 0; j < queries[gq].slots.size(); ++j) {
      double t = queries[gq].slots[j].area_ms / double(allot[gq][j]);
      if (t > slowest_t) {
        slowest_t = t;
        slowest = j;
      }
    }
    ++allot[gq][slowest];
    ++width[gq];
  }
  return best;
}

struct Realized {
  std::vector<Pipeline> gangs;
  std::vector<std::vector<int>> levels;               // shelf -> queries
  std::map<int, std::pair<int, int>> slot_of_clone;   // clone -> (query, slot)
};

Realized realize(const std::vector<HQuery>& queries, const Allotment& allot, int p,
                 const SystemConfig& cfg) {
  std::size_t nq = queries.size();
  std::vector<double> time(nq);
  std::vector<int> width(nq, 0);
  for (std::size_t q = 0; q < nq; ++q) {
    double t = 0.0;
    for (std::size_t j = 0; j < queries[q].slots.size(); ++j) {
      t = std::max(t, queries[q].slots[j].area_ms / double(allot[q][j]));
      width[q] += allot[q][j];
    }
    time[q] = t;
  }
  auto shelves = list_shelves(time, width, p);

  // Disjoint contiguous site blocks per job, slots packed in join order.
  std::vector<std::vector<int>> slot_sites(nq);  // flattened per query
  Realized out;
  out.gangs.assign(nq, Pipeline{});
  for (const auto& sh : shelves) {
    int base = 0;
    std::vector<int> qs = sh.jobs;
    std::sort(qs.begin(), qs.end());
    out.levels.push_back(qs);
    for (int q : qs) {
      for (int s = base; s < base + width[std::size_t(q)]; ++s)
        slot_sites[std::size_t(q)].push_back(s);
      base += width[std::size_t(q)];
    }
  }

  std::vector<int> all(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) all[std::size_t(i)] = i;

  int next_id = 0;
  for (std::size_t q = 0; q < nq; ++q) {
    Pipeline& gang = out.gangs[q];
    gang.id = int(q);
    int off = 0;
    std::vector<std::vector<int>> sites_of_slot;
    for (std::size_t j = 0; j < queries[q].slots.size(); ++j) {
      std::vector<int> sites(slot_sites[q].begin() + off,
                             slot_sites[q].begin() + off + allot[q][j]);
      off += allot[q][j];
      sites_of_slot.push_back(sites);
      const HSlot& slot = queries[q].slots[j];
      if (slot.build) {
        int first = next_id;
        emit_clones(*slot.build, sites, cfg, gang, next_id);
        emit_clones(*slot.probe, sites, cfg, gang, next_id);
        for (int id = first; id < next_id; ++id)
          out.slot_of_clone[id] = {int(q), int(j)};
      }
    }
    for (const HExtra& e : queries[q].extras) {
      const std::vector<int>& sites =
          e.cost.kind == OpKind::Store ? all
          : e.pins.empty()             ? sites_of_slot[std::size_t(e.slot)]
                                       : e.pins;
      int first = next_id;
      emit_clones(e.cost, sites, cfg, gang, next_id);
      if (e.pins.empty() && e.cost.kind != OpKind::Store)
        for (int id = first; id < next_id; ++id)
          out.slot_of_clone[id] = {int(q), e.slot};
    }
    gang.refresh_t_max();
  }
  return out;
}

}  // namespace

BaselineResult hier_sched(const std::vector<Plan>& plans, const Catalog& catalog, int p_sites,
                          const SystemConfig& cfg) {
  if (p_sites < 1) throw SchedError("hier_sched: need at least one site");
  cfg.validate();

  std::vector<HQuery> queries;
  for (std::size_t q = 0; q < plans.size(); ++q)
    queries.push_back(analyze_query(plans[q], catalog, int(q), cfg));

  // The scalar search ignores the small buffer reservations of scans and
  // stores, so a boundary-tight allotment can oversubscribe a site once those
  // land.  Raise the offending join's floor and search again.
  Realized real;
  Allotment allot;
  for (int round = 0;; ++round) {
    allot = search_allotment(queries, p_sites);
    real = realize(queries, allot, p_sites, cfg);

    std::pair<int, int> bump{-1, -1};
    for (const auto& level : real.levels) {
      std::map<int, SiteLoad> sites;
      // Per site: the grow-eligible clone holding the largest reservation.
      std::map<int, std::pair<double, int>> heavy;
      for (int q : level)
        for (const Clone& c : real.gangs[std::size_t(q)].clones) {
          sites[*c.site].add(c);
          if (!real.slot_of_clone.count(c.id)) continue;
          double len = length(c.demand);
          auto [it, fresh] = heavy.emplace(*c.site, std::make_pair(len, c.id));
          if (!fresh && len > it->second.first) it->second = {len, c.id};
        }
      for (const auto& [site, load] : sites) {
        if (!load.over_capacity()) continue;
        auto h = heavy.find(site);
        if (h == heavy.end())
          throw InfeasibleError("hier_sched", "site " + std::to_string(site) +
                                                  " oversubscribed by rooted operators alone");
        bump = real.slot_of_clone.at(h->second.second);
        break;
      }
      if (bump.first >= 0) break;
    }
    if (bump.first < 0) break;

    HSlot& slot = queries[std::size_t(bump.first)].slots[std::size_t(bump.second)];
    slot.min_sites = allot[std::size_t(bump.first)][std::size_t(bump.second)] + 1;
    if (round > int(plans.size()) * p_sites)
      throw InfeasibleError("hier_sched", "allotment repair failed to stabilize");
  }

  BaselineResult out;
  out.schedule.algo = "hier_sched";
  base_params(out.schedule, p_sites, cfg);
  for (const auto& qs : real.levels) {
    ScheduleLevel lv = seal_level(qs, real.gangs, out.schedule.response_ms);
    out.schedule.response_ms += lv.height_ms;
    out.schedule.levels.push_back(std::move(lv));
  }
  for (std::size_t q = 0; q < real.gangs.size(); ++q) {
    out.instance.groups.push_back(real.gangs[q]);
    out.query_gangs.push_back({int(q)});
    for (std::size_t j = 0; j < queries[q].slots.size(); ++j) {
      const HSlot& s = queries[q].slots[j];
      if (s.build)
        out.instance.edges.push_back(
            {int(q), int(q), EdgeKind::MemMat, s.build->op_id, s.probe->op_id});
    }
  }
  return out;
}

}  // namespace mrsched
