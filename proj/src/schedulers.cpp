#include "mrsched/schedulers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mrsched {

int Schedule::site_of(int clone) const {
  for (const auto& lv : levels)
    for (auto [c, s] : lv.places)
      if (c == clone) return s;
  return -1;
}

namespace {

// Running totals of one site within one level/shelf.
struct SiteAcc {
  std::vector<double> w, v;
  double max_seq = 0.0;

  void add(const Clone& c) {
    if (w.size() < c.work.dim()) w.resize(c.work.dim(), 0.0);
    if (v.size() < c.demand.dim()) v.resize(c.demand.dim(), 0.0);
    for (std::size_t i = 0; i < c.work.dim(); ++i) w[i] += c.work[i];
    for (std::size_t i = 0; i < c.demand.dim(); ++i) v[i] += c.demand[i];
    max_seq = std::max(max_seq, c.seq_ms);
  }
  bool fits(const Clone& c) const {
    for (std::size_t i = 0; i < c.demand.dim(); ++i) {
      double have = i < v.size() ? v[i] : 0.0;
      if (have + c.demand[i] > 1.0 + kCapacityTol) return false;
    }
    return true;
  }
  double work_len() const { return vector_length(w); }
  double height() const { return std::max(max_seq, vector_length(w)); }
};

// One synchronized level under construction.
struct LevelBuilder {
  std::vector<SiteAcc> sites;
  ScheduleLevel level;

  explicit LevelBuilder(int p) : sites(std::size_t(p)) {}

  void place(const Clone& c, int site) {
    sites[std::size_t(site)].add(c);
    level.places.emplace_back(c.id, site);
  }

  void place_pinned(const Clone& c) {
    int s = *c.site;
    if (s < 0 || s >= int(sites.size()))
      throw SchedError("schedule: clone " + c.op + " pinned to unknown site");
    if (!sites[std::size_t(s)].fits(c))
      throw InfeasibleError(c.op, "rooted clone " + c.op + " does not fit its site");
    place(c, s);
  }

  void place_floating(const Clone& c) {
    int best = -1;
    double best_len = 0.0;
    for (std::size_t i = 0; i < sites.size(); ++i) {
      if (!sites[i].fits(c)) continue;
      double len = sites[i].work_len();
      if (best < 0 || len < best_len) {
        best = int(i);
        best_len = len;
      }
    }
    if (best < 0) throw InfeasibleError(c.op, "no site can host clone " + c.op);
    place(c, best);
  }

  void seal() {
    double h = 0.0;
    for (const auto& s : sites) h = std::max(h, s.height());
    level.height_ms = h;
    std::sort(level.places.begin(), level.places.end());
  }
};

double density(const Clone& c) {
  double lv = length(c.demand);
  if (lv <= 0.0) return std::numeric_limits<double>::infinity();
  return length(c.work) / lv;
}

// Places a set of co-scheduled clones: rooted ones first, then floating ones
// in non-increasing work-density order onto the min-work-length open site.
ScheduleLevel build_level(const std::vector<const Clone*>& clones, int p) {
  LevelBuilder lb(p);
  std::vector<const Clone*> pinned, floating;
  for (const Clone* c : clones) (c->site ? pinned : floating).push_back(c);
  std::sort(pinned.begin(), pinned.end(),
            [](const Clone* a, const Clone* b) { return a->id < b->id; });
  std::sort(floating.begin(), floating.end(), [](const Clone* a, const Clone* b) {
    double da = density(*a), db = density(*b);
    if (da != db) return da > db;
    return a->id < b->id;
  });
  for (const Clone* c : pinned) lb.place_pinned(*c);
  for (const Clone* c : floating) lb.place_floating(*c);
  lb.seal();
  return lb.level;
}

// A schedulable group (pipeline or merged unit) waiting for a level.
struct GroupRef {
  int id = -1;
  double t_max = 0.0;
  const std::vector<Clone>* clones = nullptr;
  std::vector<double> demand_sum;
};

GroupRef make_group(int id, const Pipeline& p) {
  GroupRef g;
  g.id = id;
  g.t_max = p.t_max;
  g.clones = &p.clones;
  for (const auto& c : p.clones) {
    if (g.demand_sum.size() < c.demand.dim()) g.demand_sum.resize(c.demand.dim(), 0.0);
    for (std::size_t i = 0; i < c.demand.dim(); ++i) g.demand_sum[i] += c.demand[i];
  }
  return g;
}

double len_with(const std::vector<double>& acc, const std::vector<double>& extra) {
  double worst = 0.0;
  for (std::size_t i = 0; i < std::max(acc.size(), extra.size()); ++i) {
    double s = (i < acc.size() ? acc[i] : 0.0) + (i < extra.size() ? extra[i] : 0.0);
    worst = std::max(worst, s);
  }
  return worst;
}

void accumulate(std::vector<double>& acc, const std::vector<double>& extra) {
  if (acc.size() < extra.size()) acc.resize(extra.size(), 0.0);
  for (std::size_t i = 0; i < extra.size(); ++i) acc[i] += extra[i];
}

// Cuts the next level off `ready` (kept sorted by t_max desc, id asc): a
// maximal prefix within the demand budget, optionally topped up with any
// remaining group that still fits.  Always takes at least one group.
std::vector<GroupRef> take_level(std::vector<GroupRef>& ready, double theta, bool re_check) {
  std::sort(ready.begin(), ready.end(), [](const GroupRef& a, const GroupRef& b) {
    if (a.t_max != b.t_max) return a.t_max > b.t_max;
    return a.id < b.id;
  });
  std::vector<GroupRef> out;
  std::vector<double> acc;
  std::vector<char> taken(ready.size(), 0);

  std::size_t i = 0;
  for (; i < ready.size(); ++i) {
    if (!out.empty() && len_with(acc, ready[i].demand_sum) > theta + kCapacityTol) break;
    accumulate(acc, ready[i].demand_sum);
    taken[i] = 1;
    out.push_back(std::move(ready[i]));
  }
  if (re_check) {
    for (std::size_t j = i; j < ready.size(); ++j) {
      if (len_with(acc, ready[j].demand_sum) > theta + kCapacityTol) continue;
      accumulate(acc, ready[j].demand_sum);
      taken[j] = 1;
      out.push_back(std::move(ready[j]));
    }
  }
  std::vector<GroupRef> rest;
  for (std::size_t j = 0; j < ready.size(); ++j)
    if (!taken[j]) rest.push_back(std::move(ready[j]));
  ready = std::move(rest);
  return out;
}

ScheduleLevel level_for_groups(const std::vector<GroupRef>& groups, int p) {
  std::vector<const Clone*> clones;
  for (const auto& g : groups)
    for (const auto& c : *g.clones) clones.push_back(&c);
  ScheduleLevel lv = build_level(clones, p);
  for (const auto& g : groups) lv.groups.push_back(g.id);
  std::sort(lv.groups.begin(), lv.groups.end());
  return lv;
}

void base_params(Schedule& s, int p, const SystemConfig& cfg) {
  s.params["sites"] = double(p);
  s.params["epsilon"] = cfg.epsilon;
}

double demand_budget(int p, const SystemConfig& cfg) {
  if (cfg.grain.lambda >= 1.0)
    throw SchedError("level scheduling requires lambda < 1");
  return double(p) * (1.0 - cfg.grain.lambda) / double(cfg.ssr_dims);
}

}  // namespace

Schedule op_sched(const std::vector<Clone>& clones, int p_sites, const SystemConfig& cfg) {
  if (p_sites < 1) throw SchedError("op_sched: need at least one site");
  cfg.validate();
  for (const auto& c : clones)
    if (length(c.demand) > 1.0 + kCapacityTol)
      throw InfeasibleError(c.op, "clone " + c.op + " demands more than one site");

  std::vector<const Clone*> order;
  for (const auto& c : clones) order.push_back(&c);
  std::sort(order.begin(), order.end(), [](const Clone* a, const Clone* b) {
    if (a->seq_ms != b->seq_ms) return a->seq_ms > b->seq_ms;
    return a->id < b->id;
  });

  struct SiteShelves {
    std::vector<SiteAcc> shelves;
    double total = 0.0;
  };
  std::vector<SiteShelves> sites(static_cast<std::size_t>(p_sites));
  std::vector<std::vector<std::pair<int, int>>> shelf_places;  // by shelf index

  for (const Clone* c : order) {
    int target = -1;
    if (c->site) {
      target = *c->site;
      if (target < 0 || target >= p_sites)
        throw SchedError("op_sched: clone " + c->op + " pinned to unknown site");
    } else {
      double best = 0.0;
      for (int i = 0; i < p_sites; ++i)
        if (target < 0 || sites[std::size_t(i)].total < best) {
          target = i;
          best = sites[std::size_t(i)].total;
        }
    }
    auto& st = sites[std::size_t(target)];
    if (st.shelves.empty() || !st.shelves.back().fits(*c)) st.shelves.emplace_back();
    SiteAcc& shelf = st.shelves.back();
    double before = shelf.height();
    shelf.add(*c);
    st.total += shelf.height() - before;

    std::size_t idx = st.shelves.size() - 1;
    if (shelf_places.size() <= idx) shelf_places.resize(idx + 1);
    shelf_places[idx].emplace_back(c->id, target);
  }

  Schedule s;
  s.mode = ScheduleMode::PerSiteShelves;
  s.algo = "op_sched";
  base_params(s, p_sites, cfg);
  for (std::size_t j = 0; j < shelf_places.size(); ++j) {
    ScheduleLevel lv;
    lv.places = std::move(shelf_places[j]);
    std::sort(lv.places.begin(), lv.places.end());
    double h = 0.0;
    for (const auto& st : sites)
      if (j < st.shelves.size()) h = std::max(h, st.shelves[j].height());
    lv.height_ms = h;
    s.levels.push_back(std::move(lv));
  }
  for (const auto& st : sites) s.response_ms = std::max(s.response_ms, st.total);
  return s;
}

Schedule pipe_sched(const Pipeline& pipe, int p_sites, const SystemConfig& cfg) {
  if (p_sites < 1) throw SchedError("pipe_sched: need at least one site");
  cfg.validate();
  std::vector<const Clone*> clones;
  for (const auto& c : pipe.clones) clones.push_back(&c);

  Schedule s;
  s.mode = ScheduleMode::SyncedLevels;
  s.algo = "pipe_sched";
  base_params(s, p_sites, cfg);
  ScheduleLevel lv = build_level(clones, p_sites);
  lv.groups = {pipe.id};
  s.response_ms = lv.height_ms;
  s.levels.push_back(std::move(lv));
  return s;
}

Schedule level_sched(const std::vector<Pipeline>& pipes, int p_sites, const SystemConfig& cfg,
                     bool re_check) {
  if (p_sites < 1) throw SchedError("level_sched: need at least one site");
  cfg.validate();
  double theta = demand_budget(p_sites, cfg);

  std::vector<GroupRef> ready;
  for (const auto& p : pipes) ready.push_back(make_group(p.id, p));

  Schedule s;
  s.mode = ScheduleMode::SyncedLevels;
  s.algo = "level_sched";
  base_params(s, p_sites, cfg);
  s.params["lambda"] = cfg.grain.lambda;
  s.params["re_check"] = re_check ? 1.0 : 0.0;

  while (!ready.empty()) {
    auto groups = take_level(ready, theta, re_check);
    ScheduleLevel lv = level_for_groups(groups, p_sites);
    lv.start_ms = s.response_ms;
    s.response_ms += lv.height_ms;
    s.levels.push_back(std::move(lv));
  }
  return s;
}

namespace {

// Roots the consuming operator of `parent` on the sites that executed the
// producing operator of the finished child.
void inherit_sites(Pipeline& parent, const Pipeline& child, const TaskEdge& edge,
                   const Schedule& sched) {
  std::vector<int> producer_sites;
  for (const auto& c : child.clones)
    if (op_matches(c.op, edge.producer_op)) {
      int s = sched.site_of(c.id);
      if (s >= 0) producer_sites.push_back(s);
    }
  std::sort(producer_sites.begin(), producer_sites.end());
  producer_sites.erase(std::unique(producer_sites.begin(), producer_sites.end()),
                       producer_sites.end());
  if (producer_sites.empty()) return;

  int k = 0;
  for (auto& c : parent.clones)
    if (op_matches(c.op, edge.consumer_op)) {
      int s = producer_sites[std::size_t(k++) % producer_sites.size()];
      if (c.site && *c.site != s)
        throw SchedError("tree_sched: clone " + c.op + " inherits conflicting sites");
      c.site = s;
    }
}

struct TreeRun {
  MergedTree merged;
  Schedule schedule;
  std::vector<int> waiting;                 // unfinished children per unit
  std::vector<std::vector<int>> out_edges;  // unit -> indices into merged.edges
  std::vector<GroupRef> ready;
  int done = 0;

  TreeRun(const TaskTree& tree, double epsilon, int p, const SystemConfig& cfg,
          const std::string& algo)
      : merged(merge_memory_pipelines(tree, epsilon)) {
    waiting.assign(merged.units.size(), 0);
    out_edges.assign(merged.units.size(), {});
    for (std::size_t i = 0; i < merged.edges.size(); ++i) {
      const TaskEdge& e = merged.edges[i];
      ++waiting[std::size_t(e.parent)];
      out_edges[std::size_t(e.child)].push_back(int(i));
    }
    schedule.mode = ScheduleMode::SyncedLevels;
    schedule.algo = algo;
    schedule.params["sites"] = double(p);
    schedule.params["epsilon"] = cfg.epsilon;
    schedule.params["lambda"] = cfg.grain.lambda;
  }

  void seed_ready() {
    for (std::size_t u = 0; u < merged.units.size(); ++u)
      if (waiting[u] == 0) ready.push_back(make_group(int(u), merged.units[u]));
  }

  // Runs one level; returns its height.  Requires non-empty ready list.
  double run_level(double clock, int p, double theta, bool re_check) {
    auto groups = take_level(ready, theta, re_check);
    ScheduleLevel lv = level_for_groups(groups, p);
    lv.start_ms = clock;
    schedule.levels.push_back(lv);
    schedule.response_ms = clock + lv.height_ms;

    for (const auto& g : groups) {
      ++done;
      for (int ei : out_edges[std::size_t(g.id)]) {
        const TaskEdge& e = merged.edges[std::size_t(ei)];
        inherit_sites(merged.units[std::size_t(e.parent)], merged.units[std::size_t(e.child)], e,
                      schedule);
        if (--waiting[std::size_t(e.parent)] == 0)
          ready.push_back(make_group(e.parent, merged.units[std::size_t(e.parent)]));
      }
    }
    return lv.height_ms;
  }
};

}  // namespace

TreeSchedResult tree_sched(const TaskTree& tree, int p_sites, const SystemConfig& cfg,
                           bool re_check) {
  if (p_sites < 1) throw SchedError("tree_sched: need at least one site");
  cfg.validate();
  double theta = demand_budget(p_sites, cfg);
  TreeRun run(tree, cfg.epsilon, p_sites, cfg, "tree_sched");
  run.schedule.params["re_check"] = re_check ? 1.0 : 0.0;
  run.seed_ready();

  double clock = 0.0;
  while (!run.ready.empty()) clock += run.run_level(clock, p_sites, theta, re_check);
  if (run.done != int(run.merged.units.size()))
    throw SchedError("tree_sched: dependency deadlock");  // unreachable after validate
  return {std::move(run.merged), std::move(run.schedule)};
}

OnlineResult tree_sched_online(const std::vector<Arrival>& arrivals, int p_sites,
                               const SystemConfig& cfg, bool re_check) {
  if (p_sites < 1) throw SchedError("tree_sched_online: need at least one site");
  cfg.validate();
  double theta = demand_budget(p_sites, cfg);

  OnlineResult out;
  out.schedule.mode = ScheduleMode::SyncedLevels;
  out.schedule.algo = "tree_sched_online";
  out.schedule.params["sites"] = double(p_sites);
  out.schedule.params["epsilon"] = cfg.epsilon;
  out.schedule.params["lambda"] = cfg.grain.lambda;
  out.schedule.params["re_check"] = re_check ? 1.0 : 0.0;

  // Merge every query up front; unit and clone ids run in arrival-list order.
  struct QueryState {
    int first_unit = 0, n_units = 0, remaining = 0;
    bool admitted = false;
  };
  std::vector<QueryState> queries;
  std::vector<int> query_of_unit;
  std::vector<int> waiting;
  std::vector<std::vector<int>> out_edges;  // unit -> edge indices
  int clone_base = 0;

  for (std::size_t q = 0; q < arrivals.size(); ++q) {
    if (arrivals[q].at_ms < 0.0) throw SchedError("online: negative arrival time");
    MergedTree m = merge_memory_pipelines(arrivals[q].tree, cfg.epsilon);
    QueryState qs;
    qs.first_unit = int(out.merged.units.size());
    qs.n_units = qs.remaining = int(m.units.size());
    int unit_base = qs.first_unit;
    int max_clone = -1;
    for (auto& u : m.units) {
      u.id += unit_base;
      for (auto& c : u.clones) {
        max_clone = std::max(max_clone, c.id);
        c.id += clone_base;
      }
      query_of_unit.push_back(int(q));
      waiting.push_back(0);
      out_edges.emplace_back();
      out.merged.units.push_back(std::move(u));
    }
    for (auto& e : m.edges) {
      e.child += unit_base;
      e.parent += unit_base;
      ++waiting[std::size_t(e.parent)];
      out_edges[std::size_t(e.child)].push_back(int(out.merged.edges.size()));
      out.merged.edges.push_back(std::move(e));
    }
    for (auto& src : m.unit_sources) out.merged.unit_sources.push_back(std::move(src));
    clone_base += max_clone + 1;
    queries.push_back(qs);
  }

  std::vector<GroupRef> ready;
  double clock = 0.0;
  int pending = int(arrivals.size());

  auto admit = [&](double now) {
    for (std::size_t q = 0; q < queries.size(); ++q) {
      if (queries[q].admitted || arrivals[q].at_ms > now + 1e-9) continue;
      queries[q].admitted = true;
      --pending;
      for (int u = queries[q].first_unit; u < queries[q].first_unit + queries[q].n_units; ++u)
        if (waiting[std::size_t(u)] == 0)
          ready.push_back(make_group(u, out.merged.units[std::size_t(u)]));
    }
  };

  while (true) {
    admit(clock);
    if (ready.empty()) {
      if (pending == 0) break;
      double next = std::numeric_limits<double>::infinity();
      for (std::size_t q = 0; q < queries.size(); ++q)
        if (!queries[q].admitted) next = std::min(next, arrivals[q].at_ms);
      clock = std::max(clock, next);
      continue;
    }

    auto groups = take_level(ready, theta, re_check);
    ScheduleLevel lv = level_for_groups(groups, p_sites);
    lv.start_ms = clock;
    clock += lv.height_ms;
    out.schedule.levels.push_back(lv);
    out.schedule.response_ms = clock;

    for (const auto& g : groups) {
      for (int ei : out_edges[std::size_t(g.id)]) {
        const TaskEdge& e = out.merged.edges[std::size_t(ei)];
        inherit_sites(out.merged.units[std::size_t(e.parent)],
                      out.merged.units[std::size_t(e.child)], e, out.schedule);
        if (--waiting[std::size_t(e.parent)] == 0)
          ready.push_back(make_group(e.parent, out.merged.units[std::size_t(e.parent)]));
      }
      int q = query_of_unit[std::size_t(g.id)];
      if (--queries[std::size_t(q)].remaining == 0)
        out.completions.push_back({q, arrivals[std::size_t(q)].at_ms, clock});
    }
  }

  std::sort(out.completions.begin(), out.completions.end(),
            [](const QueryCompletion& a, const QueryCompletion& b) { return a.query < b.query; });
  return out;
}

}  // namespace mrsched
