#include "mrsched/workload.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace mrsched {

const char* shape_name(PlanShape s) {
  switch (s) {
    case PlanShape::BushyRandom: return "bushy_random";
    case PlanShape::RightDeep: return "right_deep";
  }
  throw SchedError("unknown plan shape");
}

PlanShape shape_from_name(const std::string& name) {
  if (name == "bushy_random") return PlanShape::BushyRandom;
  if (name == "right_deep") return PlanShape::RightDeep;
  throw SchedError("unknown plan shape: " + name);
}

const char* placement_name(PlacementPolicy p) {
  switch (p) {
    case PlacementPolicy::None: return "none";
    case PlacementPolicy::Declust: return "declust";
    case PlacementPolicy::DeclustQuarter: return "declust_quarter";
    case PlacementPolicy::NoDeclust: return "no_declust";
    case PlacementPolicy::NoDeclustQuarter: return "no_declust_quarter";
    case PlacementPolicy::Random: return "random";
    case PlacementPolicy::QueryBasedDeclust: return "query_based_declust";
  }
  throw SchedError("unknown placement policy");
}

PlacementPolicy placement_from_name(const std::string& name) {
  for (auto p : {PlacementPolicy::None, PlacementPolicy::Declust, PlacementPolicy::DeclustQuarter,
                 PlacementPolicy::NoDeclust, PlacementPolicy::NoDeclustQuarter,
                 PlacementPolicy::Random, PlacementPolicy::QueryBasedDeclust})
    if (name == placement_name(p)) return p;
  throw SchedError("unknown placement policy: " + name);
}

void WorkloadSpec::validate() const {
  if (mix.empty()) throw SchedError("workload: empty query mix");
  for (const auto& m : mix)
    if (m.queries < 1 || m.joins < 0) throw SchedError("workload: bad mix entry");
  if (min_tuples < 1 || max_tuples < min_tuples) throw SchedError("workload: bad tuple range");
  if (page_tuples < 1) throw SchedError("workload: bad page_tuples");
}

int Workload::total_joins() const {
  int n = 0;
  for (const auto& p : plans) n += p.n_joins();
  return n;
}

namespace {

// Platform-independent uniform draws so identical seeds give identical
// workload bytes regardless of the standard library's distribution choices.
struct Rand {
  std::mt19937_64 eng;
  explicit Rand(std::uint64_t seed) : eng(seed) {}

  double real() { return double(eng() >> 11) * 0x1.0p-53; }  // [0, 1)

  long long below(long long n) {  // uniform over [0, n)
    if (n <= 0) throw SchedError("rand: empty range");
    std::uint64_t bound = std::uint64_t(n);
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / bound * bound;
    std::uint64_t x;
    do x = eng();
    while (x >= limit);
    return (long long)(x % bound);
  }

  long long log_uniform(long long lo, long long hi) {
    double v = std::exp(std::log(double(lo)) + real() * (std::log(double(hi)) - std::log(double(lo))));
    return std::clamp((long long)std::llround(v), lo, hi);
  }
};

int new_leaf(Plan& plan, const std::string& rel) {
  PlanNode nd;
  nd.id = int(plan.nodes.size());
  nd.relation = rel;
  plan.nodes.push_back(nd);
  return nd.id;
}

// Grows a uniform-ish random binary shape: splice a new join above a random
// existing node, hanging a fresh leaf on a random side.
Plan bushy_plan(int joins, Rand& rng, std::vector<std::string>& leaf_rels,
                int& rel_counter) {
  Plan plan;
  auto fresh = [&] {
    std::string name = "r" + std::to_string(rel_counter++);
    leaf_rels.push_back(name);
    return name;
  };
  plan.root = new_leaf(plan, fresh());
  std::vector<int> parent{-1};
  for (int j = 0; j < joins; ++j) {
    int pick = int(rng.below((long long)plan.nodes.size()));
    PlanNode join;
    join.id = int(plan.nodes.size());
    plan.nodes.push_back(join);
    parent.push_back(-1);
    int leaf = new_leaf(plan, fresh());
    parent.push_back(join.id);

    bool new_on_left = rng.below(2) == 0;
    plan.nodes[join.id].left = new_on_left ? leaf : pick;
    plan.nodes[join.id].right = new_on_left ? pick : leaf;

    int par = parent[pick];
    parent[pick] = join.id;
    if (par < 0) {
      plan.root = join.id;
    } else {
      if (plan.nodes[par].left == pick)
        plan.nodes[par].left = join.id;
      else
        plan.nodes[par].right = join.id;
      parent[join.id] = par;
    }
  }
  return plan;
}

Plan right_deep_plan(int joins, std::vector<std::string>& leaf_rels, int& rel_counter) {
  Plan plan;
  auto fresh = [&] {
    std::string name = "r" + std::to_string(rel_counter++);
    leaf_rels.push_back(name);
    return name;
  };
  if (joins == 0) {
    plan.root = new_leaf(plan, fresh());
    return plan;
  }
  // Builds first (top-down), the probe stream entering at the bottom right.
  std::vector<int> builds;
  for (int j = 0; j < joins; ++j) builds.push_back(new_leaf(plan, fresh()));
  int right = new_leaf(plan, fresh());
  for (int j = joins - 1; j >= 0; --j) {
    PlanNode join;
    join.id = int(plan.nodes.size());
    join.left = builds[j];
    join.right = right;
    plan.nodes.push_back(join);
    right = join.id;
  }
  plan.root = right;
  return plan;
}

}  // namespace

Workload gen_workload(const WorkloadSpec& spec) {
  spec.validate();
  Rand rng(spec.seed);
  Workload w;
  w.spec = spec;

  int rel_counter = 0;
  std::vector<std::string> leaf_rels;
  for (const auto& m : spec.mix)
    for (int q = 0; q < m.queries; ++q) {
      Plan p = spec.shape == PlanShape::BushyRandom
                   ? bushy_plan(m.joins, rng, leaf_rels, rel_counter)
                   : right_deep_plan(m.joins, leaf_rels, rel_counter);
      p.validate();
      w.plans.push_back(std::move(p));
    }

  for (const auto& name : leaf_rels) {
    long long tuples = rng.log_uniform(spec.min_tuples, spec.max_tuples);
    w.catalog.relations.push_back(RelationStats::of(name, tuples, spec.page_tuples));
  }
  return w;
}

namespace {

std::vector<int> pick_distinct_sites(int degree, int p_sites, Rand& rng) {
  std::vector<int> all(p_sites);
  std::iota(all.begin(), all.end(), 0);
  for (int i = 0; i < degree; ++i) {
    int j = i + int(rng.below(p_sites - i));
    std::swap(all[i], all[j]);
  }
  all.resize(degree);
  std::sort(all.begin(), all.end());
  return all;
}

std::vector<int> range_sites(int first, int degree, int p_sites) {
  std::vector<int> v;
  for (int i = 0; i < degree; ++i) v.push_back((first + i) % p_sites);
  std::sort(v.begin(), v.end());
  return v;
}

// Leaves that feed a join's build side, in plan-node order.
void collect_build_leaves(const Plan& plan, int node, bool build_side, std::vector<int>& out) {
  const PlanNode& nd = plan.nodes[node];
  if (nd.is_leaf()) {
    if (build_side) out.push_back(node);
    return;
  }
  collect_build_leaves(plan, nd.left, true, out);
  collect_build_leaves(plan, nd.right, false, out);
}

}  // namespace

void apply_placement(Workload& w, PlacementPolicy policy, int p_sites, const HardwareParams& hw,
                     std::uint64_t seed) {
  if (p_sites < 1) throw SchedError("placement: need at least one site");
  hw.validate();
  Rand rng(seed);
  auto& homes = w.catalog.home_sites;
  homes.clear();

  int quarter = std::max(1, p_sites / 4);
  long long max_tuples = 1;
  for (const auto& r : w.catalog.relations) max_tuples = std::max(max_tuples, r.tuples);

  switch (policy) {
    case PlacementPolicy::None:
      return;
    case PlacementPolicy::Declust:
      for (const auto& r : w.catalog.relations) homes[r.name] = range_sites(0, p_sites, p_sites);
      return;
    case PlacementPolicy::DeclustQuarter:
      for (const auto& r : w.catalog.relations) homes[r.name] = range_sites(0, quarter, p_sites);
      return;
    case PlacementPolicy::NoDeclust:
      for (const auto& r : w.catalog.relations)
        homes[r.name] = {int(rng.below(p_sites))};
      return;
    case PlacementPolicy::NoDeclustQuarter:
      for (const auto& r : w.catalog.relations)
        homes[r.name] = {int(rng.below(quarter))};
      return;
    case PlacementPolicy::Random:
      for (const auto& r : w.catalog.relations) {
        double frac = double(r.tuples) / double(max_tuples);
        int cap = std::clamp(int(std::llround(frac * p_sites)), 1, p_sites);
        int degree = 1 + int(rng.below(cap));
        homes[r.name] = pick_distinct_sites(degree, p_sites, rng);
      }
      return;
    case PlacementPolicy::QueryBasedDeclust: {
      // Split tables must fit in memory over their home; homes of the build
      // relations of one query avoid each other (wrapping only when the
      // query's tables outgrow the machine).
      for (const auto& plan : w.plans) {
        int cursor = int(rng.below(p_sites));
        std::vector<int> build_leaves;
        collect_build_leaves(plan, plan.root, false, build_leaves);
        for (int leaf : build_leaves) {
          const std::string& rel = plan.nodes[leaf].relation;
          if (homes.count(rel)) continue;  // shared relation already placed
          const RelationStats& rs = w.catalog.find(rel);
          double table_pages = hw.fudge_factor * double(rs.pages);
          int degree = std::min(
              p_sites, std::max(1, int(std::ceil(table_pages / double(hw.mem_pages_per_site)))));
          homes[rel] = range_sites(cursor, degree, p_sites);
          cursor = (cursor + degree) % p_sites;
        }
      }
      // Non-build relations (probe stream entry points) get one site each.
      for (const auto& r : w.catalog.relations)
        if (!homes.count(r.name)) homes[r.name] = {int(rng.below(p_sites))};
      return;
    }
  }
  throw SchedError("unknown placement policy");
}

}  // namespace mrsched
