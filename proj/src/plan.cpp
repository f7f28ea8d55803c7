#include "mrsched/plan.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace mrsched {

int Plan::n_joins() const {
  int n = 0;
  for (const auto& nd : nodes)
    if (!nd.is_leaf()) ++n;
  return n;
}

void Plan::validate() const {
  if (root < 0 || root >= int(nodes.size())) throw SchedError("plan: bad root");
  std::vector<int> seen(nodes.size(), 0);
  std::function<void(int)> walk = [&](int id) {
    if (id < 0 || id >= int(nodes.size())) throw SchedError("plan: dangling child");
    if (seen[id]++) throw SchedError("plan: node visited twice, not a tree");
    const PlanNode& nd = nodes[id];
    if (nd.is_leaf()) {
      if (nd.relation.empty()) throw SchedError("plan: leaf without relation");
    } else {
      if (nd.left < 0 || nd.right < 0) throw SchedError("plan: join needs two children");
      if (!nd.relation.empty()) throw SchedError("plan: join carries a relation");
      walk(nd.left);
      walk(nd.right);
    }
  };
  walk(root);
}

const RelationStats& Catalog::find(const std::string& name) const {
  for (const auto& r : relations)
    if (r.name == name) return r;
  throw SchedError("catalog: unknown relation " + name);
}

const std::vector<int>* Catalog::homes(const std::string& name) const {
  auto it = home_sites.find(name);
  return it == home_sites.end() ? nullptr : &it->second;
}

void Pipeline::refresh_t_max() {
  t_max = 0.0;
  for (const auto& c : clones) t_max = std::max(t_max, c.seq_ms);
}

const Pipeline& TaskTree::pipeline(int id) const {
  if (id < 0 || id >= int(pipelines.size())) throw SchedError("task tree: bad pipeline id");
  return pipelines[id];
}

std::size_t TaskTree::clone_count() const {
  std::size_t n = 0;
  for (const auto& p : pipelines) n += p.clones.size();
  return n;
}

namespace {

void check_acyclic(std::size_t n, const std::vector<TaskEdge>& edges) {
  std::vector<std::vector<int>> up(n);  // child -> parents
  for (const auto& e : edges) {
    if (e.child < 0 || e.parent < 0 || e.child >= int(n) || e.parent >= int(n))
      throw SchedError("task tree: edge references unknown pipeline");
    up[e.child].push_back(e.parent);
  }
  std::vector<int> color(n, 0);
  std::function<void(int)> dfs = [&](int u) {
    color[u] = 1;
    for (int v : up[u]) {
      if (color[v] == 1) throw SchedError("task tree: dependency cycle");
      if (color[v] == 0) dfs(v);
    }
    color[u] = 2;
  };
  for (std::size_t u = 0; u < n; ++u)
    if (color[u] == 0) dfs(int(u));
}

}  // namespace

void TaskTree::validate() const {
  std::vector<int> ids;
  for (std::size_t i = 0; i < pipelines.size(); ++i) {
    if (pipelines[i].id != int(i)) throw SchedError("task tree: pipeline ids must be dense");
    if (pipelines[i].clones.empty()) throw SchedError("task tree: empty pipeline");
    for (const auto& c : pipelines[i].clones) ids.push_back(c.id);
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    throw SchedError("task tree: duplicate clone id");
  check_acyclic(pipelines.size(), edges);
}

namespace {

struct OpRec {
  OperatorCost cost;
  std::vector<Clone> clones;
  int component = -1;  // union-find parent over pipelined edges
};

int uf_find(std::vector<OpRec>& ops, int i) {
  while (ops[i].component != i) {
    ops[i].component = ops[ops[i].component].component;
    i = ops[i].component;
  }
  return i;
}

void uf_union(std::vector<OpRec>& ops, int a, int b) {
  a = uf_find(ops, a);
  b = uf_find(ops, b);
  if (a != b) ops[std::max(a, b)].component = std::min(a, b);
}

}  // namespace

TaskTree expand_plan(const Plan& plan, const Catalog& catalog, const SystemConfig& cfg,
                     const std::string& prefix) {
  plan.validate();
  cfg.validate();

  std::vector<OpRec> ops;
  std::vector<std::pair<int, int>> mem_pairs;  // (build op, probe op)
  int join_seq = 0;

  auto add_op = [&](OperatorCost cost, const CloneSplit& split) {
    OpRec rec;
    rec.cost = std::move(cost);
    rec.clones = split_clones(rec.cost, split, cfg.grain, cfg.hw, cfg.epsilon);
    rec.component = int(ops.size());
    ops.push_back(std::move(rec));
    return int(ops.size() - 1);
  };

  auto pin_sites = [&](int op, const std::vector<int>& sites) {
    for (std::size_t i = 0; i < ops[op].clones.size(); ++i)
      ops[op].clones[i].site = sites[i % sites.size()];
  };

  // Returns the operator producing the node's output stream.
  std::function<int(int, bool)> produce = [&](int node_id, bool feeds_split) -> int {
    const PlanNode& nd = plan.nodes[node_id];
    if (nd.is_leaf()) {
      const RelationStats& rel = catalog.find(nd.relation);
      auto cost = estimate_operator(OpKind::Scan, prefix + ".scan." + nd.relation, rel, nullptr,
                                    cfg.hw, cfg.ssr_dims, 1.0, feeds_split);
      const std::vector<int>* homes = catalog.homes(nd.relation);
      if (homes && !homes->empty()) {
        CloneSplit split{int(homes->size()), uniform_weights(int(homes->size())), cfg.grain.f};
        int op = add_op(std::move(cost), split);
        pin_sites(op, *homes);
        return op;
      }
      return add_op(cost, max_degree(cost, cfg.grain, cfg.hw, cfg.sites));
    }

    int tag = join_seq++;
    int left_src = produce(nd.left, true);
    int right_src = produce(nd.right, true);
    RelationStats left_out = ops[left_src].cost.output;
    RelationStats right_out = ops[right_src].cost.output;

    auto build_cost = estimate_operator(OpKind::Build, prefix + ".build." + std::to_string(tag),
                                        left_out, nullptr, cfg.hw, cfg.ssr_dims);
    auto probe_cost = estimate_operator(OpKind::Probe, prefix + ".probe." + std::to_string(tag),
                                        right_out, &left_out, cfg.hw, cfg.ssr_dims, 1.0, feeds_split);
    CloneSplit split = paired_degree(probe_cost, build_cost, cfg.grain, cfg.hw, cfg.sites);
    int build = add_op(std::move(build_cost), split);
    int probe = add_op(std::move(probe_cost), split);

    uf_union(ops, left_src, build);   // stream into the split table
    uf_union(ops, right_src, probe);  // stream through the probe
    mem_pairs.emplace_back(build, probe);
    return probe;
  };

  int top = produce(plan.root, false);
  auto store_cost = estimate_operator(OpKind::Store, prefix + ".store", ops[top].cost.output,
                                      nullptr, cfg.hw, cfg.ssr_dims);
  CloneSplit store_split{cfg.sites, uniform_weights(cfg.sites), cfg.grain.f};
  int store = add_op(std::move(store_cost), store_split);
  std::vector<int> all_sites(cfg.sites);
  std::iota(all_sites.begin(), all_sites.end(), 0);
  pin_sites(store, all_sites);
  uf_union(ops, top, store);

  // Pipelines = union-find components, ordered by first operator created.
  std::vector<int> comp_of(ops.size());
  std::vector<int> roots;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    comp_of[i] = uf_find(ops, int(i));
    if (comp_of[i] == int(i)) roots.push_back(int(i));
  }
  std::sort(roots.begin(), roots.end());

  TaskTree tree;
  std::vector<int> pipe_of(ops.size(), -1);
  for (std::size_t pi = 0; pi < roots.size(); ++pi) {
    Pipeline p;
    p.id = int(pi);
    for (std::size_t i = 0; i < ops.size(); ++i) {
      if (comp_of[i] != roots[pi]) continue;
      pipe_of[i] = int(pi);
      for (auto& c : ops[i].clones) p.clones.push_back(c);
    }
    p.refresh_t_max();
    tree.pipelines.push_back(std::move(p));
  }

  int next_id = 0;
  for (auto& p : tree.pipelines)
    for (auto& c : p.clones) c.id = next_id++;

  for (auto [build, probe] : mem_pairs) {
    TaskEdge e;
    e.child = pipe_of[build];
    e.parent = pipe_of[probe];
    e.kind = EdgeKind::MemMat;
    e.producer_op = ops[build].cost.op_id;
    e.consumer_op = ops[probe].cost.op_id;
    tree.edges.push_back(e);
  }

  tree.validate();
  return tree;
}

MergedTree merge_memory_pipelines(const TaskTree& tree, double epsilon) {
  tree.validate();
  const std::size_t n = tree.pipelines.size();

  std::vector<int> group(n);
  std::iota(group.begin(), group.end(), 0);
  std::function<int(int)> find = [&](int i) {
    while (group[i] != i) {
      group[i] = group[group[i]];
      i = group[i];
    }
    return i;
  };
  for (const auto& e : tree.edges)
    if (e.kind == EdgeKind::MemMat) {
      int a = find(e.child), b = find(e.parent);
      if (a != b) group[std::max(a, b)] = std::min(a, b);
    }

  // Fusion partners: blocking producer clone i pairs with consumer clone i.
  std::map<std::string, std::string> fuse;  // producer op -> consumer op
  std::map<std::string, std::string> fused_into;
  for (const auto& e : tree.edges) {
    if (e.kind != EdgeKind::MemMat) continue;
    if (!fuse.emplace(e.producer_op, e.consumer_op).second)
      throw SchedError("merge: operator " + e.producer_op + " blocks twice");
    if (!fused_into.emplace(e.consumer_op, e.producer_op).second)
      throw SchedError("merge: operator " + e.consumer_op + " absorbs two producers");
    if (fuse.count(e.consumer_op) || fused_into.count(e.producer_op))
      throw SchedError("merge: chained fusion through " + e.producer_op);
  }

  std::vector<int> unit_of(n, -1);
  MergedTree out;
  for (std::size_t i = 0; i < n; ++i) {
    if (find(int(i)) != int(i)) continue;
    Pipeline unit;
    unit.id = int(out.units.size());
    std::vector<int> members;
    for (std::size_t j = 0; j < n; ++j)
      if (find(int(j)) == int(i)) members.push_back(int(j));
    for (int j : members) unit_of[j] = unit.id;

    std::map<std::string, std::vector<const Clone*>> by_op;
    std::vector<std::string> op_order;
    for (int j : members)
      for (const auto& c : tree.pipelines[j].clones) {
        if (by_op[c.op].empty()) op_order.push_back(c.op);
        by_op[c.op].push_back(&c);
      }

    for (const auto& op : op_order) {
      if (fused_into.count(op)) continue;  // emitted with its producer
      auto it = fuse.find(op);
      if (it == fuse.end()) {
        for (const Clone* c : by_op[op]) unit.clones.push_back(*c);
        continue;
      }
      const auto& producers = by_op[op];
      const auto& consumers = by_op[it->second];
      if (producers.size() != consumers.size())
        throw SchedError("merge: clone count mismatch between " + op + " and " + it->second);
      for (std::size_t k = 0; k < producers.size(); ++k) {
        const Clone &a = *producers[k], &b = *consumers[k];
        Clone m;
        m.op = a.op + "+" + b.op;
        m.index = int(k);
        std::vector<double> w(a.work.c);
        for (std::size_t x = 0; x < w.size(); ++x) w[x] += b.work.c[x];
        m.work = WorkVector(std::move(w));
        // The reservation spans both phases of the combined operator.
        std::vector<double> d(a.demand.c);
        for (std::size_t x = 0; x < d.size(); ++x) d[x] += b.demand.c[x];
        m.demand = DemandVector(std::move(d));
        m.seq_ms = seq_time_op(m.work, epsilon);
        if (a.site && b.site && *a.site != *b.site)
          throw SchedError("merge: conflicting rooted sites for " + m.op);
        m.site = a.site ? a.site : b.site;
        unit.clones.push_back(std::move(m));
      }
    }
    unit.refresh_t_max();
    out.unit_sources.push_back(std::move(members));
    out.units.push_back(std::move(unit));
  }

  int next_id = 0;
  for (auto& u : out.units)
    for (auto& c : u.clones) c.id = next_id++;

  for (const auto& e : tree.edges) {
    if (e.kind != EdgeKind::DiskMat) continue;
    TaskEdge m = e;
    m.child = unit_of[e.child];
    m.parent = unit_of[e.parent];
    if (m.child == m.parent)
      throw SchedError("merge: disk dependence trapped inside one fused unit");
    out.edges.push_back(m);
  }
  check_acyclic(out.units.size(), out.edges);
  return out;
}

double critical_path_time(const MergedTree& merged) {
  const std::size_t n = merged.units.size();
  std::vector<std::vector<int>> children(n);  // parent -> children
  for (const auto& e : merged.edges) children[e.parent].push_back(e.child);
  std::vector<double> depth(n, -1.0);
  std::function<double(int)> dfs = [&](int u) -> double {
    if (depth[u] >= 0.0) return depth[u];
    double best = 0.0;
    for (int v : children[u]) best = std::max(best, dfs(v));
    return depth[u] = merged.units[u].t_max + best;
  };
  double cp = 0.0;
  for (std::size_t u = 0; u < n; ++u) cp = std::max(cp, dfs(int(u)));
  return cp;
}

double critical_path_time(const TaskTree& tree, double epsilon) {
  return critical_path_time(merge_memory_pipelines(tree, epsilon));
}

bool op_matches(const std::string& clone_op, const std::string& op) {
  if (clone_op == op) return true;
  std::size_t from = 0;
  while (from <= clone_op.size()) {
    std::size_t plus = clone_op.find('+', from);
    std::size_t end = plus == std::string::npos ? clone_op.size() : plus;
    if (clone_op.compare(from, end - from, op) == 0) return true;
    if (plus == std::string::npos) break;
    from = plus + 1;
  }
  return false;
}

TaskTree merge_forest(std::vector<TaskTree> trees) {
  TaskTree out;
  int pipe_base = 0, clone_base = 0;
  for (auto& t : trees) {
    int max_clone = -1;
    for (auto& p : t.pipelines) {
      p.id += pipe_base;
      for (auto& c : p.clones) {
        c.id += clone_base;
        max_clone = std::max(max_clone, c.id);
      }
      out.pipelines.push_back(std::move(p));
    }
    for (auto& e : t.edges) {
      e.child += pipe_base;
      e.parent += pipe_base;
      out.edges.push_back(std::move(e));
    }
    pipe_base = int(out.pipelines.size());
    clone_base = max_clone + 1;
  }
  return out;
}

}  // namespace mrsched
