#pragma once

#include <map>

#include "mrsched/config.hpp"
#include "mrsched/cost_model.hpp"
#include "mrsched/vectors.hpp"

namespace mrsched {

// Binary join tree stored as an arena.  Leaves name catalog relations;
// internal nodes are hash joins whose left child is the build side.
struct PlanNode {
  int id = -1;
  std::string relation;  // non-empty iff leaf
  int left = -1;
  int right = -1;
  bool is_leaf() const { return left < 0 && right < 0; }
};

struct Plan {
  std::vector<PlanNode> nodes;
  int root = -1;
  int n_joins() const;
  void validate() const;
};

struct Catalog {
  std::vector<RelationStats> relations;
  std::map<std::string, std::vector<int>> home_sites;

  const RelationStats& find(const std::string& name) const;
  const std::vector<int>* homes(const std::string& name) const;
};

// Maximal run of operators connected by pipelining edges; all of its clones
// must execute concurrently.
struct Pipeline {
  int id = -1;
  std::vector<Clone> clones;
  double t_max = 0.0;  // max clone seq_ms

  void refresh_t_max();
};

enum class EdgeKind { DiskMat, MemMat };

// Blocking dependence between pipelines.  producer_op is the blocking
// operator at the top of the child, consumer_op the operator in the parent
// that absorbs its result; the pair matters when memory materialization
// forces the two to fuse and co-locate.
struct TaskEdge {
  int child = -1;
  int parent = -1;
  EdgeKind kind = EdgeKind::DiskMat;
  std::string producer_op;
  std::string consumer_op;
};

struct TaskTree {
  std::vector<Pipeline> pipelines;
  std::vector<TaskEdge> edges;

  const Pipeline& pipeline(int id) const;
  std::size_t clone_count() const;
  void validate() const;  // ids, membership, acyclicity
};

// Task tree after fusing every memory-materialized child into its parent.
// Fused units hold combined clones covering both join phases; only
// disk-materialization edges remain.
struct MergedTree {
  std::vector<Pipeline> units;
  std::vector<TaskEdge> edges;                 // DiskMat only
  std::vector<std::vector<int>> unit_sources;  // original pipeline ids per unit
};

// Expands a join plan into its task tree: Scan per leaf, Build+Probe per
// join, Store at the root.  Join phases get a common clone count; scans are
// rooted at their relation's homes when the catalog assigns any; the store
// is declustered over all sites.  `prefix` namespaces operator ids.
TaskTree expand_plan(const Plan& plan, const Catalog& catalog, const SystemConfig& cfg,
                     const std::string& prefix = "q");

MergedTree merge_memory_pipelines(const TaskTree& tree, double epsilon);

// Longest root-to-leaf path of the blocking structure, with memory-fused
// units counted once at their combined duration.
double critical_path_time(const TaskTree& tree, double epsilon);
double critical_path_time(const MergedTree& merged);

// Combines several task trees into one forest (pipeline ids renumbered).
TaskTree merge_forest(std::vector<TaskTree> trees);

// True when `clone_op` names the operator `op`, either exactly or as one of
// the '+'-joined parts of a fused clone's name.
bool op_matches(const std::string& clone_op, const std::string& op);

}  // namespace mrsched
