#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mrsched/serialize.hpp"
#include "mrsched/workload.hpp"

namespace mrsched {

// Schedulers the sweep harness can dispatch to.  TreeSched and LevelSched
// come from the list-scheduling family (LevelSched ignores the blocking
// edges); Hier and Zsched are the comparison baselines.
enum class ExpAlgo { TreeSched, LevelSched, Hier, Zsched };

const char* algo_name(ExpAlgo a);
// Accepts the canonical names plus common spellings (tree_sched, TreeSched).
ExpAlgo algo_from_name(const std::string& name);

// One full parameter sweep.  Every combination of sites x memory x lambda x
// f x epsilon runs every algorithm over `repetitions` freshly generated
// workloads; each query of each run becomes one CSV row.
//
// Seeding: repetition r generates its workload with seed workload.seed + r
// and draws relation placements with seed `seed + 1000003*r + P`, so runs
// are reproducible cell by cell and placements are stable across the memory
// axis for the policies that do not depend on it.
struct ExperimentSpec {
  std::vector<int> sites{10};
  std::vector<long long> mem_pages{8192};
  std::vector<double> lambda{0.3};
  std::vector<double> f{0.6};
  std::vector<double> epsilon{0.5};
  WorkloadSpec workload;
  PlacementPolicy placement = PlacementPolicy::Declust;
  std::vector<ExpAlgo> algos{ExpAlgo::TreeSched};
  int repetitions = 1;
  std::uint64_t seed = 1;
  // false: each query is scheduled alone on the P sites and its row reports
  // that schedule's response.  true: the whole workload is scheduled as one
  // multi-query batch and each row reports the query's completion time.
  bool batch = false;
  SystemConfig base;  // defaults the sweep patches per cell

  void validate() const;
};

// One (query, cell, algorithm) outcome.  For infeasible cells `feasible` is
// false, `error` carries the reason, and the result columns stay empty in
// the CSV; the lower bound is still reported when it was computable.
struct ExperimentRow {
  int rep = 0;
  std::uint64_t workload_seed = 0;
  int query = 0;
  int sites = 0;
  long long mem_pages = 0;
  double lambda = 0.0;
  double f = 0.0;
  double epsilon = 0.0;
  std::string algo;
  bool feasible = true;
  double response_ms = 0.0;
  double lb_ms = 0.0;
  double ratio = 0.0;
  std::string dominant_term;
  double wall_ms = 0.0;
  std::string error;
};

// Runs the sweep.  Deterministic given the spec except for wall_ms; pass
// measure_wall = false to zero that column when byte-stable output matters.
std::vector<ExperimentRow> run_experiment(const ExperimentSpec& spec, bool measure_wall = true);

// Tidy CSV with a header row, one line per row, stable column order.
std::string experiment_csv(std::span<const ExperimentRow> rows);

ExperimentSpec experiment_spec_from_json(const ordered_json& j);

}  // namespace mrsched
