#include "mrsched/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <map>
#include <optional>

#include "mrsched/baselines.hpp"
#include "mrsched/bounds.hpp"
#include "mrsched/schedulers.hpp"

namespace mrsched {

const char* algo_name(ExpAlgo a) {
  switch (a) {
    case ExpAlgo::TreeSched: return "treesched";
    case ExpAlgo::LevelSched: return "levelsched";
    case ExpAlgo::Hier: return "hier";
    case ExpAlgo::Zsched: return "zsched";
  }
  return "?";
}

ExpAlgo algo_from_name(const std::string& name) {
  std::string low;
  for (char c : name)
    if (c != '_' && c != '-') low.push_back(char(std::tolower(static_cast<unsigned char>(c))));
  if (low == "treesched") return ExpAlgo::TreeSched;
  if (low == "levelsched") return ExpAlgo::LevelSched;
  if (low == "hier") return ExpAlgo::Hier;
  if (low == "zsched") return ExpAlgo::Zsched;
  throw SchedError("unknown algorithm: " + name +
                   " (expected treesched, levelsched, hier, or zsched)");
}

void ExperimentSpec::validate() const {
  if (sites.empty() || mem_pages.empty() || lambda.empty() || f.empty() || epsilon.empty())
    throw SchedError("experiment: every sweep axis needs at least one value");
  for (int p : sites)
    if (p < 1) throw SchedError("experiment: site counts must be positive");
  for (long long m : mem_pages)
    if (m < 1) throw SchedError("experiment: memory sizes must be positive");
  if (algos.empty()) throw SchedError("experiment: no algorithms selected");
  if (repetitions < 1) throw SchedError("experiment: repetitions must be positive");
  workload.validate();
}

namespace {

// Outcome of one query inside one sweep cell under one algorithm.
struct QueryOutcome {
  bool ok = true;
  double response_ms = 0.0;
  double wall_ms = 0.0;
  std::string error;
};

double elapsed_ms(std::chrono::steady_clock::time_point from) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - from)
      .count();
}

// Completion time of every gang: the end of the last level listing it.
std::map<int, double> gang_completions(const Schedule& s) {
  std::map<int, double> done;
  for (const ScheduleLevel& lv : s.levels)
    for (int g : lv.groups) {
      double end = lv.start_ms + lv.height_ms;
      auto [it, fresh] = done.emplace(g, end);
      if (!fresh) it->second = std::max(it->second, end);
    }
  return done;
}

void fail_all(std::vector<QueryOutcome>& out, const std::string& why) {
  for (QueryOutcome& o : out) {
    o.ok = false;
    o.error = why;
  }
}

// Batch runs: the whole workload is scheduled together; a query's response
// is its completion time inside the shared schedule.
std::vector<QueryOutcome> run_batch(ExpAlgo a, const Workload& w,
                                    const std::vector<TaskTree>& trees, int p,
                                    const SystemConfig& cfg, bool measure_wall) {
  std::vector<QueryOutcome> out(w.plans.size());
  auto t0 = std::chrono::steady_clock::now();
  try {
    switch (a) {
      case ExpAlgo::TreeSched: {
        std::vector<Arrival> arrivals;
        arrivals.reserve(trees.size());
        for (const TaskTree& t : trees) arrivals.push_back({0.0, t});
        OnlineResult r = tree_sched_online(arrivals, p, cfg);
        for (const QueryCompletion& qc : r.completions)
          out[std::size_t(qc.query)].response_ms = qc.done_ms;
        break;
      }
      case ExpAlgo::LevelSched: {
        // The blocking edges are dropped: every pipeline schedules as an
        // independent co-scheduled unit.
        std::vector<std::size_t> offset{0};
        for (const TaskTree& t : trees) offset.push_back(offset.back() + t.pipelines.size());
        TaskTree forest = merge_forest(trees);
        Schedule s = level_sched(forest.pipelines, p, cfg);
        std::map<int, double> done = gang_completions(s);
        for (std::size_t q = 0; q < out.size(); ++q)
          for (std::size_t pipe = offset[q]; pipe < offset[q + 1]; ++pipe)
            out[q].response_ms = std::max(out[q].response_ms, done.at(int(pipe)));
        break;
      }
      case ExpAlgo::Hier: {
        BaselineResult r = hier_sched(w.plans, w.catalog, p, cfg);
        std::map<int, double> done = gang_completions(r.schedule);
        for (std::size_t q = 0; q < out.size(); ++q) out[q].response_ms = done.at(int(q));
        break;
      }
      case ExpAlgo::Zsched: {
        BaselineResult r = zsched(w.plans, w.catalog, p, cfg);
        std::map<int, double> done = gang_completions(r.schedule);
        for (std::size_t q = 0; q < out.size(); ++q)
          for (int g : r.query_gangs[q])
            out[q].response_ms = std::max(out[q].response_ms, done.at(g));
        for (int q : r.deferred) {
          out[std::size_t(q)].ok = false;
          out[std::size_t(q)].error = "deferred: memory demand never fits at its home sites";
        }
        break;
      }
    }
  } catch (const SchedError& e) {
    fail_all(out, e.what());
  }
  double wall = measure_wall ? elapsed_ms(t0) : 0.0;
  for (QueryOutcome& o : out) o.wall_ms = wall;
  return out;
}

// Solo runs: every query gets the whole machine to itself.
std::vector<QueryOutcome> run_solo(ExpAlgo a, const Workload& w,
                                   const std::vector<TaskTree>& trees, int p,
                                   const SystemConfig& cfg, bool measure_wall) {
  std::vector<QueryOutcome> out(w.plans.size());
  for (std::size_t q = 0; q < w.plans.size(); ++q) {
    QueryOutcome& o = out[q];
    auto t0 = std::chrono::steady_clock::now();
    try {
      switch (a) {
        case ExpAlgo::TreeSched:
          o.response_ms = tree_sched(trees[q], p, cfg).schedule.response_ms;
          break;
        case ExpAlgo::LevelSched:
          o.response_ms = level_sched(trees[q].pipelines, p, cfg).response_ms;
          break;
        case ExpAlgo::Hier:
          o.response_ms = hier_sched({w.plans[q]}, w.catalog, p, cfg).schedule.response_ms;
          break;
        case ExpAlgo::Zsched: {
          BaselineResult r = zsched({w.plans[q]}, w.catalog, p, cfg);
          if (!r.deferred.empty()) {
            o.ok = false;
            o.error = "deferred: memory demand never fits at its home sites";
          } else {
            o.response_ms = r.schedule.response_ms;
          }
          break;
        }
      }
    } catch (const SchedError& e) {
      o.ok = false;
      o.error = e.what();
    }
    o.wall_ms = measure_wall ? elapsed_ms(t0) : 0.0;
  }
  return out;
}

std::string csv_sanitize(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

}  // namespace

std::vector<ExperimentRow> run_experiment(const ExperimentSpec& spec, bool measure_wall) {
  spec.validate();
  std::vector<ExperimentRow> rows;

  for (int rep = 0; rep < spec.repetitions; ++rep) {
    WorkloadSpec ws = spec.workload;
    ws.seed = spec.workload.seed + std::uint64_t(rep);
    Workload w = gen_workload(ws);

    for (int p : spec.sites) {
      std::uint64_t place_seed = spec.seed + 1000003ULL * std::uint64_t(rep) + std::uint64_t(p);
      for (long long mem : spec.mem_pages) {
        SystemConfig site_cfg = spec.base;
        site_cfg.sites = p;
        site_cfg.hw.mem_pages_per_site = mem;
        apply_placement(w, spec.placement, p, site_cfg.hw, place_seed);

        for (double lam : spec.lambda)
          for (double ff : spec.f)
            for (double eps : spec.epsilon) {
              SystemConfig cfg = site_cfg;
              cfg.grain.lambda = lam;
              cfg.grain.f = ff;
              cfg.epsilon = eps;

              // The blocking-aware bound prices every algorithm that honors
              // the task tree; the edge-dropping one is compared against the
              // matching relaxation so its ratio stays a true ratio.
              bool wants_level = std::find(spec.algos.begin(), spec.algos.end(),
                                           ExpAlgo::LevelSched) != spec.algos.end();
              std::vector<std::optional<TaskTree>> trees(w.plans.size());
              std::vector<std::string> expand_err(w.plans.size());
              std::vector<BoundsReport> lbs(w.plans.size());
              std::vector<BoundsReport> lbs_level(wants_level ? w.plans.size() : 0);
              bool all_expanded = true;
              for (std::size_t q = 0; q < w.plans.size(); ++q) {
                try {
                  trees[q] = expand_plan(w.plans[q], w.catalog, cfg, "q" + std::to_string(q));
                  lbs[q] = tree_bound(*trees[q], p, eps);
                  if (wants_level) lbs_level[q] = lb_pipelines(trees[q]->pipelines, p);
                } catch (const SchedError& e) {
                  trees[q].reset();
                  expand_err[q] = e.what();
                  all_expanded = false;
                }
              }

              std::vector<TaskTree> plain;
              if (all_expanded) {
                plain.reserve(trees.size());
                for (const auto& t : trees) plain.push_back(*t);
              }

              for (ExpAlgo a : spec.algos) {
                std::vector<QueryOutcome> res;
                if (!all_expanded && spec.batch) {
                  res.assign(w.plans.size(), QueryOutcome{});
                  for (std::size_t q = 0; q < res.size(); ++q) {
                    res[q].ok = false;
                    res[q].error = expand_err[q].empty()
                                       ? "another query in the batch failed to expand"
                                       : expand_err[q];
                  }
                } else if (spec.batch) {
                  res = run_batch(a, w, plain, p, cfg, measure_wall);
                } else {
                  // Solo runs tolerate per-query expansion failures.
                  std::vector<TaskTree> solo(trees.size());
                  for (std::size_t q = 0; q < trees.size(); ++q)
                    if (trees[q]) solo[q] = *trees[q];
                  res = run_solo(a, w, solo, p, cfg, measure_wall);
                  for (std::size_t q = 0; q < trees.size(); ++q)
                    if (!trees[q]) {
                      res[q].ok = false;
                      res[q].error = expand_err[q];
                    }
                }

                for (std::size_t q = 0; q < res.size(); ++q) {
                  ExperimentRow row;
                  row.rep = rep;
                  row.workload_seed = ws.seed;
                  row.query = int(q);
                  row.sites = p;
                  row.mem_pages = mem;
                  row.lambda = lam;
                  row.f = ff;
                  row.epsilon = eps;
                  row.algo = algo_name(a);
                  row.feasible = res[q].ok;
                  row.wall_ms = res[q].wall_ms;
                  row.error = res[q].error;
                  if (trees[q]) {
                    const BoundsReport& lb = a == ExpAlgo::LevelSched ? lbs_level[q] : lbs[q];
                    row.lb_ms = lb.lb;
                    row.dominant_term = lb.dominant_term;
                  }
                  if (res[q].ok) {
                    row.response_ms = res[q].response_ms;
                    row.ratio = row.lb_ms > 0.0 ? row.response_ms / row.lb_ms : 1.0;
                  }
                  rows.push_back(std::move(row));
                }
              }
            }
      }
    }
  }
  return rows;
}

std::string experiment_csv(std::span<const ExperimentRow> rows) {
  std::string out =
      "rep,seed,query,sites,mem_pages,lambda,f,epsilon,algo,status,"
      "response_ms,lb_ms,ratio,dominant_term,wall_ms,error\n";
  for (const ExperimentRow& r : rows) {
    out += std::to_string(r.rep) + "," + std::to_string(r.workload_seed) + "," +
           std::to_string(r.query) + "," + std::to_string(r.sites) + "," +
           std::to_string(r.mem_pages) + "," + shortest_double(r.lambda) + "," +
           shortest_double(r.f) + "," + shortest_double(r.epsilon) + "," + r.algo + ",";
    out += r.feasible ? "ok" : "infeasible";
    out += ",";
    if (r.feasible) out += shortest_double(r.response_ms);
    out += ",";
    if (!r.dominant_term.empty()) out += shortest_double(r.lb_ms);
    out += ",";
    if (r.feasible) out += shortest_double(r.ratio);
    out += "," + r.dominant_term + "," + shortest_double(r.wall_ms) + "," +
           csv_sanitize(r.error) + "\n";
  }
  return out;
}

ExperimentSpec experiment_spec_from_json(const ordered_json& j) {
  ExperimentSpec s;
  if (j.contains("sites")) s.sites = j.at("sites").get<std::vector<int>>();
  if (j.contains("mem_pages")) s.mem_pages = j.at("mem_pages").get<std::vector<long long>>();
  if (j.contains("lambda")) s.lambda = j.at("lambda").get<std::vector<double>>();
  if (j.contains("f")) s.f = j.at("f").get<std::vector<double>>();
  if (j.contains("epsilon")) s.epsilon = j.at("epsilon").get<std::vector<double>>();
  if (j.contains("workload")) s.workload = j.at("workload").get<WorkloadSpec>();
  if (j.contains("placement"))
    s.placement = placement_from_name(j.at("placement").get<std::string>());
  if (j.contains("algos")) {
    s.algos.clear();
    for (const auto& a : j.at("algos")) s.algos.push_back(algo_from_name(a.get<std::string>()));
  }
  if (j.contains("repetitions")) s.repetitions = j.at("repetitions").get<int>();
  if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("batch")) s.batch = j.at("batch").get<bool>();
  if (j.contains("config")) apply_config_json(j.at("config"), s.base);
  s.validate();
  return s;
}

}  // namespace mrsched
