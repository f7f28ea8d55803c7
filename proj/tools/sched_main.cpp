// Command-line harness around the scheduling library: generate workloads,
// schedule them, compute lower bounds, replay schedules, and run full
// parameter sweeps.  Exit codes: 0 ok, 1 user error (bad flags or files),
// 2 the run finished but produced only infeasible results.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "mrsched/baselines.hpp"
#include "mrsched/bounds.hpp"
#include "mrsched/experiment.hpp"
#include "mrsched/schedulers.hpp"
#include "mrsched/serialize.hpp"
#include "mrsched/simexec.hpp"

namespace {

using mrsched::ordered_json;
using mrsched::SchedError;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchedError("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SchedError("cannot write " + path);
  out << content;
}

ordered_json parse_json(const std::string& path) {
  return ordered_json::parse(read_file(path));
}

void write_json(const std::string& path, const ordered_json& j) {
  write_file(path, j.dump(2) + "\n");
}

// "5x8,10x2" -> five 8-join queries and ten 2-join queries.
std::vector<mrsched::QueryMix> parse_mix(const std::string& s) {
  std::vector<mrsched::QueryMix> mix;
  std::size_t from = 0;
  while (from <= s.size()) {
    std::size_t comma = s.find(',', from);
    std::string tok = s.substr(from, comma == std::string::npos ? std::string::npos : comma - from);
    std::size_t x = tok.find('x');
    try {
      if (tok.empty() || x == std::string::npos) throw std::invalid_argument(tok);
      mix.push_back({std::stoi(tok.substr(0, x)), std::stoi(tok.substr(x + 1))});
    } catch (const std::exception&) {
      throw SchedError("bad mix entry '" + tok + "' (want e.g. 5x8,10x2)");
    }
    if (comma == std::string::npos) break;
    from = comma + 1;
  }
  if (mix.empty()) throw SchedError("empty query mix");
  return mix;
}

// Shared knobs: defaults <- config file <- explicit flags, in that order.
struct ConfigFlags {
  std::string config_path;
  int sites = 0;
  double epsilon = -1.0, lambda = -1.0, f = -1.0;
  long long mem_pages = 0;
  CLI::Option *o_sites = nullptr, *o_eps = nullptr, *o_lam = nullptr, *o_f = nullptr,
              *o_mem = nullptr;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file; absent keys keep defaults");
    o_sites = cmd->add_option("--sites", sites, "number of sites");
    o_eps = cmd->add_option("--epsilon", epsilon, "execution-time blend in [0,1]");
    o_lam = cmd->add_option("--lambda", lambda, "memory granularity bound in (0,1)");
    o_f = cmd->add_option("--f", f, "communication budget fraction");
    o_mem = cmd->add_option("--mem-pages", mem_pages, "memory pages per site");
  }

  mrsched::SystemConfig resolve() const {
    mrsched::SystemConfig cfg;
    if (!config_path.empty()) mrsched::apply_config_json(parse_json(config_path), cfg);
    if (o_sites->count()) cfg.sites = sites;
    if (o_eps->count()) cfg.epsilon = epsilon;
    if (o_lam->count()) cfg.grain.lambda = lambda;
    if (o_f->count()) cfg.grain.f = f;
    if (o_mem->count()) cfg.hw.mem_pages_per_site = mem_pages;
    cfg.validate();
    return cfg;
  }
};

mrsched::Workload load_workload(const std::string& path) {
  return parse_json(path).get<mrsched::Workload>();
}

std::vector<mrsched::TaskTree> expand_all(const mrsched::Workload& w,
                                          const mrsched::SystemConfig& cfg) {
  std::vector<mrsched::TaskTree> trees;
  trees.reserve(w.plans.size());
  for (std::size_t q = 0; q < w.plans.size(); ++q)
    trees.push_back(mrsched::expand_plan(w.plans[q], w.catalog, cfg, "q" + std::to_string(q)));
  return trees;
}

int cmd_schedule(const std::string& workload_path, const std::string& algo_s,
                 const ConfigFlags& cf, const std::string& out) {
  mrsched::Workload w = load_workload(workload_path);
  mrsched::SystemConfig cfg = cf.resolve();
  int p = cfg.sites;
  mrsched::ExpAlgo algo = mrsched::algo_from_name(algo_s);

  mrsched::Schedule sched;
  mrsched::Instance inst;
  std::vector<int> deferred;
  switch (algo) {
    case mrsched::ExpAlgo::TreeSched: {
      std::vector<mrsched::Arrival> arrivals;
      for (auto& t : expand_all(w, cfg)) arrivals.push_back({0.0, std::move(t)});
      mrsched::OnlineResult r = mrsched::tree_sched_online(arrivals, p, cfg);
      sched = std::move(r.schedule);
      inst = mrsched::instance_of(r.merged);
      break;
    }
    case mrsched::ExpAlgo::LevelSched: {
      mrsched::TaskTree forest = mrsched::merge_forest(expand_all(w, cfg));
      sched = mrsched::level_sched(forest.pipelines, p, cfg);
      inst = mrsched::instance_of(forest.pipelines);
      break;
    }
    case mrsched::ExpAlgo::Hier: {
      mrsched::BaselineResult r = mrsched::hier_sched(w.plans, w.catalog, p, cfg);
      sched = std::move(r.schedule);
      inst = std::move(r.instance);
      break;
    }
    case mrsched::ExpAlgo::Zsched: {
      mrsched::BaselineResult r = mrsched::zsched(w.plans, w.catalog, p, cfg);
      sched = std::move(r.schedule);
      inst = std::move(r.instance);
      deferred = std::move(r.deferred);
      break;
    }
  }

  write_json(out, ordered_json{{"algo", algo_name(algo)},
                               {"deferred", deferred},
                               {"schedule", sched},
                               {"instance", inst}});
  std::cout << "wrote " << out << " (response " << sched.response_ms << " ms, "
            << deferred.size() << " deferred)\n";
  return !w.plans.empty() && inst.groups.empty() ? 2 : 0;
}

int cmd_bounds(const std::string& workload_path, const ConfigFlags& cf, const std::string& out) {
  mrsched::Workload w = load_workload(workload_path);
  mrsched::SystemConfig cfg = cf.resolve();
  ordered_json queries = ordered_json::array();
  for (std::size_t q = 0; q < w.plans.size(); ++q) {
    mrsched::TaskTree t =
        mrsched::expand_plan(w.plans[q], w.catalog, cfg, "q" + std::to_string(q));
    ordered_json jb = mrsched::tree_bound(t, cfg.sites, cfg.epsilon);
    ordered_json row{{"query", q}};
    for (auto& [k, v] : jb.items()) row[k] = v;
    queries.push_back(std::move(row));
  }
  write_json(out, ordered_json{{"sites", cfg.sites}, {"queries", std::move(queries)}});
  std::cout << "wrote " << out << " (" << w.plans.size() << " queries)\n";
  return 0;
}

int cmd_simulate(const std::string& schedule_path, const ConfigFlags& cf, const std::string& out,
                 const std::string& util_csv) {
  ordered_json j = parse_json(schedule_path);
  auto sched = j.at("schedule").get<mrsched::Schedule>();
  auto inst = j.at("instance").get<mrsched::Instance>();
  mrsched::SystemConfig cfg = cf.resolve();

  std::vector<mrsched::Violation> viol = mrsched::validate(sched, inst, cfg);
  if (!viol.empty()) {
    for (const auto& v : viol) std::cerr << "violation (" << v.kind << "): " << v.detail << "\n";
    return 2;
  }
  mrsched::ExecutionTrace trace = mrsched::execute(sched, inst, cfg);
  write_json(out, trace);
  if (!util_csv.empty()) write_file(util_csv, mrsched::utilization_csv(trace));
  std::cout << "wrote " << out << " (total " << trace.total_ms << " ms)\n";
  return 0;
}

int cmd_experiment(const std::string& spec_path, const std::string& out, bool omit_wall) {
  mrsched::ExperimentSpec spec = mrsched::experiment_spec_from_json(parse_json(spec_path));
  std::vector<mrsched::ExperimentRow> rows = mrsched::run_experiment(spec, !omit_wall);
  write_file(out, mrsched::experiment_csv(rows));
  std::size_t feasible = 0;
  for (const auto& r : rows) feasible += r.feasible;
  std::cout << "wrote " << out << " (" << rows.size() << " rows, " << feasible << " feasible)\n";
  return !rows.empty() && feasible == 0 ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-resource query plan scheduler"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a workload JSON file");
  std::uint64_t gen_seed = 1;
  std::string gen_shape = "bushy_random", gen_mix = "1x10", gen_place, gen_out = "workload.json";
  long long gen_min = 10000, gen_max = 1000000;
  int gen_page_tuples = 32;
  std::uint64_t gen_place_seed = 0;
  ConfigFlags gen_cf;
  gen->add_option("--seed", gen_seed, "workload seed");
  gen->add_option("--shape", gen_shape, "bushy_random or right_deep");
  gen->add_option("--mix", gen_mix, "queries-by-joins mix, e.g. 5x8,10x2");
  gen->add_option("--min-tuples", gen_min, "smallest relation");
  gen->add_option("--max-tuples", gen_max, "largest relation");
  gen->add_option("--page-tuples", gen_page_tuples, "tuples per page");
  gen->add_option("--placement", gen_place,
                  "home-site policy (none, declust, declust_quarter, no_declust, "
                  "no_declust_quarter, random, query_based_declust); omit to leave relations "
                  "unplaced");
  auto* gen_pseed = gen->add_option("--placement-seed", gen_place_seed,
                                    "placement randomness (default: --seed)");
  gen_cf.attach(gen);
  gen->add_option("--out", gen_out, "output file");

  // schedule
  auto* sch = app.add_subcommand("schedule", "schedule a workload as one batch");
  std::string sch_workload, sch_algo = "treesched", sch_out = "schedule.json";
  ConfigFlags sch_cf;
  sch->add_option("--workload", sch_workload, "workload JSON")->required();
  sch->add_option("--algo", sch_algo, "treesched, levelsched, hier, or zsched");
  sch_cf.attach(sch);
  sch->add_option("--out", sch_out, "output file");

  // bounds
  auto* bnd = app.add_subcommand("bounds", "per-query lower bounds");
  std::string bnd_workload, bnd_out = "bounds.json";
  ConfigFlags bnd_cf;
  bnd->add_option("--workload", bnd_workload, "workload JSON")->required();
  bnd_cf.attach(bnd);
  bnd->add_option("--out", bnd_out, "output file");

  // simulate
  auto* sim = app.add_subcommand("simulate", "validate and replay a schedule");
  std::string sim_schedule, sim_out = "trace.json", sim_util;
  ConfigFlags sim_cf;
  sim->add_option("--schedule", sim_schedule, "schedule JSON from the schedule command")
      ->required();
  sim_cf.attach(sim);
  sim->add_option("--out", sim_out, "trace output file");
  sim->add_option("--util-csv", sim_util, "also write per-site utilization CSV here");

  // experiment
  auto* exp = app.add_subcommand("experiment", "run a parameter sweep to CSV");
  std::string exp_spec, exp_out = "experiment.csv";
  bool exp_omit_wall = false;
  exp->add_option("--spec", exp_spec, "experiment spec JSON")->required();
  exp->add_option("--out", exp_out, "CSV output file");
  exp->add_flag("--omit-wall", exp_omit_wall,
                "zero the wall_ms column for byte-stable comparisons");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) {
      mrsched::WorkloadSpec spec;
      spec.seed = gen_seed;
      spec.shape = mrsched::shape_from_name(gen_shape);
      spec.mix = parse_mix(gen_mix);
      spec.min_tuples = gen_min;
      spec.max_tuples = gen_max;
      spec.page_tuples = gen_page_tuples;
      mrsched::Workload w = mrsched::gen_workload(spec);
      if (!gen_place.empty()) {
        mrsched::SystemConfig cfg = gen_cf.resolve();
        std::uint64_t pseed = gen_pseed->count() ? gen_place_seed : gen_seed;
        mrsched::apply_placement(w, mrsched::placement_from_name(gen_place), cfg.sites, cfg.hw,
                                 pseed);
      }
      write_json(gen_out, w);
      std::cout << "wrote " << gen_out << " (" << w.plans.size() << " queries, "
                << w.total_joins() << " joins)\n";
      return 0;
    }
    if (sch->parsed()) return cmd_schedule(sch_workload, sch_algo, sch_cf, sch_out);
    if (bnd->parsed()) return cmd_bounds(bnd_workload, bnd_cf, bnd_out);
    if (sim->parsed()) return cmd_simulate(sim_schedule, sim_cf, sim_out, sim_util);
    if (exp->parsed()) return cmd_experiment(exp_spec, exp_out, exp_omit_wall);
  } catch (const mrsched::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
