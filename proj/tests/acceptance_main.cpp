// Acceptance gate: one self-contained check per shipped guarantee, printed as
// a single PASS/FAIL line each.  Exits nonzero when any check fails.
//
//   1. worst-case response bounds of the three list schedulers
//   2. placement sufficiency for memory-granular pipelines
//   3. tightness family for the sufficiency bound
//   4. lower bound <= exhaustive optimum <= heuristic on small instances
//   5. vector-length partition bracketing
//   6. independent executor agrees with every scheduler's own accounting
//   7. granularity and scale-up trends of the end-to-end pipeline
//   8. home-site and slot-allotment baselines trail the list schedulers
//   9. byte-identical experiment output for identical seeds

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "mrsched/bounds.hpp"
#include "mrsched/experiment.hpp"
#include "mrsched/oracle.hpp"
#include "mrsched/schedulers.hpp"
#include "mrsched/serialize.hpp"
#include "mrsched/simexec.hpp"
#include "mrsched/workload.hpp"

using namespace mrsched;

namespace {

struct Check {
  bool pass = false;
  std::string detail;
};

double secs_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Platform-independent uniform draws, same construction the unit tests use.
struct Rand {
  std::mt19937_64 eng;
  explicit Rand(std::uint64_t seed) : eng(seed) {}
  double real(double lo, double hi) { return lo + (hi - lo) * double(eng() >> 11) * 0x1.0p-53; }
  int below(int n) { return int(eng() % std::uint64_t(n)); }
};

Clone mk(int id, std::vector<double> work, std::vector<double> demand, double seq) {
  Clone c;
  c.id = id;
  c.op = "op" + std::to_string(id);
  c.work = WorkVector(std::move(work));
  c.demand = DemandVector(std::move(demand));
  c.seq_ms = seq;
  return c;
}

Pipeline pipe_of(int id, std::vector<Clone> clones) {
  Pipeline p;
  p.id = id;
  p.clones = std::move(clones);
  p.refresh_t_max();
  return p;
}

SystemConfig cfg_dims(int d, int s, double lambda, double epsilon) {
  SystemConfig cfg;
  cfg.tsr_dims = d;
  cfg.ssr_dims = s;
  cfg.epsilon = epsilon;
  cfg.grain.f = 0.6;
  cfg.grain.lambda = lambda;
  return cfg;
}

Clone random_clone(Rand& rng, int id, int d, int s, double max_demand, double epsilon) {
  std::vector<double> w(static_cast<std::size_t>(d));
  for (double& x : w) x = rng.below(5) == 0 ? 0.0 : rng.real(0.0, 20.0);
  std::vector<double> dem(static_cast<std::size_t>(s));
  for (double& x : dem) x = rng.real(0.0, max_demand);
  Clone c = mk(id, std::move(w), std::move(dem), 0.0);
  c.seq_ms = seq_time_op(c.work, epsilon);
  return c;
}

double demand_sum_length(const std::vector<Clone>& clones) {
  std::vector<double> acc;
  for (const Clone& c : clones) {
    if (acc.size() < c.demand.dim()) acc.resize(c.demand.dim(), 0.0);
    for (std::size_t k = 0; k < c.demand.dim(); ++k) acc[k] += c.demand[k];
  }
  return vector_length(acc);
}

// Fewest sites that are always enough for one memory-granular pipeline.
int sufficient_sites(const Pipeline& pipe, int s, double lambda) {
  double need = demand_sum_length(pipe.clones) * double(s) / (1.0 - lambda);
  return std::max(1, int(std::ceil(need - 1e-12)));
}

// ---------------------------------------------------------------------------
// Criterion 6 accumulator: every schedule produced by checks 1-4 is replayed
// on the independent executor and must agree with the scheduler's accounting.
struct ExecAudit {
  long checked = 0;
  long failures = 0;
  double max_rel = 0.0;
  std::string first_fail;

  void add(const Schedule& sched, const Instance& inst, const SystemConfig& cfg) {
    ++checked;
    std::vector<Violation> v = validate(sched, inst, cfg);
    if (!v.empty()) {
      ++failures;
      if (first_fail.empty()) first_fail = v.front().kind + ": " + v.front().detail;
      return;
    }
    ExecutionTrace tr = execute(sched, inst, cfg);
    double rel = std::abs(tr.total_ms - sched.response_ms) / std::max(1.0, sched.response_ms);
    max_rel = std::max(max_rel, rel);
    if (rel > 1e-9) {
      ++failures;
      if (first_fail.empty())
        first_fail = "trace total " + std::to_string(tr.total_ms) + " vs response " +
                     std::to_string(sched.response_ms);
    }
  }
};

// ---------------------------------------------------------------------------
// 1. Worst-case response bounds, 1000 random instances per scheduler.
//    Shelves:   T <  d*W/P + 2s*V/P + 2*Tmax        and T <= (d+2s+2)*LB
//    Pipeline:  T <= d*(1+s/(1-l))*W/P + Tmax       and T <= (d*(1+s/(1-l))+1)*LB
//    Levels:    T <  d^2*(1+s/(1-l))*W/P + (2s^2/(1-l))*V/P + Tmax
//               and T <= (d^2*(1+s/(1-l)) + 2s^2/(1-l) + 1)*LB
//    with W/P, V/P, Tmax, LB taken from the matching bound report.
Check crit1(ExecAudit& audit) {
  auto t0 = std::chrono::steady_clock::now();
  long viol = 0;
  std::string first;
  auto fail = [&](const char* suite, int trial, double got, double rhs) {
    ++viol;
    if (first.empty()) {
      std::ostringstream os;
      os << suite << " trial " << trial << ": response " << got << " > bound " << rhs;
      first = os.str();
    }
  };

  Rand rng(101);
  for (int trial = 0; trial < 1000; ++trial) {  // independent clones on shelves
    int d = 1 + rng.below(3), s = 1 + rng.below(2);
    int p = 1 + rng.below(6);
    double eps = rng.real(0.1, 0.9);
    SystemConfig cfg = cfg_dims(d, s, 0.5, eps);
    int n = 1 + rng.below(40);
    std::vector<Clone> clones;
    for (int i = 0; i < n; ++i) clones.push_back(random_clone(rng, i, d, s, 0.98, eps));

    Schedule sched = op_sched(clones, p, cfg);
    BoundsReport r = lb_independent(clones, p);
    double rhs = d * r.avg_work + 2.0 * s * r.avg_volume + 2.0 * r.t_max;
    double ratio_rhs = (d + 2.0 * s + 2.0) * r.lb;
    double slack = 1e-9 * std::max(1.0, rhs);
    if (sched.response_ms > rhs + slack) fail("shelves", trial, sched.response_ms, rhs);
    if (sched.response_ms > ratio_rhs + slack)
      fail("shelves/lb", trial, sched.response_ms, ratio_rhs);
    audit.add(sched, instance_of(clones), cfg);
  }

  Rand rng2(102);
  for (int trial = 0; trial < 1000; ++trial) {  // one memory-granular pipeline
    int d = 1 + rng2.below(3), s = 1 + rng2.below(2);
    double lam = rng2.real(0.1, 0.9);
    double eps = rng2.real(0.1, 0.9);
    SystemConfig cfg = cfg_dims(d, s, lam, eps);
    int n = 1 + rng2.below(25);
    std::vector<Clone> clones;
    for (int i = 0; i < n; ++i) clones.push_back(random_clone(rng2, i, d, s, lam, eps));
    Pipeline pipe = pipe_of(0, std::move(clones));
    int p = sufficient_sites(pipe, s, lam) + rng2.below(4);

    Schedule sched;
    try {
      sched = pipe_sched(pipe, p, cfg);
    } catch (const InfeasibleError& e) {
      ++viol;
      if (first.empty()) first = std::string("pipeline placement refused: ") + e.what();
      continue;
    }
    std::vector<Pipeline> one;
    one.push_back(pipe);
    BoundsReport r = lb_pipelines(one, p);
    double coeff = d * (1.0 + s / (1.0 - lam));
    double rhs = coeff * r.avg_work + r.t_max;
    double ratio_rhs = (coeff + 1.0) * r.lb;
    double slack = 1e-9 * std::max(1.0, rhs);
    if (sched.response_ms > rhs + slack) fail("pipeline", trial, sched.response_ms, rhs);
    if (sched.response_ms > ratio_rhs + slack)
      fail("pipeline/lb", trial, sched.response_ms, ratio_rhs);
    audit.add(sched, instance_of(one), cfg);
  }

  Rand rng3(103);
  for (int trial = 0; trial < 1000; ++trial) {  // independent pipelines in levels
    int d = 1 + rng3.below(3), s = 1 + rng3.below(2);
    double lam = rng3.real(0.1, 0.9);
    double eps = rng3.real(0.1, 0.9);
    SystemConfig cfg = cfg_dims(d, s, lam, eps);
    int n_pipes = 1 + rng3.below(8);
    std::vector<Pipeline> pipes;
    int id = 0, p = 1;
    for (int i = 0; i < n_pipes; ++i) {
      std::vector<Clone> clones;
      int n = 1 + rng3.below(5);
      for (int j = 0; j < n; ++j) clones.push_back(random_clone(rng3, id++, d, s, lam, eps));
      pipes.push_back(pipe_of(i, std::move(clones)));
      p = std::max(p, sufficient_sites(pipes.back(), s, lam));
    }
    p += rng3.below(4);

    Schedule sched;
    try {
      sched = level_sched(pipes, p, cfg);
    } catch (const InfeasibleError& e) {
      ++viol;
      if (first.empty()) first = std::string("level placement refused: ") + e.what();
      continue;
    }
    BoundsReport r = lb_pipelines(pipes, p);
    double c1 = double(d) * d * (1.0 + s / (1.0 - lam));
    double c2 = 2.0 * s * s / (1.0 - lam);
    double rhs = c1 * r.avg_work + c2 * r.avg_volume + r.t_max;
    double ratio_rhs = (c1 + c2 + 1.0) * r.lb;
    double slack = 1e-9 * std::max(1.0, rhs);
    if (sched.response_ms > rhs + slack) fail("levels", trial, sched.response_ms, rhs);
    if (sched.response_ms > ratio_rhs + slack)
      fail("levels/lb", trial, sched.response_ms, ratio_rhs);
    audit.add(sched, instance_of(pipes), cfg);
  }

  double secs = secs_since(t0);
  std::ostringstream os;
  os << "worst-case bounds — 3x1000 instances, " << viol << " violations, " << std::fixed
     << std::setprecision(1) << secs << " s (< 60 s)";
  if (!first.empty()) os << "; first: " << first;
  return {viol == 0 && secs < 60.0, os.str()};
}

// ---------------------------------------------------------------------------
// 2. Sufficiency: a memory-granular pipeline always places on
//    ceil(l(sum demand) * s / (1 - lambda)) sites.
Check crit2(ExecAudit& audit) {
  Rand rng(211);
  long fails = 0;
  std::string first;
  for (int trial = 0; trial < 1000; ++trial) {
    int d = 1 + rng.below(3), s = 1 + rng.below(2);
    double lam = rng.real(0.05, 0.95);
    double eps = rng.real(0.1, 0.9);
    SystemConfig cfg = cfg_dims(d, s, lam, eps);
    int n = 1 + rng.below(30);
    std::vector<Clone> clones;
    for (int i = 0; i < n; ++i) clones.push_back(random_clone(rng, i, d, s, lam, eps));
    Pipeline pipe = pipe_of(0, std::move(clones));
    int p = sufficient_sites(pipe, s, lam);
    try {
      Schedule sched = pipe_sched(pipe, p, cfg);
      std::vector<Pipeline> one;
      one.push_back(pipe);
      audit.add(sched, instance_of(one), cfg);
    } catch (const InfeasibleError& e) {
      ++fails;
      if (first.empty()) {
        std::ostringstream os;
        os << "trial " << trial << " (P=" << p << ", lambda=" << lam << "): " << e.what();
        first = os.str();
      }
    }
  }
  std::ostringstream os;
  os << "pipeline sufficiency — 1000 pipelines at the site bound, " << fails << " refusals";
  if (!first.empty()) os << "; first: " << first;
  return {fails == 0, os.str()};
}

// ---------------------------------------------------------------------------
// 3. Tightness family for the sufficiency bound: clones of demand 1/(k-eps)
//    pack exactly k-1 per site, filling all P sites while the bound reads
//    P*(k-1)/(k-1-eps); one site fewer is refused, and at eps=0.01 the
//    bound overshoots P by less than 5%.
Check crit3(ExecAudit& audit) {
  long fails = 0;
  std::string first;
  auto note = [&](const std::string& what) {
    ++fails;
    if (first.empty()) first = what;
  };
  for (int P : {2, 4}) {
    for (int k : {3, 5}) {
      for (double eps : {0.1, 0.01}) {
        double demand = 1.0 / (k - eps);
        double lambda = demand;  // every clone exactly at the granularity cap
        SystemConfig cfg = cfg_dims(1, 1, lambda, 0.5);
        int n = P * (k - 1);
        std::vector<Clone> clones;
        for (int i = 0; i < n; ++i) clones.push_back(mk(i, {1.0}, {demand}, 1.0));
        Pipeline pipe = pipe_of(0, std::move(clones));

        double bound = n * demand / (1.0 - lambda);
        std::ostringstream tag;
        tag << "P=" << P << " k=" << k << " eps=" << eps;
        if (bound <= P) note(tag.str() + ": bound does not exceed the used sites");
        if (eps == 0.01 && bound / P > 1.05) note(tag.str() + ": bound/P over 1.05");

        try {
          Schedule sched = pipe_sched(pipe, P, cfg);
          std::vector<int> per_site(std::size_t(P), 0);
          for (auto [c, site] : sched.levels.at(0).places) ++per_site.at(std::size_t(site));
          for (int cnt : per_site)
            if (cnt != k - 1) note(tag.str() + ": uneven packing");
          std::vector<Pipeline> one;
          one.push_back(pipe);
          audit.add(sched, instance_of(one), cfg);
        } catch (const InfeasibleError&) {
          note(tag.str() + ": refused on P sites");
          continue;
        }
        try {
          pipe_sched(pipe, P - 1, cfg);
          note(tag.str() + ": accepted on P-1 sites");
        } catch (const InfeasibleError&) {
          // expected: the family needs every one of its P sites
        }
      }
    }
  }
  std::ostringstream os;
  os << "sufficiency tightness — 8 families x 2 eps, " << fails << " deviations";
  if (!first.empty()) os << "; first: " << first;
  return {fails == 0, os.str()};
}

// ---------------------------------------------------------------------------
// 4. Oracle sandwich: closed-form bound <= exhaustive optimum <= heuristic.
Check crit4(ExecAudit& audit) {
  auto t0 = std::chrono::steady_clock::now();
  long fails = 0;
  std::string first;
  auto note = [&](const char* suite, int trial, double lb, double opt, double heur) {
    ++fails;
    if (first.empty()) {
      std::ostringstream os;
      os << suite << " trial " << trial << ": lb " << lb << ", opt " << opt << ", heuristic "
         << heur;
      first = os.str();
    }
  };

  Rand rng(401);
  for (int trial = 0; trial < 300; ++trial) {  // independent clones vs shelves
    int n = 2 + rng.below(5);
    int p = 1 + rng.below(3);
    SystemConfig cfg = cfg_dims(2, 1, 0.5, 0.5);
    std::vector<Clone> clones;
    for (int i = 0; i < n; ++i) clones.push_back(random_clone(rng, i, 2, 1, 0.9, 0.5));
    double opt = oracle_opt(clones, p);
    BoundsReport r = lb_independent(clones, p);
    Schedule heur = op_sched(clones, p, cfg);
    if (r.lb > opt + 1e-9 || opt > heur.response_ms + 1e-9)
      note("clones", trial, r.lb, opt, heur.response_ms);
    audit.add(heur, instance_of(clones), cfg);
  }

  Rand rng2(402);
  for (int trial = 0; trial < 200; ++trial) {  // pipelines vs levelling
    int n_pipes = 1 + rng2.below(3);
    int p = 1 + rng2.below(3);
    SystemConfig cfg = cfg_dims(2, 1, 0.4, 0.5);
    double budget = p * (1.0 - cfg.grain.lambda);
    std::vector<Pipeline> pipes;
    int id = 0;
    for (int i = 0; i < n_pipes; ++i) {
      int n = 1 + rng2.below(2);
      std::vector<Clone> cs;
      double sum = 0.0;
      for (int j = 0; j < n; ++j) {
        Clone c = random_clone(rng2, id++, 2, 1, 0.4, 0.5);
        sum += c.demand[0];
        cs.push_back(std::move(c));
      }
      // Keep each pipeline schedulable alone on the drawn machine.
      if (sum > budget)
        for (Clone& c : cs) c.demand = DemandVector({c.demand[0] * budget / sum * 0.99});
      pipes.push_back(pipe_of(i, std::move(cs)));
    }
    double opt = oracle_opt(pipes, p);
    BoundsReport r = lb_pipelines(pipes, p);
    Schedule heur = level_sched(pipes, p, cfg);
    if (r.lb > opt + 1e-9 || opt > heur.response_ms + 1e-9)
      note("pipelines", trial, r.lb, opt, heur.response_ms);
    audit.add(heur, instance_of(pipes), cfg);
  }

  double secs = secs_since(t0);
  std::ostringstream os;
  os << "oracle sandwich — 500 instances, " << fails << " order breaks, " << std::fixed
     << std::setprecision(1) << secs << " s (< 120 s)";
  if (!first.empty()) os << "; first: " << first;
  return {fails == 0 && secs < 120.0, os.str()};
}

// ---------------------------------------------------------------------------
// 5. Vector-length partition bracketing, exact on dyadic rationals:
//    for any partition S = S1 u ... u Sm,  sum l(Si) <= d * l(S)  and
//    l(S) <= sum l(Si).
Check crit5() {
  Rand rng(501);
  long fails = 0;
  std::string first;
  for (int trial = 0; trial < 10000; ++trial) {
    int d = 1 + rng.below(4);
    int n = 1 + rng.below(12);
    int m = 1 + rng.below(n);
    std::vector<std::vector<double>> group(static_cast<std::size_t>(m),
                                           std::vector<double>(static_cast<std::size_t>(d)));
    std::vector<double> all(static_cast<std::size_t>(d), 0.0);
    for (int i = 0; i < n; ++i) {
      int g = rng.below(m);
      for (int k = 0; k < d; ++k) {
        double x = double(rng.below(20481)) / 1024.0;  // dyadic: sums stay exact
        group[std::size_t(g)][std::size_t(k)] += x;
        all[std::size_t(k)] += x;
      }
    }
    double l_all = vector_length(all);
    double sum_parts = 0.0;
    for (const auto& gv : group) sum_parts += vector_length(gv);
    if (!(sum_parts <= double(d) * l_all) || !(l_all <= sum_parts)) {
      ++fails;
      if (first.empty()) {
        std::ostringstream os;
        os << "trial " << trial << ": sum " << sum_parts << ", whole " << l_all << ", d " << d;
        first = os.str();
      }
    }
  }
  std::ostringstream os;
  os << "length partition bracketing — 10000 exact trials, " << fails << " breaks";
  if (!first.empty()) os << "; first: " << first;
  return {fails == 0, os.str()};
}

Check crit6(const ExecAudit& audit) {
  std::ostringstream os;
  os << "executor agreement — " << audit.checked << " schedules replayed, " << audit.failures
     << " disagreements, max relative gap " << std::scientific << std::setprecision(2)
     << audit.max_rel;
  if (!audit.first_fail.empty()) os << "; first: " << audit.first_fail;
  return {audit.failures == 0, os.str()};
}

// ---------------------------------------------------------------------------
// 7. End-to-end trends on 20 random 20-join bushy queries, unplaced scans:
//    (a) full-tree mean ratio < 2.5 at every machine size,
//    (b) coarser memory granularity: response up, ratio down (5% slack/step),
//    (c) removing the blocking edges never hurts the mean response.
Check crit7() {
  auto t0 = std::chrono::steady_clock::now();
  ExperimentSpec spec;
  spec.sites = {10, 20, 30, 40, 50, 60};
  spec.mem_pages = {8192};
  spec.lambda = {0.2, 0.5, 0.8};
  spec.f = {0.6};
  spec.epsilon = {0.5};
  spec.workload.seed = 424242;
  spec.workload.shape = PlanShape::BushyRandom;
  spec.workload.mix = {{20, 20}};
  spec.workload.min_tuples = 10000;
  spec.workload.max_tuples = 100000;
  spec.placement = PlacementPolicy::None;
  spec.algos = {ExpAlgo::TreeSched, ExpAlgo::LevelSched};
  spec.repetitions = 1;
  spec.seed = 7;
  spec.batch = false;

  std::vector<ExperimentRow> rows = run_experiment(spec, false);

  struct Cell {
    double resp = 0.0, ratio = 0.0;
    int n = 0;
  };
  std::map<std::tuple<int, double, std::string>, Cell> cells;
  long infeasible = 0;
  for (const ExperimentRow& r : rows) {
    if (!r.feasible) {
      ++infeasible;
      continue;
    }
    Cell& c = cells[{r.sites, r.lambda, r.algo}];
    c.resp += r.response_ms;
    c.ratio += r.ratio;
    ++c.n;
  }
  for (auto& [key, c] : cells) {
    c.resp /= c.n;
    c.ratio /= c.n;
  }

  long fails = 0;
  std::string first;
  auto note = [&](const std::string& what) {
    ++fails;
    if (first.empty()) first = what;
  };
  if (infeasible > 0) note(std::to_string(infeasible) + " infeasible rows");

  double worst_ratio = 0.0;
  for (int p : spec.sites)
    for (double lam : spec.lambda) {
      auto it = cells.find({p, lam, "treesched"});
      if (it == cells.end() || it->second.n != 20) {
        note("missing full-tree cell at P=" + std::to_string(p));
        continue;
      }
      worst_ratio = std::max(worst_ratio, it->second.ratio);
      if (it->second.ratio >= 2.5) {
        std::ostringstream os;
        os << "mean ratio " << it->second.ratio << " at P=" << p << " lambda=" << lam;
        note(os.str());
      }
    }

  // Granularity trends are judged on the sweep-wide mean per lambda (the
  // per-machine-size means weigh equally: every cell holds all 20 queries).
  auto grand = [&](double lam, const char* algo) {
    Cell g;
    for (int p : spec.sites) {
      const Cell& c = cells[{p, lam, algo}];
      g.resp += c.resp;
      g.ratio += c.ratio;
      ++g.n;
    }
    g.resp /= g.n;
    g.ratio /= g.n;
    return g;
  };

  for (std::size_t i = 0; i + 1 < spec.lambda.size(); ++i) {
    Cell lo = grand(spec.lambda[i], "treesched");
    Cell hi = grand(spec.lambda[i + 1], "treesched");
    if (hi.resp < lo.resp * 0.95) {
      std::ostringstream os;
      os << "mean response drops " << lo.resp << " -> " << hi.resp << " over lambda "
         << spec.lambda[i] << " -> " << spec.lambda[i + 1];
      note(os.str());
    }
    if (hi.ratio > lo.ratio * 1.05) {
      std::ostringstream os;
      os << "mean ratio rises " << lo.ratio << " -> " << hi.ratio << " over lambda "
         << spec.lambda[i] << " -> " << spec.lambda[i + 1];
      note(os.str());
    }
  }

  for (double lam : spec.lambda) {
    Cell tree = grand(lam, "treesched");
    Cell level = grand(lam, "levelsched");
    if (level.resp > tree.resp * (1.0 + 1e-9)) {
      std::ostringstream os;
      os << "edge removal hurts at lambda=" << lam << ": " << level.resp << " > " << tree.resp;
      note(os.str());
    }
  }

  double secs = secs_since(t0);
  std::ostringstream os;
  os << "granularity/scale-up trends — " << rows.size() << " rows, worst mean ratio "
     << std::fixed << std::setprecision(2) << worst_ratio << ", " << fails << " trend breaks, "
     << std::setprecision(1) << secs << " s (< 300 s)";
  if (!first.empty()) os << "; first: " << first;
  return {fails == 0 && secs < 300.0, os.str()};
}

// ---------------------------------------------------------------------------
// 8. Baseline ordering on a mixed batch (five 8-join + ten 2-join right-deep
//    queries, single-site placements): the home-site baseline averages at
//    least twice the full-tree response, and the slot-allotment baseline
//    never beats it, at both machine sizes.
Check crit8() {
  ExperimentSpec spec;
  spec.sites = {16, 32};
  spec.mem_pages = {16384};
  spec.lambda = {0.3};
  spec.f = {0.6};
  spec.epsilon = {0.5};
  spec.workload.seed = 6001;
  spec.workload.shape = PlanShape::RightDeep;
  spec.workload.mix = {{5, 8}, {10, 2}};
  spec.workload.min_tuples = 10000;
  spec.workload.max_tuples = 300000;
  spec.placement = PlacementPolicy::NoDeclust;
  spec.algos = {ExpAlgo::TreeSched, ExpAlgo::Hier, ExpAlgo::Zsched};
  spec.repetitions = 5;
  spec.seed = 9001;
  spec.batch = true;

  std::vector<ExperimentRow> rows = run_experiment(spec, false);

  std::map<std::pair<int, std::string>, std::pair<double, int>> mean;  // sum, n
  long infeasible = 0;
  for (const ExperimentRow& r : rows) {
    if (!r.feasible) {
      ++infeasible;
      continue;
    }
    auto& [sum, n] = mean[{r.sites, r.algo}];
    sum += r.response_ms;
    ++n;
  }

  long fails = 0;
  std::string first;
  auto note = [&](const std::string& what) {
    ++fails;
    if (first.empty()) first = what;
  };
  if (infeasible > 0) note(std::to_string(infeasible) + " infeasible rows");

  std::ostringstream facts;
  for (int p : spec.sites) {
    double tree = 0.0, hier = 0.0, zs = 0.0;
    for (const char* a : {"treesched", "hier", "zsched"}) {
      auto it = mean.find({p, a});
      if (it == mean.end() || it->second.second != 75) {
        note(std::string("missing rows for ") + a + " at P=" + std::to_string(p));
        continue;
      }
      double m = it->second.first / it->second.second;
      if (a == std::string("treesched")) tree = m;
      if (a == std::string("hier")) hier = m;
      if (a == std::string("zsched")) zs = m;
    }
    facts << " P=" << p << ": z/tree " << std::fixed << std::setprecision(2)
          << (tree > 0 ? zs / tree : 0.0) << ", hier/tree " << (tree > 0 ? hier / tree : 0.0)
          << ";";
    if (zs < 2.0 * tree) {
      std::ostringstream os;
      os << "home-site mean " << zs << " under twice the full-tree mean " << tree << " at P=" << p;
      note(os.str());
    }
    if (tree > hier * (1.0 + 1e-9)) {
      std::ostringstream os;
      os << "full-tree mean " << tree << " over the slot-allotment mean " << hier
         << " at P=" << p;
      note(os.str());
    }
  }

  std::ostringstream os;
  os << "baseline ordering — workload seeds " << spec.workload.seed << ".."
     << spec.workload.seed + std::uint64_t(spec.repetitions) - 1 << ", placement seed base "
     << spec.seed << ";" << facts.str() << " " << fails << " order breaks";
  if (!first.empty()) os << "; first: " << first;
  return {fails == 0, os.str()};
}

// ---------------------------------------------------------------------------
// 9. Determinism: the experiment command writes byte-identical files for
//    identical seeds (timing column suppressed).
Check crit9() {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "mrsched_acceptance";
  std::error_code ec;
  fs::remove_all(dir, ec);
  fs::create_directories(dir);

  ordered_json spec;
  spec["sites"] = {16, 32};
  spec["mem_pages"] = {16384};
  spec["lambda"] = {0.3};
  spec["f"] = {0.6};
  spec["epsilon"] = {0.5};
  spec["workload"] = {{"seed", 6001},
                      {"shape", "right_deep"},
                      {"mix", {{{"queries", 5}, {"joins", 8}}, {{"queries", 10}, {"joins", 2}}}},
                      {"min_tuples", 10000},
                      {"max_tuples", 300000}};
  spec["placement"] = "no_declust";
  spec["algos"] = {"treesched", "levelsched", "hier", "zsched"};
  spec["repetitions"] = 2;
  spec["seed"] = 9001;
  spec["batch"] = true;
  fs::path spec_path = dir / "spec.json";
  {
    std::ofstream out(spec_path);
    out << spec.dump(2) << "\n";
  }

  auto run = [&](const fs::path& out) {
    std::string cmd = std::string(SCHED_CLI_PATH) + " experiment --spec " + spec_path.string() +
                      " --out " + out.string() + " --omit-wall >/dev/null 2>&1";
    return std::system(cmd.c_str());
  };
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };

  int rc1 = run(dir / "run1.csv");
  int rc2 = run(dir / "run2.csv");
  std::string a = slurp(dir / "run1.csv");
  std::string b = slurp(dir / "run2.csv");

  bool ok = rc1 == 0 && rc2 == 0 && !a.empty() && a == b;
  std::ostringstream os;
  os << "deterministic output — two experiment runs, " << a.size() << " bytes each, "
     << (a == b ? "identical" : "DIFFERENT");
  if (rc1 != 0 || rc2 != 0) os << " (exit codes " << rc1 << ", " << rc2 << ")";
  return {ok, os.str()};
}

}  // namespace

int main() {
  ExecAudit audit;
  std::vector<Check> checks;
  checks.push_back(crit1(audit));
  checks.push_back(crit2(audit));
  checks.push_back(crit3(audit));
  checks.push_back(crit4(audit));
  checks.push_back(crit5());
  checks.push_back(crit6(audit));
  checks.push_back(crit7());
  checks.push_back(crit8());
  checks.push_back(crit9());

  int failures = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    std::printf("%s  %zu. %s\n", checks[i].pass ? "PASS" : "FAIL", i + 1,
                checks[i].detail.c_str());
    if (!checks[i].pass) ++failures;
  }
  std::printf("%d/%zu acceptance checks passed\n", int(checks.size()) - failures, checks.size());
  return failures == 0 ? 0 : 1;
}
