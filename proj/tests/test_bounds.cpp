#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mrsched/bounds.hpp"
#include "mrsched/oracle.hpp"
#include "mrsched/schedulers.hpp"

using namespace mrsched;

namespace {

Clone mk(int id, std::vector<double> w, std::vector<double> d, double seq = -1.0) {
  Clone c;
  c.id = id;
  c.op = "op" + std::to_string(id);
  c.work = WorkVector(std::move(w));
  c.demand = DemandVector(std::move(d));
  c.seq_ms = seq >= 0.0 ? seq : vector_length(c.work.c);
  return c;
}

Pipeline pipe_of(int id, std::vector<Clone> clones) {
  Pipeline p;
  p.id = id;
  p.clones = std::move(clones);
  p.refresh_t_max();
  return p;
}

TaskTree tree_of(std::vector<Pipeline> pipes, std::vector<std::pair<int, int>> disk_edges) {
  TaskTree t;
  t.pipelines = std::move(pipes);
  for (auto [c, p] : disk_edges) {
    TaskEdge e;
    e.child = c;
    e.parent = p;
    e.kind = EdgeKind::DiskMat;
    t.edges.push_back(e);
  }
  return t;
}

SystemConfig cfg_dims(int d, int s, double lambda = 0.5) {
  SystemConfig cfg;
  cfg.tsr_dims = d;
  cfg.ssr_dims = s;
  cfg.epsilon = 0.5;
  cfg.grain.f = 0.6;
  cfg.grain.lambda = lambda;
  return cfg;
}

}  // namespace

TEST_CASE("a single clone is bounded by its own duration") {
  std::vector<Clone> clones{mk(0, {4, 3, 0}, {0.2}, 6.0)};
  BoundsReport r = lb_independent(clones, 4);
  CHECK(r.lb == doctest::Approx(6.0));
  CHECK(r.dominant_term == "t_max");
  CHECK(!r.crit_path.has_value());
}

TEST_CASE("with unlimited sites only the slowest clone matters") {
  std::vector<Clone> clones;
  for (int i = 0; i < 6; ++i) clones.push_back(mk(i, {10, 5, 0}, {0.5}, 10.0));
  BoundsReport r = lb_independent(clones, 1000000);
  CHECK(r.lb == doctest::Approx(10.0));
  CHECK(r.dominant_term == "t_max");
}

TEST_CASE("average work dominates when clones are plentiful") {
  std::vector<Clone> clones;
  for (int i = 0; i < 4; ++i) clones.push_back(mk(i, {10, 0}, {0.001}, 10.0));
  BoundsReport r = lb_independent(clones, 2);
  CHECK(r.avg_work == doctest::Approx(20.0));  // summed work [40, 0] over 2 sites
  CHECK(r.lb == doctest::Approx(20.0));
  CHECK(r.dominant_term == "avg_work");
}

TEST_CASE("single-pipeline volume never beats the slowest clone") {
  Pipeline p = pipe_of(0, {mk(0, {10, 0, 0}, {0.7}, 10.0), mk(1, {2, 0, 0}, {0.3}, 2.0)});
  BoundsReport r = lb_pipelines({p}, 1000);
  // Total demand is 1.0, so the volume term is t_max * 1 / P <= t_max.
  CHECK(r.lb == doctest::Approx(10.0));
  CHECK(r.dominant_term == "t_max");
}

TEST_CASE("pipeline volumes add up across pipelines") {
  std::vector<Pipeline> pipes{pipe_of(0, {mk(0, {1, 0, 0}, {1.0}, 10.0)}),
                              pipe_of(1, {mk(1, {1, 0, 0}, {1.0}, 10.0)})};
  BoundsReport r = lb_pipelines(pipes, 1);
  CHECK(r.avg_volume == doctest::Approx(20.0));
  CHECK(r.lb >= 20.0);
  CHECK(r.dominant_term == "avg_volume");

  BoundsReport empty = lb_pipelines({}, 1);
  CHECK(empty.lb == 0.0);
}

TEST_CASE("tree bound of a single pipeline equals the pipeline bound") {
  TaskTree t = tree_of({pipe_of(0, {mk(0, {8, 4, 0}, {0.4}, 8.0)})}, {});
  BoundsReport tree = tree_bound(t, 3, 0.5);
  BoundsReport pipe = lb_pipelines(t.pipelines, 3);
  CHECK(tree.lb == doctest::Approx(pipe.lb));
  REQUIRE(tree.crit_path.has_value());
  CHECK(*tree.crit_path == doctest::Approx(8.0));
}

TEST_CASE("deep chains are bounded by their critical path when sites abound") {
  TaskTree t = tree_of({pipe_of(0, {mk(0, {5, 0, 0}, {0.1}, 5.0)}),
                        pipe_of(1, {mk(1, {7, 0, 0}, {0.1}, 7.0)}),
                        pipe_of(2, {mk(2, {3, 0, 0}, {0.1}, 3.0)})},
                       {{0, 1}, {1, 2}});
  BoundsReport r = tree_bound(t, 1000, 0.5);
  CHECK(r.lb == doctest::Approx(15.0));
  CHECK(r.dominant_term == "crit_path");
}

TEST_CASE("two-stage tree bound takes the max of all three terms") {
  TaskTree t = tree_of({pipe_of(0, {mk(0, {12, 8, 0}, {0.5}, 10.0)}),
                        pipe_of(1, {mk(1, {4, 0, 0}, {0.25}, 4.0)})},
                       {{0, 1}});
  BoundsReport r = tree_bound(t, 2, 0.5);
  CHECK(r.avg_work == doctest::Approx(8.0));            // l([16,8,0]) / 2
  CHECK(r.avg_volume == doctest::Approx(3.0));          // l(10*0.5 + 4*0.25) / 2
  CHECK(*r.crit_path == doctest::Approx(14.0));
  CHECK(r.lb == doctest::Approx(14.0));
  CHECK(r.dominant_term == "crit_path");
}

TEST_CASE("performance ratio divides response by the bound") {
  BoundsReport r;
  r.t_max = r.lb = 10.0;
  Schedule s;
  s.response_ms = 10.0;
  CHECK(perf_ratio(s, r) == doctest::Approx(1.0));
  s.response_ms = 20.0;
  CHECK(perf_ratio(s, r) == doctest::Approx(2.0));

  BoundsReport zero;
  s.response_ms = 5.0;
  CHECK_THROWS_AS(perf_ratio(s, zero), SchedError);
  s.response_ms = 0.0;
  CHECK(perf_ratio(s, zero) == doctest::Approx(1.0));
}

TEST_CASE("bulk parameters expose the bound terms and a partial order") {
  TaskTree t = tree_of({pipe_of(0, {mk(0, {12, 8, 0}, {0.5}, 10.0)}),
                        pipe_of(1, {mk(1, {4, 0, 0}, {0.25}, 4.0)})},
                       {{0, 1}});
  BulkParameters b = bulk_parameters(t, 2, 0.5);
  BoundsReport r = tree_bound(t, 2, 0.5);
  CHECK(b.combined == doctest::Approx(r.lb));
  CHECK(b.crit_path == doctest::Approx(*r.crit_path));

  BulkParameters worse = b;
  worse.avg_work += 1.0;
  CHECK(compare_bulk(b, worse) == BulkOrder::FirstDominates);
  CHECK(compare_bulk(worse, b) == BulkOrder::SecondDominates);
  CHECK(compare_bulk(b, b) == BulkOrder::Equal);
  BulkParameters mixed = b;
  mixed.avg_work += 1.0;
  mixed.crit_path -= 1.0;
  CHECK(compare_bulk(b, mixed) == BulkOrder::Incomparable);
}

TEST_CASE("oracle handles the degenerate instances exactly") {
  std::vector<Clone> one{mk(0, {4, 2, 0}, {0.5}, 5.0)};
  CHECK(oracle_opt(one, 2) == doctest::Approx(5.0));

  std::vector<Clone> two{mk(0, {4, 0, 0}, {0.8}, 4.0), mk(1, {3, 0, 0}, {0.8}, 3.0)};
  CHECK(oracle_opt(two, 1) == doctest::Approx(7.0));  // incompatible on one site

  CHECK(oracle_opt(std::vector<Clone>{}, 2) == doctest::Approx(0.0));
}

TEST_CASE("oracle refuses oversized instances") {
  std::vector<Clone> many;
  for (int i = 0; i < 9; ++i) many.push_back(mk(i, {1, 0, 0}, {0.1}));
  CHECK_THROWS_AS(oracle_opt(many, 2), SchedError);

  std::vector<Clone> few{mk(0, {1, 0, 0}, {0.1})};
  CHECK_THROWS_AS(oracle_opt(few, 4), SchedError);

  std::vector<Pipeline> pipes;
  for (int i = 0; i < 4; ++i) pipes.push_back(pipe_of(i, {mk(i, {1, 0, 0}, {0.1})}));
  CHECK_THROWS_AS(oracle_opt(pipes, 2), SchedError);

  std::vector<Clone> fat{mk(0, {1, 0, 0}, {1.5})};
  CHECK_THROWS_AS(oracle_opt(fat, 2), InfeasibleError);
}

TEST_CASE("bound, oracle, and heuristic sandwich each other on small instances") {
  std::mt19937_64 rng(23);
  auto u = [&](double lo, double hi) {
    return lo + (hi - lo) * double(rng() >> 11) * 0x1.0p-53;
  };
  auto cfg = cfg_dims(2, 1);
  for (int trial = 0; trial < 150; ++trial) {
    int n = 2 + int(rng() % 4);
    int p = 1 + int(rng() % 3);
    std::vector<Clone> clones;
    for (int i = 0; i < n; ++i) {
      Clone c = mk(i, {u(0, 10), u(0, 10)}, {u(0, 0.9)});
      c.seq_ms = seq_time_op(c.work, 0.5);
      clones.push_back(std::move(c));
    }
    double opt = oracle_opt(clones, p);
    BoundsReport r = lb_independent(clones, p);
    Schedule heur = op_sched(clones, p, cfg);
    CHECK(r.lb <= opt + 1e-9);
    CHECK(opt <= heur.response_ms + 1e-9);
  }
}

TEST_CASE("pipeline oracle brackets the level scheduler") {
  std::mt19937_64 rng(29);
  auto u = [&](double lo, double hi) {
    return lo + (hi - lo) * double(rng() >> 11) * 0x1.0p-53;
  };
  auto cfg = cfg_dims(2, 1, 0.4);
  for (int trial = 0; trial < 100; ++trial) {
    int n_pipes = 1 + int(rng() % 3);
    int p = 1 + int(rng() % 3);
    double budget = p * (1.0 - cfg.grain.lambda);
    std::vector<Pipeline> pipes;
    int id = 0;
    for (int i = 0; i < n_pipes; ++i) {
      int n = 1 + int(rng() % 2);
      std::vector<Clone> cs;
      double sum = 0.0;
      for (int j = 0; j < n; ++j) {
        Clone c = mk(id++, {u(0, 10), u(0, 10)}, {u(0, 0.4)});
        c.seq_ms = seq_time_op(c.work, 0.5);
        sum += c.demand[0];
        cs.push_back(std::move(c));
      }
      if (sum > budget)
        for (auto& c : cs) c.demand = DemandVector({c.demand[0] * budget / sum * 0.99});
      pipes.push_back(pipe_of(i, std::move(cs)));
    }
    double opt = oracle_opt(pipes, p);
    BoundsReport r = lb_pipelines(pipes, p);
    Schedule heur = level_sched(pipes, p, cfg);
    CHECK(r.lb <= opt + 1e-9);
    CHECK(opt <= heur.response_ms + 1e-9);
  }
}

TEST_CASE("the packing worst case approaches the sufficiency bound") {
  auto cfg = cfg_dims(1, 1);
  for (int P : {2, 4}) {
    for (int k : {3, 5}) {
      double prev_bound = std::numeric_limits<double>::infinity();
      for (double eps : {0.1, 0.01}) {
        double demand = 1.0 / (k - eps);
        double lambda = demand;  // every clone exactly lambda-granular
        int n = P * (k - 1);
        std::vector<Clone> cs;
        for (int i = 0; i < n; ++i) cs.push_back(mk(i, {1.0}, {demand}, 1.0));
        Pipeline pipe = pipe_of(0, std::move(cs));

        // Sufficiency bound: total demand / (1 - lambda) sites are enough.
        double total = n * demand;
        double bound = total / (1.0 - lambda);
        CHECK(bound == doctest::Approx(P * (k - 1.0) / (k - 1.0 - eps)));
        CHECK(bound > P);       // needs all P sites...
        CHECK(bound < prev_bound + 1e-12);  // ...and tightens as eps shrinks
        prev_bound = bound;

        // The family packs exactly k-1 clones per site on P sites.
        Schedule s = pipe_sched(pipe, P, cfg);
        std::vector<int> per_site(std::size_t(P), 0);
        for (auto [c, site] : s.levels[0].places) ++per_site[std::size_t(site)];
        for (int cnt : per_site) CHECK(cnt == k - 1);

        // One site fewer cannot host the pipeline.
        CHECK_THROWS_AS(pipe_sched(pipe, P - 1, cfg), InfeasibleError);
      }
    }
  }
}
