#include "mrsched/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace mrsched {

namespace {

void add_into(std::vector<double>& acc, const std::vector<double>& v, double scale = 1.0) {
  if (acc.size() < v.size()) acc.resize(v.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) acc[i] += scale * v[i];
}

BoundsReport finish(BoundsReport r) {
  struct Term {
    const char* name;
    double value;
  };
  std::vector<Term> terms{{"t_max", r.t_max}, {"avg_work", r.avg_work},
                          {"avg_volume", r.avg_volume}};
  if (r.crit_path) terms.push_back({"crit_path", *r.crit_path});
  r.lb = 0.0;
  r.dominant_term = terms.front().name;
  for (const auto& t : terms)
    if (t.value > r.lb) {
      r.lb = t.value;
      r.dominant_term = t.name;
    }
  return r;
}

}  // namespace

BoundsReport lb_independent(const std::vector<Clone>& clones, int p) {
  if (p < 1) throw SchedError("bounds: need at least one site");
  BoundsReport r;
  std::vector<double> sw, stv;
  for (const auto& c : clones) {
    r.t_max = std::max(r.t_max, c.seq_ms);
    add_into(sw, c.work.c);
    add_into(stv, c.demand.c, c.seq_ms);
  }
  r.avg_work = vector_length(sw) / p;
  r.avg_volume = vector_length(stv) / p;
  return finish(r);
}

BoundsReport lb_pipelines(const std::vector<Pipeline>& pipes, int p) {
  if (p < 1) throw SchedError("bounds: need at least one site");
  BoundsReport r;
  std::vector<double> sw, stv;
  for (const auto& pipe : pipes) {
    r.t_max = std::max(r.t_max, pipe.t_max);
    std::vector<double> sv;
    for (const auto& c : pipe.clones) {
      add_into(sw, c.work.c);
      add_into(sv, c.demand.c);
    }
    add_into(stv, sv, pipe.t_max);
  }
  r.avg_work = vector_length(sw) / p;
  r.avg_volume = vector_length(stv) / p;
  return finish(r);
}

BoundsReport tree_bound(const MergedTree& merged, int p) {
  BoundsReport r = lb_pipelines(merged.units, p);
  r.crit_path = critical_path_time(merged);
  return finish(std::move(r));
}

BoundsReport tree_bound(const TaskTree& tree, int p, double epsilon) {
  return tree_bound(merge_memory_pipelines(tree, epsilon), p);
}

double perf_ratio(const Schedule& schedule, const BoundsReport& report) {
  if (report.lb <= 0.0) {
    if (std::abs(schedule.response_ms) < 1e-12) return 1.0;
    throw SchedError("perf_ratio: zero lower bound with nonzero response");
  }
  return schedule.response_ms / report.lb;
}

BulkParameters bulk_parameters(const TaskTree& tree, int p, double epsilon) {
  BoundsReport r = tree_bound(tree, p, epsilon);
  BulkParameters b;
  b.crit_path = *r.crit_path;
  b.avg_work = r.avg_work;
  b.avg_volume = r.avg_volume;
  b.combined = r.lb;
  return b;
}

BulkOrder compare_bulk(const BulkParameters& a, const BulkParameters& b) {
  bool a_le = a.crit_path <= b.crit_path && a.avg_work <= b.avg_work && a.avg_volume <= b.avg_volume;
  bool b_le = b.crit_path <= a.crit_path && b.avg_work <= a.avg_work && b.avg_volume <= a.avg_volume;
  if (a_le && b_le) return BulkOrder::Equal;
  if (a_le) return BulkOrder::FirstDominates;
  if (b_le) return BulkOrder::SecondDominates;
  return BulkOrder::Incomparable;
}

}  // namespace mrsched
