#include "mrsched/vectors.hpp"

#include <algorithm>
#include <cmath>

namespace mrsched {

double seq_time_op(const WorkVector& w, double epsilon) {
  if (epsilon < 0.0 || epsilon > 1.0) throw SchedError("seq_time_op: epsilon outside [0,1]");
  validate_work(w);
  double mx = 0.0, sum = 0.0;
  for (double x : w.c) {
    mx = std::max(mx, x);
    sum += x;
  }
  return epsilon * mx + (1.0 - epsilon) * sum;
}

double vector_length(std::span<const double> v) {
  double mx = 0.0;
  for (double x : v) mx = std::max(mx, x);
  return mx;
}

std::vector<double> component_sum(std::span<const std::vector<double>> vs) {
  if (vs.empty()) return {};
  std::vector<double> acc(vs.front().size(), 0.0);
  for (const auto& v : vs) {
    if (v.size() != acc.size()) throw SchedError("component_sum: dimension mismatch");
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += v[i];
  }
  return acc;
}

VolumeVector volume(const Clone& c) {
  std::vector<double> v(c.demand.c.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = c.seq_ms * c.demand.c[i];
  return VolumeVector(std::move(v));
}

bool is_compatible(std::span<const Clone> clones) {
  if (clones.empty()) return true;
  std::vector<double> acc(clones.front().demand.dim(), 0.0);
  for (const auto& cl : clones) {
    if (cl.demand.dim() != acc.size()) throw SchedError("is_compatible: dimension mismatch");
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += cl.demand.c[i];
  }
  return vector_length(acc) <= 1.0 + kCapacityTol;
}

double subset_exec_time(std::span<const Clone> clones) {
  if (clones.empty()) return 0.0;
  if (!is_compatible(clones)) throw SchedError("subset_exec_time: incompatible clone set");
  double max_seq = 0.0;
  std::vector<double> work(clones.front().work.dim(), 0.0);
  for (const auto& cl : clones) {
    if (cl.work.dim() != work.size()) throw SchedError("subset_exec_time: dimension mismatch");
    max_seq = std::max(max_seq, cl.seq_ms);
    for (std::size_t i = 0; i < work.size(); ++i) work[i] += cl.work.c[i];
  }
  return std::max(max_seq, vector_length(work));
}

void validate_work(const WorkVector& w) {
  for (double x : w.c)
    if (!(x >= 0.0) || !std::isfinite(x)) throw SchedError("work vector component negative or non-finite");
}

void validate_demand(const DemandVector& d) {
  for (double x : d.c) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw SchedError("demand vector component negative or non-finite");
    if (x > 1.0 + kCapacityTol) throw SchedError("demand vector component exceeds site capacity");
  }
}

}  // namespace mrsched
