#include "mrsched/granularity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mrsched {

namespace {

constexpr double kRelTol = 1e-9;

std::vector<double> gen_weights(const WeightGen& wg, int n) {
  std::vector<double> w = wg ? wg(n) : uniform_weights(n);
  if (int(w.size()) != n) throw SchedError("weight generator returned wrong count");
  double sum = std::accumulate(w.begin(), w.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-9) throw SchedError("clone weights must sum to 1");
  for (double x : w)
    if (x <= 0.0) throw SchedError("clone weights must be positive");
  return w;
}

// Smallest clone count that brings the largest clone's demand under lambda.
int memory_degree(const OperatorCost& oc, const GranularityParams& g, const WeightGen& wg,
                  int p_sites) {
  double dem = length(oc.total_demand);
  if (dem <= g.lambda * (1.0 + kRelTol)) return 1;
  if (dem > double(p_sites) + kCapacityTol)
    throw InfeasibleError(oc.op_id, oc.op_id + ": demand " + std::to_string(dem) +
                                        " exceeds the aggregate memory of " +
                                        std::to_string(p_sites) + " sites");
  int hint = std::max(1, int(std::floor(dem / g.lambda)));
  int cap = 4 * std::max(hint, p_sites) + 64;
  for (int n = std::max(1, hint - 2); n <= cap; ++n)
    if (max_mem(oc, n, wg) <= g.lambda * (1.0 + kRelTol)) return n;
  throw InfeasibleError(oc.op_id, oc.op_id + ": no clone count satisfies the memory bound");
}

// Largest count the communication budget admits; at least 1, at most p_sites.
int comm_degree(double proc_area, double bytes_out, const GranularityParams& g,
                const HardwareParams& hw, int starts_per_clone, int p_sites) {
  double alpha = hw.startup_alpha_ms * starts_per_clone;
  double budget = g.f * proc_area - hw.net_beta_ms_per_byte * bytes_out;
  if (alpha <= 0.0) return budget >= 0.0 ? p_sites : 1;
  if (budget <= 0.0) return 1;
  double raw = std::floor(budget / alpha * (1.0 + kRelTol));
  if (raw >= double(p_sites)) return p_sites;
  return std::max(1, int(raw));
}

CloneSplit assemble(double proc_area, double comm_at_n, int n, const GranularityParams& g,
                    const WeightGen& wg) {
  CloneSplit s;
  s.n = n;
  s.weights = gen_weights(wg, n);
  s.effective_f = comm_at_n > g.f * proc_area * (1.0 + kRelTol) ? comm_at_n / proc_area : g.f;
  return s;
}

}  // namespace

void GranularityParams::validate() const {
  if (f < 0.0) throw SchedError("granularity: f must be non-negative");
  if (lambda <= 0.0 || lambda > 1.0) throw SchedError("granularity: lambda must be in (0,1]");
}

std::vector<double> uniform_weights(int n) {
  if (n < 1) throw SchedError("clone count must be at least 1");
  return std::vector<double>(n, 1.0 / double(n));
}

double processing_area(const OperatorCost& oc) {
  return std::accumulate(oc.base_work.c.begin(), oc.base_work.c.end(), 0.0);
}

double communication_area(const OperatorCost& oc, int n, const HardwareParams& hw) {
  if (n < 1) throw SchedError(oc.op_id + ": clone count must be at least 1");
  return hw.startup_alpha_ms * n + hw.net_beta_ms_per_byte * oc.bytes_out;
}

double max_mem(const OperatorCost& oc, int n, const WeightGen& wg) {
  std::vector<double> w = gen_weights(wg, n);
  return *std::max_element(w.begin(), w.end()) * length(oc.total_demand);
}

CloneSplit max_degree(const OperatorCost& oc, const GranularityParams& g,
                      const HardwareParams& hw, int p_sites, const WeightGen& wg) {
  g.validate();
  hw.validate();
  if (p_sites < 1) throw SchedError("max_degree: need at least one site");
  double proc = processing_area(oc);
  if (proc <= 0.0) throw SchedError(oc.op_id + ": processing area must be positive");
  int n = std::max(comm_degree(proc, oc.bytes_out, g, hw, 1, p_sites),
                   memory_degree(oc, g, wg, p_sites));
  return assemble(proc, communication_area(oc, n, hw), n, g, wg);
}

CloneSplit paired_degree(const OperatorCost& parent, const OperatorCost& child,
                         const GranularityParams& g, const HardwareParams& hw,
                         int p_sites, const WeightGen& wg) {
  g.validate();
  hw.validate();
  if (p_sites < 1) throw SchedError("paired_degree: need at least one site");
  double proc = processing_area(parent) + processing_area(child);
  if (proc <= 0.0) throw SchedError(parent.op_id + ": processing area must be positive");
  double bytes = parent.bytes_out + child.bytes_out;
  int n = comm_degree(proc, bytes, g, hw, 2, p_sites);
  n = std::max(n, memory_degree(child, g, wg, p_sites));
  n = std::max(n, memory_degree(parent, g, wg, p_sites));
  double comm = communication_area(parent, n, hw) + communication_area(child, n, hw);
  CloneSplit s = assemble(proc, comm, n, g, wg);
  return s;
}

std::vector<Clone> split_clones(const OperatorCost& oc, const CloneSplit& split,
                                const GranularityParams& g, const HardwareParams& hw,
                                double epsilon) {
  if (split.n < 1 || int(split.weights.size()) != split.n)
    throw SchedError(oc.op_id + ": malformed clone split");
  double sum = std::accumulate(split.weights.begin(), split.weights.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-9) throw SchedError(oc.op_id + ": clone weights must sum to 1");

  std::size_t d = oc.base_work.dim();
  std::size_t cpu = 0, net = d - 1;
  double ship = hw.net_beta_ms_per_byte * oc.bytes_out;
  double startup = hw.startup_alpha_ms * split.n;

  std::vector<Clone> clones;
  clones.reserve(split.n);
  for (int i = 0; i < split.n; ++i) {
    double w = split.weights[i];
    Clone c;
    c.op = oc.op_id;
    c.index = i;
    std::vector<double> work(d);
    for (std::size_t k = 0; k < d; ++k) work[k] = w * oc.base_work.c[k];
    work[net] += w * ship;
    if (i == 0) {
      work[cpu] += startup / 2.0;
      work[net] += startup / 2.0;
    }
    c.work = WorkVector(std::move(work));
    std::vector<double> dem(oc.total_demand.dim());
    for (std::size_t k = 0; k < dem.size(); ++k) dem[k] = w * oc.total_demand.c[k];
    c.demand = DemandVector(std::move(dem));
    double grain = length(c.demand);
    if (grain > 1.0 + kCapacityTol)
      throw InfeasibleError(oc.op_id, oc.op_id + ": clone demand exceeds a full site");
    if (grain > g.lambda * (1.0 + kRelTol) + kCapacityTol)
      throw InfeasibleError(oc.op_id, oc.op_id + ": clone demand breaks the memory granularity bound");
    c.seq_ms = seq_time_op(c.work, epsilon);
    clones.push_back(std::move(c));
  }
  return clones;
}

}  // namespace mrsched
