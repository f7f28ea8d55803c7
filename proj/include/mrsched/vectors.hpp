#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mrsched {

// Absolute tolerance used when checking space-shared capacity constraints.
inline constexpr double kCapacityTol = 1e-9;

struct SchedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when an operator, clone, or query cannot be placed within the
// resource limits of the configured system.  `subject` names the offender.
struct InfeasibleError : SchedError {
  std::string subject;
  InfeasibleError(std::string subj, const std::string& msg)
      : SchedError(msg), subject(std::move(subj)) {}
};

// Effective-use times on the time-shared resources of a site (ms per
// dimension).  Work can be stretched: running against other clones slows
// an operator down but never changes the totals recorded here.
struct WorkVector {
  std::vector<double> c;

  WorkVector() = default;
  explicit WorkVector(std::vector<double> v) : c(std::move(v)) {}
  std::size_t dim() const { return c.size(); }
  double operator[](std::size_t i) const { return c[i]; }
};

// Normalized reservations on the space-shared resources of a site.  Each
// component lies in [0, 1] where 1 means the full capacity of one site.
// Unlike work, these cannot be stretched over time.
struct DemandVector {
  std::vector<double> c;

  DemandVector() = default;
  explicit DemandVector(std::vector<double> v) : c(std::move(v)) {}
  std::size_t dim() const { return c.size(); }
  double operator[](std::size_t i) const { return c[i]; }
};

// Demand integrated over time (ms * normalized capacity).
struct VolumeVector {
  std::vector<double> c;

  VolumeVector() = default;
  explicit VolumeVector(std::vector<double> v) : c(std::move(v)) {}
  std::size_t dim() const { return c.size(); }
  double operator[](std::size_t i) const { return c[i]; }
};

// One parallel instance of an operator.  `site` pins the clone to a fixed
// site (rooted execution); unset means the scheduler may place it anywhere.
struct Clone {
  int id = -1;
  std::string op;
  int index = 0;
  WorkVector work;
  DemandVector demand;
  double seq_ms = 0.0;
  std::optional<int> site;
};

// Stand-alone execution time of one operator on one site: a blend of the
// bottleneck resource and the total work, epsilon in [0, 1] steering
// between full overlap (1) and strictly serial resource use (0).
double seq_time_op(const WorkVector& w, double epsilon);

// Max component; empty vectors and empty sets have length 0.
double vector_length(std::span<const double> v);

std::vector<double> component_sum(std::span<const std::vector<double>> vs);

inline double length(const WorkVector& w) { return vector_length(w.c); }
inline double length(const DemandVector& d) { return vector_length(d.c); }
inline double length(const VolumeVector& v) { return vector_length(v.c); }

// Length of the componentwise sum of a set of vectors.
template <class V>
double set_length(std::span<const V> vs) {
  if (vs.empty()) return 0.0;
  std::vector<double> acc(vs.front().c.size(), 0.0);
  for (const auto& v : vs) {
    if (v.c.size() != acc.size()) throw SchedError("set_length: dimension mismatch");
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += v.c[i];
  }
  return vector_length(acc);
}

VolumeVector volume(const Clone& c);

// True when the clones can be co-resident on one site: the summed demand
// fits within the site's normalized capacity in every dimension.
bool is_compatible(std::span<const Clone> clones);

// Execution time of a compatible set co-scheduled on one site:
// max(slowest stand-alone clone, length of the summed work).
// Rejects incompatible sets.  Empty set: 0.
double subset_exec_time(std::span<const Clone> clones);

void validate_work(const WorkVector& w);
void validate_demand(const DemandVector& d);

}  // namespace mrsched
