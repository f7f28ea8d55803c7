#include "mrsched/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace mrsched {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Cheapest division of one site's clones into capacity-respecting shelves,
// by subset dynamic programming over at most 2^n states.
double best_stack(const std::vector<const Clone*>& cs) {
  const int n = int(cs.size());
  if (n == 0) return 0.0;
  const int full = (1 << n) - 1;

  std::vector<double> subset_time(std::size_t(full) + 1, kInf);
  for (int m = 1; m <= full; ++m) {
    std::vector<double> v, w;
    double max_seq = 0.0;
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      if (!(m & (1 << i))) continue;
      const Clone& c = *cs[std::size_t(i)];
      if (v.size() < c.demand.dim()) v.resize(c.demand.dim(), 0.0);
      for (std::size_t k = 0; k < c.demand.dim(); ++k) {
        v[k] += c.demand[k];
        if (v[k] > 1.0 + kCapacityTol) ok = false;
      }
      if (w.size() < c.work.dim()) w.resize(c.work.dim(), 0.0);
      for (std::size_t k = 0; k < c.work.dim(); ++k) w[k] += c.work[k];
      max_seq = std::max(max_seq, c.seq_ms);
    }
    if (ok) subset_time[std::size_t(m)] = std::max(max_seq, vector_length(w));
  }

  std::vector<double> best(std::size_t(full) + 1, kInf);
  best[0] = 0.0;
  for (int m = 1; m <= full; ++m) {
    int low = m & -m;  // the lowest clone always sits in some shelf
    for (int sub = m; sub; sub = (sub - 1) & m) {
      if (!(sub & low)) continue;
      if (subset_time[std::size_t(sub)] == kInf) continue;
      double rest = best[std::size_t(m ^ sub)];
      if (rest == kInf) continue;
      best[std::size_t(m)] = std::min(best[std::size_t(m)], rest + subset_time[std::size_t(sub)]);
    }
  }
  return best[std::size_t(full)];
}

void check_common(std::size_t n_clones, int p, const OracleLimits& lim) {
  if (p < 1) throw SchedError("oracle: need at least one site");
  if (int(n_clones) > lim.max_clones)
    throw SchedError("oracle: instance too large (" + std::to_string(n_clones) + " clones, cap " +
                     std::to_string(lim.max_clones) + ")");
  if (p > lim.max_sites)
    throw SchedError("oracle: instance too large (" + std::to_string(p) + " sites, cap " +
                     std::to_string(lim.max_sites) + ")");
}

// Enumerates clone-to-site assignments in canonical form (a clone may only
// open the next unused site) and reports the best value of `eval` over the
// per-site clone sets.
double best_assignment(const std::vector<const Clone*>& cs, int p,
                       const std::function<double(const std::vector<std::vector<const Clone*>>&)>&
                           eval) {
  std::vector<std::vector<const Clone*>> sites(static_cast<std::size_t>(p));
  double best = kInf;
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int used) {
    if (i == cs.size()) {
      best = std::min(best, eval(sites));
      return;
    }
    int open = std::min(used + 1, p);
    for (int s = 0; s < open; ++s) {
      sites[std::size_t(s)].push_back(cs[i]);
      rec(i + 1, std::max(used, s + 1));
      sites[std::size_t(s)].pop_back();
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace

double oracle_opt(const std::vector<Clone>& clones, int p, const OracleLimits& lim) {
  check_common(clones.size(), p, lim);
  std::vector<const Clone*> cs;
  for (const auto& c : clones) {
    if (length(c.demand) > 1.0 + kCapacityTol)
      throw InfeasibleError(c.op, "clone " + c.op + " demands more than one site");
    cs.push_back(&c);
  }
  if (cs.empty()) return 0.0;

  double best = best_assignment(cs, p, [](const std::vector<std::vector<const Clone*>>& sites) {
    double worst = 0.0;
    for (const auto& site : sites) worst = std::max(worst, best_stack(site));
    return worst;
  });
  return best;
}

double oracle_opt(const std::vector<Pipeline>& pipes, int p, const OracleLimits& lim) {
  std::size_t n_clones = 0;
  for (const auto& pipe : pipes) n_clones += pipe.clones.size();
  check_common(n_clones, p, lim);
  if (int(pipes.size()) > lim.max_levels)
    throw SchedError("oracle: instance too large (" + std::to_string(pipes.size()) +
                     " pipelines, cap " + std::to_string(lim.max_levels) + " levels)");
  if (pipes.empty()) return 0.0;

  // Cheapest single-level placement of a set of pipelines: all clones are
  // co-resident, the level lasts as long as the slowest site.
  auto level_cost = [&](const std::vector<const Pipeline*>& group) {
    std::vector<const Clone*> cs;
    for (const Pipeline* pipe : group)
      for (const auto& c : pipe->clones) cs.push_back(&c);
    return best_assignment(cs, p, [](const std::vector<std::vector<const Clone*>>& sites) {
      double worst = 0.0;
      for (const auto& site : sites) {
        std::vector<double> v, w;
        double max_seq = 0.0;
        for (const Clone* c : site) {
          if (v.size() < c->demand.dim()) v.resize(c->demand.dim(), 0.0);
          for (std::size_t k = 0; k < c->demand.dim(); ++k) {
            v[k] += c->demand[k];
            if (v[k] > 1.0 + kCapacityTol) return kInf;
          }
          if (w.size() < c->work.dim()) w.resize(c->work.dim(), 0.0);
          for (std::size_t k = 0; k < c->work.dim(); ++k) w[k] += c->work[k];
          max_seq = std::max(max_seq, c->seq_ms);
        }
        worst = std::max(worst, std::max(max_seq, vector_length(w)));
      }
      return worst;
    });
  };

  // Enumerate partitions of the pipelines into at most max_levels unlabeled
  // groups (canonical: a pipeline may only open the next group).
  const int n = int(pipes.size());
  std::vector<std::vector<const Pipeline*>> groups;
  double best = kInf;
  std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      double total = 0.0;
      for (const auto& g : groups) {
        double c = level_cost(g);
        if (c == kInf) return;
        total += c;
      }
      best = std::min(best, total);
      return;
    }
    for (std::size_t g = 0; g < groups.size(); ++g) {
      groups[g].push_back(&pipes[std::size_t(i)]);
      rec(i + 1);
      groups[g].pop_back();
    }
    if (int(groups.size()) < lim.max_levels) {
      groups.push_back({&pipes[std::size_t(i)]});
      rec(i + 1);
      groups.pop_back();
    }
  };
  rec(0);
  if (best == kInf)
    throw InfeasibleError("instance", "oracle: no feasible schedule within the limits");
  return best;
}

}  // namespace mrsched
