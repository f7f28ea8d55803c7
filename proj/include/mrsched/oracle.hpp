#pragma once

#include "mrsched/plan.hpp"

namespace mrsched {

// Hard caps keeping the exhaustive search tractable; exceeding them is an
// error rather than a silent approximation.
struct OracleLimits {
  int max_clones = 8;
  int max_sites = 3;
  int max_levels = 3;
};

// Exact minimum response time for independent clones: every assignment of
// clones to (interchangeable) sites is enumerated in canonical form, and each
// site's clones are optimally stacked into compatible shelves by dynamic
// programming.  The response is the busiest site's stack.
double oracle_opt(const std::vector<Clone>& clones, int p, const OracleLimits& lim = {});

// Exact minimum total height for co-scheduled pipelines: pipelines are
// partitioned into synchronized levels (each pipeline whole), every level's
// clone-to-site assignment is enumerated, and the cheapest partition wins.
double oracle_opt(const std::vector<Pipeline>& pipes, int p, const OracleLimits& lim = {});

}  // namespace mrsched
