#pragma once

#include "mrsched/cost_model.hpp"
#include "mrsched/granularity.hpp"

namespace mrsched {

// System-wide knobs: the machine (P sites, d time-shared and s space-shared
// resource dimensions), the execution-time blend epsilon, and the
// granularity parameters steering parallelization.
struct SystemConfig {
  int sites = 10;
  int tsr_dims = 3;
  int ssr_dims = 1;
  double epsilon = 0.5;
  GranularityParams grain;
  HardwareParams hw;

  void validate() const;
};

}  // namespace mrsched
