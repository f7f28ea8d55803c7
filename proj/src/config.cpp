#include "mrsched/config.hpp"

namespace mrsched {

void SystemConfig::validate() const {
  if (sites < 1) throw SchedError("config: need at least one site");
  if (tsr_dims < 1 || ssr_dims < 1) throw SchedError("config: need at least one resource per class");
  if (epsilon < 0.0 || epsilon > 1.0) throw SchedError("config: epsilon outside [0,1]");
  grain.validate();
  hw.validate();
}

}  // namespace mrsched
