#pragma once

#include <map>
#include <string>
#include <vector>

#include "mrsched/plan.hpp"

namespace mrsched {

// How a schedule's levels share the machine over time.
//  - PerSiteShelves: each site works through its own stack of shelves back to
//    back, with no cross-site barriers; level k holds shelf k of every site
//    and the response is the busiest site's total.
//  - SyncedLevels: levels are machine-wide barriers executed in order; the
//    response is the sum of level heights (plus any admission idle time).
enum class ScheduleMode { PerSiteShelves, SyncedLevels };

struct ScheduleLevel {
  std::vector<int> groups;                  // pipeline/unit ids in this level
  std::vector<std::pair<int, int>> places;  // (clone id, site), sorted by clone
  double height_ms = 0.0;                   // max site subset time in the level
  double start_ms = 0.0;                    // level start (synced modes only)
};

struct Schedule {
  ScheduleMode mode = ScheduleMode::SyncedLevels;
  std::vector<ScheduleLevel> levels;
  double response_ms = 0.0;
  std::string algo;
  std::map<std::string, double> params;

  // Site a clone was placed on, or -1 if it never appears.
  int site_of(int clone) const;
};

}  // namespace mrsched
