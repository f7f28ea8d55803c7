#pragma once

#include <json.hpp>

#include "mrsched/bounds.hpp"
#include "mrsched/config.hpp"
#include "mrsched/simexec.hpp"
#include "mrsched/workload.hpp"

// JSON round-trips for every artifact the CLI reads or writes.  All
// serialization goes through nlohmann::ordered_json so files keep a stable
// key order and identical inputs produce byte-identical outputs.  Doubles
// print in shortest-round-trip form, so values survive a save/load cycle
// exactly.

namespace mrsched {

using ordered_json = nlohmann::ordered_json;

const char* mode_name(ScheduleMode m);
ScheduleMode mode_from_name(const std::string& name);

// Workloads: {"spec": {...}, "catalog": [{"name", "tuples", "pages",
// "homes"?}], "plans": [{"root", "nodes": [...]}]}.  Leaf nodes carry
// "relation"; join nodes carry "left"/"right".
void to_json(ordered_json& j, const WorkloadSpec& s);
void from_json(const ordered_json& j, WorkloadSpec& s);
void to_json(ordered_json& j, const Workload& w);
void from_json(const ordered_json& j, Workload& w);

// Clones serialize work/demand as plain arrays; an absent "site" means the
// clone floats.
void to_json(ordered_json& j, const Clone& c);
void from_json(const ordered_json& j, Clone& c);
void to_json(ordered_json& j, const Pipeline& p);
void from_json(const ordered_json& j, Pipeline& p);
void to_json(ordered_json& j, const TaskEdge& e);
void from_json(const ordered_json& j, TaskEdge& e);
void to_json(ordered_json& j, const Instance& inst);
void from_json(const ordered_json& j, Instance& inst);

void to_json(ordered_json& j, const ScheduleLevel& l);
void from_json(const ordered_json& j, ScheduleLevel& l);
void to_json(ordered_json& j, const Schedule& s);
void from_json(const ordered_json& j, Schedule& s);

void to_json(ordered_json& j, const BoundsReport& r);
void to_json(ordered_json& j, const ExecutionTrace& t);

// Full system configuration, including the hardware model.
void to_json(ordered_json& j, const SystemConfig& cfg);

// Overwrites only the fields present in `j`, leaving the rest of `cfg`
// untouched, so a config file may state just the knobs it changes.
void apply_config_json(const ordered_json& j, SystemConfig& cfg);

// Per-site utilization table for plotting: one row per (level, site) with
// the busy time and utilization of each time-shared dimension and the peak
// reservation of each space-shared dimension.
std::string utilization_csv(const ExecutionTrace& t);

// Shortest decimal form that parses back to exactly the same double; used
// for every number in CSV output so files are byte-stable.
std::string shortest_double(double v);

}  // namespace mrsched
