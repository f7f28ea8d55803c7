#include "mrsched/serialize.hpp"

#include <charconv>
#include <cstddef>
#include <string>

namespace mrsched {

std::string shortest_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, end);
}

namespace {

template <class T>
void patch(const ordered_json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

}  // namespace

const char* mode_name(ScheduleMode m) {
  return m == ScheduleMode::PerSiteShelves ? "per_site_shelves" : "synced_levels";
}

ScheduleMode mode_from_name(const std::string& name) {
  if (name == "per_site_shelves") return ScheduleMode::PerSiteShelves;
  if (name == "synced_levels") return ScheduleMode::SyncedLevels;
  throw SchedError("unknown schedule mode: " + name);
}

void to_json(ordered_json& j, const WorkloadSpec& s) {
  j = ordered_json{{"seed", s.seed},
                   {"shape", shape_name(s.shape)},
                   {"mix", ordered_json::array()},
                   {"min_tuples", s.min_tuples},
                   {"max_tuples", s.max_tuples},
                   {"page_tuples", s.page_tuples}};
  for (const QueryMix& m : s.mix)
    j["mix"].push_back(ordered_json{{"queries", m.queries}, {"joins", m.joins}});
}

void from_json(const ordered_json& j, WorkloadSpec& s) {
  patch(j, "seed", s.seed);
  if (j.contains("shape")) s.shape = shape_from_name(j.at("shape").get<std::string>());
  if (j.contains("mix")) {
    s.mix.clear();
    for (const auto& m : j.at("mix"))
      s.mix.push_back({m.at("queries").get<int>(), m.at("joins").get<int>()});
  }
  patch(j, "min_tuples", s.min_tuples);
  patch(j, "max_tuples", s.max_tuples);
  patch(j, "page_tuples", s.page_tuples);
}

namespace {

ordered_json plan_to_json(const Plan& p) {
  ordered_json nodes = ordered_json::array();
  for (const PlanNode& n : p.nodes) {
    ordered_json jn{{"id", n.id}};
    if (n.is_leaf())
      jn["relation"] = n.relation;
    else {
      jn["left"] = n.left;
      jn["right"] = n.right;
    }
    nodes.push_back(std::move(jn));
  }
  return ordered_json{{"root", p.root}, {"nodes", std::move(nodes)}};
}

Plan plan_from_json(const ordered_json& j) {
  Plan p;
  p.root = j.at("root").get<int>();
  for (const auto& jn : j.at("nodes")) {
    PlanNode n;
    n.id = jn.at("id").get<int>();
    if (jn.contains("relation"))
      n.relation = jn.at("relation").get<std::string>();
    else {
      n.left = jn.at("left").get<int>();
      n.right = jn.at("right").get<int>();
    }
    p.nodes.push_back(std::move(n));
  }
  return p;
}

}  // namespace

void to_json(ordered_json& j, const Workload& w) {
  j = ordered_json{{"spec", w.spec}, {"catalog", ordered_json::array()},
                   {"plans", ordered_json::array()}};
  for (const RelationStats& r : w.catalog.relations) {
    ordered_json jr{{"name", r.name}, {"tuples", r.tuples}, {"pages", r.pages}};
    auto it = w.catalog.home_sites.find(r.name);
    if (it != w.catalog.home_sites.end()) jr["homes"] = it->second;
    j["catalog"].push_back(std::move(jr));
  }
  for (const Plan& p : w.plans) j["plans"].push_back(plan_to_json(p));
}

void from_json(const ordered_json& j, Workload& w) {
  w.spec = j.at("spec").get<WorkloadSpec>();
  w.catalog = Catalog{};
  for (const auto& jr : j.at("catalog")) {
    RelationStats r;
    r.name = jr.at("name").get<std::string>();
    r.tuples = jr.at("tuples").get<long long>();
    r.pages = jr.at("pages").get<long long>();
    if (jr.contains("homes"))
      w.catalog.home_sites[r.name] = jr.at("homes").get<std::vector<int>>();
    w.catalog.relations.push_back(std::move(r));
  }
  w.plans.clear();
  for (const auto& jp : j.at("plans")) w.plans.push_back(plan_from_json(jp));
}

void to_json(ordered_json& j, const Clone& c) {
  j = ordered_json{{"id", c.id},       {"op", c.op},
                   {"index", c.index}, {"work", c.work.c},
                   {"demand", c.demand.c}, {"seq_ms", c.seq_ms}};
  if (c.site) j["site"] = *c.site;
}

void from_json(const ordered_json& j, Clone& c) {
  c.id = j.at("id").get<int>();
  c.op = j.at("op").get<std::string>();
  c.index = j.at("index").get<int>();
  c.work = WorkVector(j.at("work").get<std::vector<double>>());
  c.demand = DemandVector(j.at("demand").get<std::vector<double>>());
  c.seq_ms = j.at("seq_ms").get<double>();
  if (j.contains("site"))
    c.site = j.at("site").get<int>();
  else
    c.site.reset();
}

void to_json(ordered_json& j, const Pipeline& p) {
  j = ordered_json{{"id", p.id}, {"t_max", p.t_max}, {"clones", p.clones}};
}

void from_json(const ordered_json& j, Pipeline& p) {
  p.id = j.at("id").get<int>();
  p.t_max = j.at("t_max").get<double>();
  p.clones = j.at("clones").get<std::vector<Clone>>();
}

void to_json(ordered_json& j, const TaskEdge& e) {
  j = ordered_json{{"child", e.child},
                   {"parent", e.parent},
                   {"kind", e.kind == EdgeKind::MemMat ? "mem" : "disk"},
                   {"producer", e.producer_op},
                   {"consumer", e.consumer_op}};
}

void from_json(const ordered_json& j, TaskEdge& e) {
  e.child = j.at("child").get<int>();
  e.parent = j.at("parent").get<int>();
  std::string kind = j.at("kind").get<std::string>();
  if (kind != "mem" && kind != "disk") throw SchedError("unknown edge kind: " + kind);
  e.kind = kind == "mem" ? EdgeKind::MemMat : EdgeKind::DiskMat;
  e.producer_op = j.at("producer").get<std::string>();
  e.consumer_op = j.at("consumer").get<std::string>();
}

void to_json(ordered_json& j, const Instance& inst) {
  j = ordered_json{{"groups", inst.groups}, {"edges", inst.edges}};
}

void from_json(const ordered_json& j, Instance& inst) {
  inst.groups = j.at("groups").get<std::vector<Pipeline>>();
  inst.edges = j.at("edges").get<std::vector<TaskEdge>>();
}

void to_json(ordered_json& j, const ScheduleLevel& l) {
  ordered_json places = ordered_json::array();
  for (const auto& [clone, site] : l.places)
    places.push_back(ordered_json::array({clone, site}));
  j = ordered_json{{"groups", l.groups},
                   {"places", std::move(places)},
                   {"height_ms", l.height_ms},
                   {"start_ms", l.start_ms}};
}

void from_json(const ordered_json& j, ScheduleLevel& l) {
  l.groups = j.at("groups").get<std::vector<int>>();
  l.places.clear();
  for (const auto& pr : j.at("places"))
    l.places.emplace_back(pr.at(0).get<int>(), pr.at(1).get<int>());
  l.height_ms = j.at("height_ms").get<double>();
  l.start_ms = j.at("start_ms").get<double>();
}

void to_json(ordered_json& j, const Schedule& s) {
  j = ordered_json{{"algo", s.algo},
                   {"mode", mode_name(s.mode)},
                   {"params", ordered_json::object()},
                   {"response_ms", s.response_ms},
                   {"levels", s.levels}};
  for (const auto& [k, v] : s.params) j["params"][k] = v;
}

void from_json(const ordered_json& j, Schedule& s) {
  s.algo = j.at("algo").get<std::string>();
  s.mode = mode_from_name(j.at("mode").get<std::string>());
  s.params.clear();
  for (const auto& [k, v] : j.at("params").items()) s.params[k] = v.get<double>();
  s.response_ms = j.at("response_ms").get<double>();
  s.levels = j.at("levels").get<std::vector<ScheduleLevel>>();
}

void to_json(ordered_json& j, const BoundsReport& r) {
  j = ordered_json{{"t_max", r.t_max},
                   {"avg_work", r.avg_work},
                   {"avg_volume", r.avg_volume},
                   {"crit_path", nullptr},
                   {"lb", r.lb},
                   {"dominant_term", r.dominant_term}};
  if (r.crit_path) j["crit_path"] = *r.crit_path;
}

void to_json(ordered_json& j, const ExecutionTrace& t) {
  ordered_json levels = ordered_json::array();
  for (std::size_t i = 0; i < t.level_start_ms.size(); ++i)
    levels.push_back(ordered_json{{"level", i},
                                  {"start_ms", t.level_start_ms[i]},
                                  {"end_ms", t.level_end_ms[i]}});
  ordered_json sites = ordered_json::array();
  for (const SiteLevelUse& u : t.use)
    sites.push_back(ordered_json{{"level", u.level},
                                 {"site", u.site},
                                 {"duration_ms", u.duration_ms},
                                 {"busy_ms", u.busy_ms},
                                 {"peak_demand", u.peak_demand}});
  ordered_json completions = ordered_json::object();
  for (const auto& [group, ms] : t.group_completion_ms)
    completions[std::to_string(group)] = ms;
  j = ordered_json{{"total_ms", t.total_ms},
                   {"levels", std::move(levels)},
                   {"sites", std::move(sites)},
                   {"completions", std::move(completions)}};
}

void to_json(ordered_json& j, const SystemConfig& cfg) {
  j = ordered_json{
      {"sites", cfg.sites},
      {"tsr_dims", cfg.tsr_dims},
      {"ssr_dims", cfg.ssr_dims},
      {"epsilon", cfg.epsilon},
      {"grain", ordered_json{{"f", cfg.grain.f}, {"lambda", cfg.grain.lambda}}},
      {"hw",
       ordered_json{{"mips", cfg.hw.mips},
                    {"disk_ms_per_page", cfg.hw.disk_ms_per_page},
                    {"page_tuples", cfg.hw.page_tuples},
                    {"tuple_bytes", cfg.hw.tuple_bytes},
                    {"mem_pages_per_site", cfg.hw.mem_pages_per_site},
                    {"startup_alpha_ms", cfg.hw.startup_alpha_ms},
                    {"net_beta_ms_per_byte", cfg.hw.net_beta_ms_per_byte},
                    {"fudge_factor", cfg.hw.fudge_factor},
                    {"instr",
                     ordered_json{{"read_page", cfg.hw.instr.read_page},
                                  {"write_page", cfg.hw.instr.write_page},
                                  {"extract_tuple", cfg.hw.instr.extract_tuple},
                                  {"hash_tuple", cfg.hw.instr.hash_tuple},
                                  {"probe_hash", cfg.hw.instr.probe_hash}}}}}};
}

void apply_config_json(const ordered_json& j, SystemConfig& cfg) {
  patch(j, "sites", cfg.sites);
  patch(j, "tsr_dims", cfg.tsr_dims);
  patch(j, "ssr_dims", cfg.ssr_dims);
  patch(j, "epsilon", cfg.epsilon);
  if (j.contains("grain")) {
    const auto& g = j.at("grain");
    patch(g, "f", cfg.grain.f);
    patch(g, "lambda", cfg.grain.lambda);
  }
  if (j.contains("hw")) {
    const auto& h = j.at("hw");
    patch(h, "mips", cfg.hw.mips);
    patch(h, "disk_ms_per_page", cfg.hw.disk_ms_per_page);
    patch(h, "page_tuples", cfg.hw.page_tuples);
    patch(h, "tuple_bytes", cfg.hw.tuple_bytes);
    patch(h, "mem_pages_per_site", cfg.hw.mem_pages_per_site);
    patch(h, "startup_alpha_ms", cfg.hw.startup_alpha_ms);
    patch(h, "net_beta_ms_per_byte", cfg.hw.net_beta_ms_per_byte);
    patch(h, "fudge_factor", cfg.hw.fudge_factor);
    if (h.contains("instr")) {
      const auto& i = h.at("instr");
      patch(i, "read_page", cfg.hw.instr.read_page);
      patch(i, "write_page", cfg.hw.instr.write_page);
      patch(i, "extract_tuple", cfg.hw.instr.extract_tuple);
      patch(i, "hash_tuple", cfg.hw.instr.hash_tuple);
      patch(i, "probe_hash", cfg.hw.instr.probe_hash);
    }
  }
}

std::string utilization_csv(const ExecutionTrace& t) {
  std::size_t d = t.use.empty() ? 0 : t.use.front().busy_ms.size();
  std::size_t s = t.use.empty() ? 0 : t.use.front().peak_demand.size();

  std::string out = "level,site,start_ms,end_ms,duration_ms";
  for (std::size_t k = 0; k < d; ++k) {
    out += ",busy_" + std::to_string(k) + "_ms";
    out += ",util_" + std::to_string(k);
  }
  for (std::size_t k = 0; k < s; ++k) out += ",peak_" + std::to_string(k);
  out += "\n";

  for (const SiteLevelUse& u : t.use) {
    std::size_t l = std::size_t(u.level);
    out += std::to_string(u.level) + "," + std::to_string(u.site) + "," +
           shortest_double(l < t.level_start_ms.size() ? t.level_start_ms[l] : 0.0) + "," +
           shortest_double(l < t.level_end_ms.size() ? t.level_end_ms[l] : 0.0) + "," +
           shortest_double(u.duration_ms);
    for (std::size_t k = 0; k < d; ++k) {
      double busy = k < u.busy_ms.size() ? u.busy_ms[k] : 0.0;
      out += "," + shortest_double(busy);
      out += "," + shortest_double(u.duration_ms > 0.0 ? busy / u.duration_ms : 0.0);
    }
    for (std::size_t k = 0; k < s; ++k)
      out += "," + shortest_double(k < u.peak_demand.size() ? u.peak_demand[k] : 0.0);
    out += "\n";
  }
  return out;
}

}  // namespace mrsched
