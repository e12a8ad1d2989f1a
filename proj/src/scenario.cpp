#include "cotorra/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "cotorra/error.hpp"

namespace cotorra {

using nlohmann::json;

TimeMs ScenarioConfig::duration_ms() const { return static_cast<TimeMs>(std::llround(duration_s * 1000.0)); }

std::uint64_t ScenarioConfig::tick_count() const {
  return static_cast<std::uint64_t>(duration_ms() / tick_ms);
}

std::vector<std::string> available_plugins() { return {"federation", "orchestrator", "soa"}; }

json read_scenario_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read " + path.string());
  try {
    return json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

void apply_override(json& document, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(ErrorCode::ValidationError, "override must be key=value: " + assignment);
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }

  json* node = &document;
  std::stringstream segments(key);
  std::string segment;
  std::vector<std::string> parts;
  while (std::getline(segments, segment, '.')) parts.push_back(segment);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::string& part = parts[i];
    if (part.empty()) throw Error(ErrorCode::ValidationError, "empty key segment in " + key);
    if (node->is_array()) {
      std::size_t index = 0;
      try {
        index = std::stoul(part);
      } catch (const std::exception&) {
        throw Error(ErrorCode::ValidationError, key + ": '" + part + "' is not an array index");
      }
      if (index >= node->size()) throw Error(ErrorCode::ValidationError, key + ": index out of range");
      node = &(*node)[index];
    } else {
      if (!node->is_object() && !node->is_null()) {
        throw Error(ErrorCode::ValidationError, key + ": cannot descend into a scalar");
      }
      node = &(*node)[part];
    }
  }
  *node = std::move(value);
}

namespace {

class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("expected an object");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ValidationError, (path_.empty() ? std::string("<root>") : path_) + ": " + what);
  }

  std::string field(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  bool has(std::string_view key) const { return j_.contains(key); }

  void only(std::initializer_list<std::string_view> allowed) const {
    for (const auto& [k, v] : j_.items()) {
      bool ok = false;
      for (auto a : allowed) ok = ok || k == a;
      if (!ok) throw Error(ErrorCode::ValidationError, field(k) + ": unknown key");
    }
  }

  const json& raw(std::string_view key) const {
    if (!j_.contains(key)) throw Error(ErrorCode::ValidationError, field(key) + ": missing");
    return j_.at(std::string(key));
  }

  double number(std::string_view key) const {
    const json& v = raw(key);
    if (!v.is_number()) throw Error(ErrorCode::ValidationError, field(key) + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw Error(ErrorCode::ValidationError, field(key) + ": not finite");
    return d;
  }
  double number(std::string_view key, double fallback) const { return has(key) ? number(key) : fallback; }

  std::int64_t integer(std::string_view key) const {
    const json& v = raw(key);
    if (!v.is_number_integer()) throw Error(ErrorCode::ValidationError, field(key) + ": expected an integer");
    return v.get<std::int64_t>();
  }
  std::int64_t integer(std::string_view key, std::int64_t fallback) const {
    return has(key) ? integer(key) : fallback;
  }

  std::string string(std::string_view key) const {
    const json& v = raw(key);
    if (!v.is_string()) throw Error(ErrorCode::ValidationError, field(key) + ": expected a string");
    return v.get<std::string>();
  }
  std::string string(std::string_view key, std::string fallback) const {
    return has(key) ? string(key) : fallback;
  }

  const json& array(std::string_view key) const {
    const json& v = raw(key);
    if (!v.is_array()) throw Error(ErrorCode::ValidationError, field(key) + ": expected an array");
    return v;
  }

  Vec2 vec2(const json& v, const std::string& where) const {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw Error(ErrorCode::ValidationError, where + ": expected [x, y]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
  }

  Reader child(std::string_view key) const { return Reader(raw(key), field(key)); }

 private:
  const json& j_;
  std::string path_;
};

std::string indexed(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

void check_id(const std::string& id, const std::string& where) {
  if (id.empty()) throw Error(ErrorCode::ValidationError, where + ": empty id");
  if (id.find_first_of(",\"\n|;") != std::string::npos) {
    throw Error(ErrorCode::ValidationError, where + ": id contains a reserved character");
  }
}

}  // namespace

ScenarioConfig parse_scenario(const json& document) {
  const Reader root(document, "");
  root.only({"name", "seed", "tick_ms", "duration_s", "target_ms", "radio", "handover_ms", "deploy_ms", "nodes",
             "links", "robots", "placements", "virtual_links", "services", "plugins", "enabled_plugins"});

  ScenarioConfig cfg;
  cfg.name = root.string("name", "scenario");
  const std::int64_t seed = root.integer("seed", 1);
  if (seed < 0) root.fail("seed must be non-negative");
  cfg.seed = static_cast<std::uint64_t>(seed);
  cfg.tick_ms = root.integer("tick_ms", 100);
  if (cfg.tick_ms <= 0) throw Error(ErrorCode::ValidationError, "tick_ms: must be > 0");
  cfg.duration_s = root.number("duration_s", 120.0);
  if (!(cfg.duration_s > 0.0)) throw Error(ErrorCode::ValidationError, "duration_s: must be > 0");
  if (cfg.duration_ms() < cfg.tick_ms) throw Error(ErrorCode::ValidationError, "duration_s: shorter than one tick");
  cfg.target_ms = root.number("target_ms", 15.0);
  if (!(cfg.target_ms > 0.0)) throw Error(ErrorCode::ValidationError, "target_ms: must be > 0");

  if (root.has("radio")) {
    const Reader r = root.child("radio");
    r.only({"p0_dbm", "d0_m", "eta", "attach_threshold_dbm", "good_rssi_dbm", "wireless_min_ms", "wireless_max_ms",
            "wireless_mbps"});
    RadioModel& m = cfg.net.radio;
    m.p0_dbm = r.number("p0_dbm", m.p0_dbm);
    m.d0_m = r.number("d0_m", m.d0_m);
    m.eta = r.number("eta", m.eta);
    m.attach_threshold_dbm = r.number("attach_threshold_dbm", m.attach_threshold_dbm);
    m.good_rssi_dbm = r.number("good_rssi_dbm", m.good_rssi_dbm);
    m.wireless_min_ms = r.number("wireless_min_ms", m.wireless_min_ms);
    m.wireless_max_ms = r.number("wireless_max_ms", m.wireless_max_ms);
    m.wireless_mbps = r.number("wireless_mbps", m.wireless_mbps);
    if (!(m.d0_m > 0.0)) throw Error(ErrorCode::ValidationError, "radio.d0_m: must be > 0");
    if (!(m.eta > 0.0)) throw Error(ErrorCode::ValidationError, "radio.eta: must be > 0");
    if (!(m.good_rssi_dbm > m.attach_threshold_dbm)) {
      throw Error(ErrorCode::ValidationError, "radio.good_rssi_dbm: must exceed attach_threshold_dbm");
    }
    if (!(m.wireless_min_ms >= 0.0) || !(m.wireless_max_ms >= m.wireless_min_ms)) {
      throw Error(ErrorCode::ValidationError, "radio.wireless_max_ms: must be >= wireless_min_ms >= 0");
    }
    if (!(m.wireless_mbps >= 0.0)) throw Error(ErrorCode::ValidationError, "radio.wireless_mbps: must be >= 0");
  }
  cfg.net.handover_ms = root.integer("handover_ms", cfg.net.handover_ms);
  if (cfg.net.handover_ms < 0) throw Error(ErrorCode::ValidationError, "handover_ms: must be >= 0");
  if (root.has("deploy_ms")) {
    const json& d = root.raw("deploy_ms");
    if (!d.is_object()) throw Error(ErrorCode::ValidationError, "deploy_ms: expected an object");
    for (const auto& [k, v] : d.items()) {
      if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
        throw Error(ErrorCode::ValidationError, "deploy_ms." + k + ": expected a non-negative integer");
      }
      if (k == "default") {
        cfg.net.default_deploy_ms = v.get<TimeMs>();
      } else {
        cfg.net.deploy_ms[VnfId(k)] = v.get<TimeMs>();
      }
    }
  }

  std::map<NodeId, NodeKind> kinds;
  const json& nodes = root.array("nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Reader n(nodes[i], indexed("nodes", i));
    n.only({"id", "kind", "position", "proc_delay_ms", "domain"});
    NodeSpec spec;
    const std::string id = n.string("id");
    check_id(id, n.field("id"));
    spec.id = id;
    const auto kind = parse_node_kind(n.string("kind"));
    if (!kind) n.fail("kind must be RadioUnit, Switch or Server");
    if (*kind == NodeKind::Robot) n.fail("robots are declared under 'robots'");
    spec.attrs.kind = *kind;
    spec.attrs.position = n.has("position") ? n.vec2(n.raw("position"), n.field("position")) : Vec2{};
    spec.attrs.proc_delay_ms = n.number("proc_delay_ms", 0.0);
    if (spec.attrs.proc_delay_ms < 0.0) n.fail("proc_delay_ms must be >= 0");
    if (*kind != NodeKind::Server && spec.attrs.proc_delay_ms != 0.0) n.fail("proc_delay_ms only applies to servers");
    spec.attrs.domain = n.string("domain", "");
    if (!kinds.emplace(spec.id, *kind).second) {
      throw Error(ErrorCode::ValidationError, n.field("id") + ": duplicate id '" + id + "'");
    }
    cfg.nodes.push_back(std::move(spec));
  }

  if (root.has("robots")) {
    const json& robots = root.array("robots");
    for (std::size_t i = 0; i < robots.size(); ++i) {
      const Reader r(robots[i], indexed("robots", i));
      r.only({"id", "trajectory", "localization_sigma", "initial_ru", "domain"});
      RobotSpec spec;
      const std::string id = r.string("id");
      check_id(id, r.field("id"));
      spec.id = id;
      if (!kinds.emplace(spec.id, NodeKind::Robot).second) {
        throw Error(ErrorCode::ValidationError, r.field("id") + ": duplicate id '" + id + "'");
      }
      const Reader t = r.child("trajectory");
      t.only({"waypoints", "cruise_speed"});
      const json& wps = t.array("waypoints");
      for (std::size_t w = 0; w < wps.size(); ++w) {
        spec.trajectory.waypoints.push_back(t.vec2(wps[w], indexed(t.field("waypoints"), w)));
      }
      if (spec.trajectory.waypoints.size() < 2) t.fail("waypoints: need at least 2");
      for (std::size_t w = 1; w < spec.trajectory.waypoints.size(); ++w) {
        if (spec.trajectory.waypoints[w] == spec.trajectory.waypoints[w - 1]) {
          throw Error(ErrorCode::ValidationError, indexed(t.field("waypoints"), w) + ": repeats previous waypoint");
        }
      }
      spec.trajectory.cruise_speed = t.number("cruise_speed", 0.5);
      if (!(spec.trajectory.cruise_speed > 0.0)) t.fail("cruise_speed must be > 0");
      spec.localization.sigma = r.number("localization_sigma", 0.0);
      if (spec.localization.sigma < 0.0) r.fail("localization_sigma must be >= 0");
      if (r.has("initial_ru")) spec.initial_ru = NodeId(r.string("initial_ru"));
      spec.domain = r.string("domain", "");
      cfg.robots.push_back(std::move(spec));
    }
    for (std::size_t i = 0; i < cfg.robots.size(); ++i) {
      const auto& ru = cfg.robots[i].initial_ru;
      if (!ru) continue;
      const auto it = kinds.find(*ru);
      if (it == kinds.end() || it->second != NodeKind::RadioUnit) {
        throw Error(ErrorCode::ValidationError, indexed("robots", i) + ".initial_ru: '" + ru->str() +
                                                    "' is not a radio unit");
      }
    }
  }

  std::set<LinkKey> seen_links;
  const json& links = root.array("links");
  for (std::size_t i = 0; i < links.size(); ++i) {
    const Reader l(links[i], indexed("links", i));
    l.only({"a", "b", "d_ms", "lambda_mbps", "psi", "delta"});
    LinkSpec spec;
    spec.a = l.string("a");
    spec.b = l.string("b");
    for (const auto* end : {&spec.a, &spec.b}) {
      const auto it = kinds.find(*end);
      const char* key = end == &spec.a ? "a" : "b";
      if (it == kinds.end()) throw Error(ErrorCode::ValidationError, l.field(key) + ": unknown node '" + end->str() + "'");
      if (it->second == NodeKind::Robot) {
        throw Error(ErrorCode::ValidationError, l.field(key) + ": robots connect only through radio attachment");
      }
    }
    if (spec.a == spec.b) l.fail("self loop");
    if (!seen_links.emplace(spec.a, spec.b).second) l.fail("duplicate link");
    spec.metrics.d_ms = l.number("d_ms");
    spec.metrics.lambda_mbps = l.number("lambda_mbps");
    spec.metrics.psi = l.number("psi", 1.0);
    spec.metrics.delta = l.number("delta", 1.0);
    if (spec.metrics.d_ms < 0.0 || spec.metrics.lambda_mbps < 0.0) l.fail("d_ms and lambda_mbps must be >= 0");
    if (spec.metrics.psi < 1.0 || spec.metrics.delta < 1.0) l.fail("psi and delta must be >= 1");
    cfg.links.push_back(std::move(spec));
  }

  std::set<VnfId> vnfs;
  if (root.has("placements")) {
    const json& ps = root.array("placements");
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const Reader p(ps[i], indexed("placements", i));
      p.only({"vnf", "node"});
      PlacementSpec spec{VnfId(p.string("vnf")), NodeId(p.string("node"))};
      check_id(spec.vnf.str(), p.field("vnf"));
      const auto it = kinds.find(spec.node);
      if (it == kinds.end()) throw Error(ErrorCode::ValidationError, p.field("node") + ": unknown node '" + spec.node.str() + "'");
      if (it->second == NodeKind::Switch) throw Error(ErrorCode::ValidationError, p.field("node") + ": switches cannot host VNFs");
      if (!vnfs.insert(spec.vnf).second) throw Error(ErrorCode::ValidationError, p.field("vnf") + ": placed twice");
      cfg.placements.push_back(std::move(spec));
    }
  }
  if (root.has("virtual_links")) {
    const json& vls = root.array("virtual_links");
    for (std::size_t i = 0; i < vls.size(); ++i) {
      const Reader v(vls[i], indexed("virtual_links", i));
      v.only({"from", "to", "path"});
      VirtualLinkSpec spec{VnfId(v.string("from")), VnfId(v.string("to")), {}};
      if (!vnfs.contains(spec.from)) throw Error(ErrorCode::ValidationError, v.field("from") + ": VNF not placed");
      if (!vnfs.contains(spec.to)) throw Error(ErrorCode::ValidationError, v.field("to") + ": VNF not placed");
      const json& path = v.array("path");
      for (std::size_t h = 0; h < path.size(); ++h) {
        if (!path[h].is_string() || !kinds.contains(NodeId(path[h].get<std::string>()))) {
          throw Error(ErrorCode::ValidationError, indexed(v.field("path"), h) + ": unknown node");
        }
        spec.path.emplace_back(path[h].get<std::string>());
      }
      cfg.virtual_links.push_back(std::move(spec));
    }
  }
  if (root.has("services")) {
    const json& ss = root.array("services");
    for (std::size_t i = 0; i < ss.size(); ++i) {
      const Reader s(ss[i], indexed("services", i));
      s.only({"robot", "vnf"});
      ServiceSpec spec{NodeId(s.string("robot")), VnfId(s.string("vnf"))};
      const auto it = kinds.find(spec.robot);
      if (it == kinds.end() || it->second != NodeKind::Robot) {
        throw Error(ErrorCode::ValidationError, s.field("robot") + ": not a robot");
      }
      cfg.services.push_back(std::move(spec));
    }
  }

  const auto known = available_plugins();
  auto is_known = [&](const std::string& name) { return std::find(known.begin(), known.end(), name) != known.end(); };
  if (root.has("plugins")) {
    const json& ps = root.raw("plugins");
    if (!ps.is_object()) throw Error(ErrorCode::ValidationError, "plugins: expected an object of parameter tables");
    for (const auto& [name, params] : ps.items()) {
      if (!is_known(name)) throw Error(ErrorCode::ValidationError, "plugins." + name + ": unknown plug-in");
      if (!params.is_object()) throw Error(ErrorCode::ValidationError, "plugins." + name + ": expected an object");
      cfg.plugins[name] = params;
    }
  }
  if (root.has("enabled_plugins")) {
    const json& en = root.array("enabled_plugins");
    for (std::size_t i = 0; i < en.size(); ++i) {
      if (!en[i].is_string() || !is_known(en[i].get<std::string>())) {
        throw Error(ErrorCode::ValidationError, indexed("enabled_plugins", i) + ": unknown plug-in");
      }
      cfg.enabled_plugins.push_back(en[i].get<std::string>());
    }
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  json document = read_scenario_document(path);
  for (const auto& o : overrides) apply_override(document, o);
  return parse_scenario(document);
}

}  // namespace cotorra
