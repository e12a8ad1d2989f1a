#include "cotorra/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "cotorra/error.hpp"
#include "cotorra/plugins/federation.hpp"
#include "cotorra/plugins/orchestrator.hpp"
#include "cotorra/plugins/soa.hpp"

namespace cotorra {

using nlohmann::json;

namespace {

class Params {
 public:
  Params(const json& j, std::string name) : j_(j), name_(std::move(name)) {
    if (!j_.is_null() && !j_.is_object()) fail("", "expected an object");
  }

  void only(std::initializer_list<std::string_view> allowed) const {
    if (j_.is_null()) return;
    for (const auto& [k, v] : j_.items()) {
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) fail(k, "unknown parameter");
    }
  }

  bool has(std::string_view key) const { return j_.is_object() && j_.contains(key); }

  double number(std::string_view key, double fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(std::string(key));
    if (!v.is_number() || !std::isfinite(v.get<double>())) fail(key, "expected a finite number");
    return v.get<double>();
  }

  std::string string(std::string_view key, std::string fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(std::string(key));
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }

  TimeMs seconds_as_ms(std::string_view key, TimeMs fallback) const {
    if (!has(key)) return fallback;
    const double s = number(key, 0.0);
    if (s < 0.0) fail(key, "must be >= 0");
    return static_cast<TimeMs>(std::llround(s * 1000.0));
  }

  [[noreturn]] void fail(std::string_view key, const std::string& what) const {
    std::string path = "plugins." + name_;
    if (!key.empty()) path += "." + std::string(key);
    throw Error(ErrorCode::ValidationError, path + ": " + what);
  }

 private:
  const json& j_;
  std::string name_;
};

}  // namespace

std::unique_ptr<Plugin> make_plugin(const std::string& name, const json& params, const ScenarioConfig& cfg) {
  const Params p(params, name);
  try {
    if (name == "soa") {
      p.only({"probe_period_s"});
      plugins::SoaParams sp;
      sp.probe_period_s = p.number("probe_period_s", sp.probe_period_s);
      return std::make_unique<plugins::SoaPlugin>(sp);
    }
    if (name == "orchestrator") {
      p.only({"target_ms", "hysteresis", "vnf"});
      plugins::OrchestratorParams op;
      op.target_ms = p.number("target_ms", cfg.target_ms);
      op.hysteresis = p.number("hysteresis", op.hysteresis);
      op.vnf = p.string("vnf", op.vnf.str());
      return std::make_unique<plugins::OrchestratorPlugin>(op);
    }
    if (name == "federation") {
      p.only({"robot", "requester_domain", "provider_domain", "provider_ru", "vnf", "block_interval_s", "attach_s",
              "horizon_s", "rssi_window", "timeout_s"});
      plugins::FederationParams fp;
      fp.robot = p.string("robot", fp.robot.str());
      fp.requester_domain = p.string("requester_domain", fp.requester_domain);
      fp.provider_domain = p.string("provider_domain", fp.provider_domain);
      fp.provider_ru = p.string("provider_ru", fp.provider_ru.str());
      fp.vnf = p.string("vnf", fp.vnf.str());
      fp.block_interval_ms = p.seconds_as_ms("block_interval_s", fp.block_interval_ms);
      fp.attach_ms = p.seconds_as_ms("attach_s", fp.attach_ms);
      fp.horizon_ms = p.seconds_as_ms("horizon_s", fp.horizon_ms);
      fp.timeout_ms = p.seconds_as_ms("timeout_s", fp.timeout_ms);
      const double window = p.number("rssi_window", static_cast<double>(fp.rssi_window));
      if (window != std::floor(window) || window < 2) p.fail("rssi_window", "must be an integer >= 2");
      fp.rssi_window = static_cast<std::size_t>(window);
      return std::make_unique<plugins::FederationPlugin>(fp);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ValidationError) throw;
    throw Error(ErrorCode::ValidationError, "plugins." + name + ": " + e.what());
  }
  throw Error(ErrorCode::ValidationError, "plugins." + name + ": unknown plug-in");
}

json RunSummary::to_json() const {
  json j;
  j["ticks"] = ticks;
  j["target_ms"] = target_ms;
  json per_plugin = json::object();
  for (const auto& [name, c] : instructions) per_plugin[name] = {{"applied", c.applied}, {"rejected", c.rejected}};
  j["instructions"] = per_plugin;
  j["service"] = {{"samples", service.samples},
                  {"served", service.served},
                  {"min_ms", service.min_ms},
                  {"mean_ms", service.mean_ms},
                  {"p95_ms", service.p95_ms},
                  {"max_ms", service.max_ms},
                  {"fraction_within_target", service.fraction_within_target}};
  j["federation_total_s"] = federation_total_s ? json(*federation_total_s) : json(nullptr);
  return j;
}

ServiceStats compute_service_stats(const std::vector<std::optional<double>>& samples, double target_ms) {
  ServiceStats s;
  s.samples = samples.size();
  std::vector<double> values;
  double sum = 0.0;
  std::uint64_t within = 0;
  for (const auto& v : samples) {
    if (!v) continue;
    values.push_back(*v);
    sum += *v;
    if (*v <= target_ms) ++within;
  }
  s.served = values.size();
  if (s.samples > 0) s.fraction_within_target = static_cast<double>(within) / static_cast<double>(s.samples);
  if (values.empty()) return s;
  s.mean_ms = sum / static_cast<double>(values.size());
  std::sort(values.begin(), values.end());
  s.min_ms = values.front();
  s.max_ms = values.back();
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(values.size())));
  s.p95_ms = values[std::max<std::size_t>(rank, 1) - 1];
  return s;
}

Simulation::Simulation(ScenarioConfig config, std::vector<std::string> plugins)
    : config_(std::move(config)), robots_(config_.seed) {
  for (const auto& n : config_.nodes) graph_.add_node(n.id, n.attrs);
  for (const auto& r : config_.robots) {
    NodeAttrs attrs;
    attrs.kind = NodeKind::Robot;
    attrs.position = r.trajectory.waypoints.front();
    attrs.domain = r.domain;
    graph_.add_node(r.id, attrs);
    robots_.add_robot(r.id, r.trajectory, r.localization);
  }
  for (const auto& l : config_.links) graph_.add_link(l.a, l.b, l.metrics);

  net_ = std::make_unique<NetControl>(graph_, config_.net);
  for (const auto& r : config_.robots) {
    if (r.initial_ru) net_->handover(r.id, *r.initial_ru);
  }
  for (const auto& p : config_.placements) net_->place_vnf_now(p.vnf, p.node);
  for (const auto& vl : config_.virtual_links) net_->place_vl(vl.from, vl.to, vl.path);
  store_.set_ru_universe(graph_.nodes_of_kind(NodeKind::RadioUnit));

  if (plugins.empty()) plugins = config_.enabled_plugins;
  for (const auto& name : plugins) {
    const auto it = config_.plugins.find(name);
    runtime_.register_plugin(make_plugin(name, it == config_.plugins.end() ? json::object() : it->second, config_));
  }
}

HistorySnapshot Simulation::snapshot() const {
  HistorySnapshot s;
  s.t_ms = now_;
  for (const auto& robot : robots_.robots()) {
    const auto ru = net_->attachment(robot);
    s.attachment[robot] = ru;
    s.sensors[robot] = robots_.sensors(robot);
    s.kappa[robot] = robots_.build_context_embedding(robot, store_.ru_universe(), ru);
  }
  s.placements = net_->placements();
  for (const auto& [key, link] : graph_.links()) {
    s.link_delays[key] = link.metrics.effective_delay_ms();
    s.link_throughputs[key] = link.metrics.effective_throughput_mbps();
  }
  if (!s.kappa.empty()) {
    for (const auto& ru : store_.ru_universe()) s.ru_contexts[ru] = net_->ru_context(ru);
  }
  return s;
}

void Simulation::apply(const Instruction& instruction) {
  std::visit(
      [this](const auto& i) {
        using T = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<T, MoveInstruction>) {
          robots_.set_velocity(i.robot, i.speed);
        } else if constexpr (std::is_same_v<T, HandoverInstruction>) {
          net_->handover(i.robot, i.ru);
        } else if constexpr (std::is_same_v<T, PlaceVnfInstruction>) {
          net_->place_vnf(i.vnf, i.node);
        } else if constexpr (std::is_same_v<T, PlaceVlInstruction>) {
          net_->place_vl(i.from, i.to, i.hops);
        } else {
          net_->set_emulation(i.a, i.b, i.psi, i.delta);
        }
      },
      instruction);
}

void Simulation::tick_body() {
  net_->advance_to(now_);
  if (tick_ > 0) {
    const double dt_s = static_cast<double>(config_.tick_ms) / 1000.0;
    for (const auto& robot : robots_.robots()) {
      const SensorVector s = robots_.step(robot, dt_s);
      graph_.set_position(robot, s.position());
    }
  }
  net_->refresh_wireless();
  store_.record(snapshot());

  const WorldView view(now_, graph_, *net_, robots_, store_);
  const DispatchResult result = runtime_.tick_dispatch(view, [this](const Instruction& i) { apply(i); });
  for (const auto& e : result.events) store_.record_federation(e);
  for (const auto& a : result.instructions) {
    InstructionCounts& c = counts_[a.plugin];
    (a.applied() ? c.applied : c.rejected) += 1;
    store_.record_instruction({now_, a.plugin, describe(a.instruction), a.applied() ? "applied" : "rejected",
                               a.applied() ? "" : a.message});
  }
  for (const auto& p : result.panics) {
    store_.record_instruction({now_, p.plugin, "", "panic", p.message});
  }

  for (const auto& svc : config_.services) {
    ServiceSample sample;
    sample.t_ms = now_;
    sample.robot = svc.robot;
    sample.attached_ru = net_->attachment(svc.robot);
    sample.vnf_host = net_->host_of(svc.vnf);
    if (sample.attached_ru && sample.vnf_host) {
      try {
        const ServiceTime st = net_->service_time(svc.robot, svc.vnf);
        sample.service_ms = st.total_ms();
        sample.steady_ms = st.steady_ms;
        sample.handover_remaining_ms = st.handover_remaining_ms;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::Unreachable) throw;
      }
    }
    service_values_.push_back(sample.service_ms);
    store_.record_service(std::move(sample));
  }

  if (!federation_total_ms_) {
    if (const auto* fed = dynamic_cast<const plugins::FederationPlugin*>(runtime_.find("federation"))) {
      federation_total_ms_ = fed->total_ms();
    }
  }
}

void Simulation::step() {
  if (done()) throw Error(ErrorCode::RuntimeFault, "run already complete");
  now_ = static_cast<TimeMs>(tick_) * config_.tick_ms;
  try {
    tick_body();
  } catch (const Error& e) {
    throw Error(ErrorCode::RuntimeFault, "tick " + std::to_string(tick_) + " (t=" + std::to_string(now_) +
                                             " ms): " + e.what());
  }
  ++tick_;
}

RunSummary Simulation::run(const Observer& after_tick) {
  while (!done()) {
    step();
    if (after_tick) after_tick(*this);
  }
  return summary();
}

RunSummary Simulation::summary() const {
  RunSummary s;
  s.ticks = tick_;
  s.target_ms = config_.target_ms;
  s.instructions = counts_;
  s.service = compute_service_stats(service_values_, config_.target_ms);
  if (federation_total_ms_) s.federation_total_s = static_cast<double>(*federation_total_ms_) / 1000.0;
  return s;
}

RunSummary run_scenario(const ScenarioConfig& config, const std::filesystem::path& out,
                        const std::vector<std::string>& plugins) {
  Simulation sim(config, plugins);
  const RunSummary summary = sim.run();
  sim.measurements().export_csv(out);
  std::ofstream f(out / "summary.json", std::ios::binary);
  f << summary.to_json().dump(2) << '\n';
  if (!f) throw Error(ErrorCode::IoError, "cannot write summary.json");
  return summary;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

std::vector<std::vector<std::string>> read_trace(const std::filesystem::path& path, std::string_view header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingTrace, path.filename().string() + " not found in " + path.parent_path().string());
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw Error(ErrorCode::SchemaMismatch, path.filename().string() + ": expected header '" + std::string(header) + "'");
  }
  const std::size_t width = split_csv_line(std::string(header)).size();
  std::vector<std::vector<std::string>> rows;
  std::string record;
  while (std::getline(in, line)) {
    record += line;
    // A quoted field may span lines; keep reading until quotes balance.
    if (std::count(record.begin(), record.end(), '"') % 2 != 0) {
      record += '\n';
      continue;
    }
    auto fields = split_csv_line(record);
    record.clear();
    if (fields.size() != width) {
      throw Error(ErrorCode::SchemaMismatch, path.filename().string() + ": row " + std::to_string(rows.size() + 1) +
                                                 " has " + std::to_string(fields.size()) + " fields");
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

TimeMs parse_time(const std::string& s, const std::string& file) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::SchemaMismatch, file + ": bad t_ms '" + s + "'");
}

double parse_double(const std::string& s, const std::string& file) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::SchemaMismatch, file + ": bad number '" + s + "'");
}

}  // namespace

RunSummary summarize(const std::filesystem::path& dir, double target_ms) {
  const auto snapshots = read_trace(dir / "snapshots.csv", kSnapshotsHeader);
  const auto service = read_trace(dir / "service_time.csv", kServiceTimeHeader);
  const auto federation = read_trace(dir / "federation.csv", kFederationHeader);
  const auto instructions = read_trace(dir / "instructions.csv", kInstructionsHeader);

  RunSummary s;
  s.target_ms = target_ms;
  std::set<TimeMs> ticks;
  for (const auto& row : snapshots) ticks.insert(parse_time(row[0], "snapshots.csv"));
  s.ticks = ticks.size();

  std::vector<std::optional<double>> values;
  for (const auto& row : service) {
    parse_time(row[0], "service_time.csv");
    values.push_back(row[4].empty() ? std::nullopt : std::optional<double>(parse_double(row[4], "service_time.csv")));
  }
  s.service = compute_service_stats(values, target_ms);

  for (const auto& row : instructions) {
    if (row[3] == "applied") {
      ++s.instructions[row[1]].applied;
    } else if (row[3] == "rejected") {
      ++s.instructions[row[1]].rejected;
    } else if (row[3] != "panic") {
      throw Error(ErrorCode::SchemaMismatch, "instructions.csv: unknown outcome '" + row[3] + "'");
    }
  }

  for (const auto& row : federation) {
    if (row[1] != "complete") continue;
    const std::string prefix = "total_ms=";
    if (row[3].rfind(prefix, 0) != 0) throw Error(ErrorCode::SchemaMismatch, "federation.csv: bad complete detail");
    s.federation_total_s = static_cast<double>(parse_time(row[3].substr(prefix.size()), "federation.csv")) / 1000.0;
    break;
  }
  return s;
}

}  // namespace cotorra
