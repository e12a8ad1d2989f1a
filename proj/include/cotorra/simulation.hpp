#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cotorra/hw_graph.hpp"
#include "cotorra/measurements.hpp"
#include "cotorra/net_control.hpp"
#include "cotorra/plugin_runtime.hpp"
#include "cotorra/robot_sim.hpp"
#include "cotorra/scenario.hpp"

namespace cotorra {

// Builds a plug-in from its parameter table. Unknown parameter keys are
// rejected with ValidationError naming "plugins.<name>.<key>".
std::unique_ptr<Plugin> make_plugin(const std::string& name, const nlohmann::json& params, const ScenarioConfig& cfg);

struct InstructionCounts {
  std::uint64_t applied = 0;
  std::uint64_t rejected = 0;
  friend bool operator==(const InstructionCounts&, const InstructionCounts&) = default;
};

struct ServiceStats {
  std::uint64_t samples = 0;   // every (tick, service) sample
  std::uint64_t served = 0;    // samples with a defined service time
  double min_ms = 0.0;
  double mean_ms = 0.0;
  double p95_ms = 0.0;  // nearest rank
  double max_ms = 0.0;
  double fraction_within_target = 0.0;  // served and <= target, over all samples
  friend bool operator==(const ServiceStats&, const ServiceStats&) = default;
};

struct RunSummary {
  std::uint64_t ticks = 0;
  double target_ms = 15.0;
  std::map<std::string, InstructionCounts> instructions;
  ServiceStats service;
  std::optional<double> federation_total_s;

  nlohmann::json to_json() const;
  friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

// Service-time statistics over samples; unserved samples carry no value.
ServiceStats compute_service_stats(const std::vector<std::optional<double>>& samples, double target_ms);

/// One seeded run of a scenario. Each tick at t = k * tick_ms:
/// deployments due by t complete, robots step (k > 0), wireless metrics
/// refresh, a snapshot is recorded, plug-ins run and their instructions are
/// applied, and finally one service-time sample per configured service is
/// taken.
class Simulation {
 public:
  using Observer = std::function<void(const Simulation&)>;

  // `plugins` overrides enabled_plugins from the config when non-empty.
  explicit Simulation(ScenarioConfig config, std::vector<std::string> plugins = {});

  bool done() const noexcept { return tick_ >= config_.tick_count(); }
  void step();
  RunSummary run(const Observer& after_tick = {});
  RunSummary summary() const;

  const ScenarioConfig& config() const noexcept { return config_; }
  TimeMs now() const noexcept { return now_; }
  std::uint64_t ticks_run() const noexcept { return tick_; }
  const HardwareGraph& graph() const noexcept { return graph_; }
  const NetControl& net() const noexcept { return *net_; }
  const RobotSim& robots() const noexcept { return robots_; }
  const Measurements& measurements() const noexcept { return store_; }
  const PluginRuntime& runtime() const noexcept { return runtime_; }

 private:
  void tick_body();
  void apply(const Instruction& instruction);
  HistorySnapshot snapshot() const;

  ScenarioConfig config_;
  HardwareGraph graph_;
  std::unique_ptr<NetControl> net_;
  RobotSim robots_;
  Measurements store_;
  PluginRuntime runtime_;
  std::uint64_t tick_ = 0;
  TimeMs now_ = 0;
  std::vector<std::optional<double>> service_values_;
  std::map<std::string, InstructionCounts> counts_;
  std::optional<TimeMs> federation_total_ms_;
};

// Runs the scenario and writes the CSV traces plus summary.json into `out`.
RunSummary run_scenario(const ScenarioConfig& config, const std::filesystem::path& out,
                        const std::vector<std::string>& plugins = {});

// Recomputes the summary from the CSV traces of a finished run.
RunSummary summarize(const std::filesystem::path& dir, double target_ms = 15.0);

}  // namespace cotorra
