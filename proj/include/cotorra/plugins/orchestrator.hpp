#pragma once

#include <limits>
#include <string>
#include <vector>

#include "cotorra/plugin_runtime.hpp"

namespace cotorra::plugins {

struct OrchestratorParams {
  double target_ms = 15.0;
  double hysteresis = 0.10;  // required relative improvement before acting
  VnfId vnf = "v_d";
};

struct Candidate {
  NodeId ru;
  NodeId host;
  double predicted_ms = std::numeric_limits<double>::infinity();
};

// Every (reachable RU, server) pair scored by predicted steady-state service
// time at `position`, ordered by (cost, ru, host).
std::vector<Candidate> rank_candidates(const NetControl& net, const NodeId& robot, Vec2 position);

/// Greedy latency-aware orchestrator: jointly picks the radio unit and the
/// server hosting the navigation VNF, acting only on a clear improvement.
class OrchestratorPlugin final : public Plugin {
 public:
  explicit OrchestratorPlugin(OrchestratorParams params);

  std::string name() const override { return "orchestrator"; }
  PluginOutput on_tick(const WorldView& view) override;

  const OrchestratorParams& params() const noexcept { return params_; }

 private:
  OrchestratorParams params_;
};

}  // namespace cotorra::plugins
