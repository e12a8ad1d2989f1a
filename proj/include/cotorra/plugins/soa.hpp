#pragma once

#include <map>
#include <string>

#include "cotorra/plugin_runtime.hpp"

namespace cotorra::plugins {

struct SoaParams {
  double probe_period_s = 5.0;
};

// Baseline navigation: the brain stays wherever it was placed and the robot
// re-selects its radio unit only at fixed probe instants.
class SoaPlugin final : public Plugin {
 public:
  explicit SoaPlugin(SoaParams params);

  std::string name() const override { return "soa"; }
  PluginOutput on_tick(const WorldView& view) override;

 private:
  SoaParams params_;
  TimeMs probe_period_ms_;
  std::map<NodeId, TimeMs> next_probe_ms_;
};

}  // namespace cotorra::plugins
