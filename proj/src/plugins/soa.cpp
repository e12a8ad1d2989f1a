#include "cotorra/plugins/soa.hpp"

#include <cmath>

namespace cotorra::plugins {

SoaPlugin::SoaPlugin(SoaParams params)
    : params_(params), probe_period_ms_(static_cast<TimeMs>(std::llround(params.probe_period_s * 1000.0))) {
  if (probe_period_ms_ <= 0) throw Error(ErrorCode::InvalidArgument, "probe_period_s must be > 0");
}

PluginOutput SoaPlugin::on_tick(const WorldView& view) {
  PluginOutput out;
  for (const auto& robot : view.robots().robots()) {
    TimeMs& next = next_probe_ms_.try_emplace(robot, 0).first->second;
    if (view.now() < next) continue;
    while (next <= view.now()) next += probe_period_ms_;

    const auto reachable = view.net().reachable_rus(robot);
    if (reachable.empty()) continue;
    const NodeId& strongest = reachable.front().first;
    const auto current = view.net().attachment(robot);
    if (!current || *current != strongest) out.instructions.push_back(HandoverInstruction{robot, strongest});
  }
  return out;
}

}  // namespace cotorra::plugins
