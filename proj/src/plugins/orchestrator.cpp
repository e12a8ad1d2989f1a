#include "cotorra/plugins/orchestrator.hpp"

#include <algorithm>
#include <tuple>

namespace cotorra::plugins {

std::vector<Candidate> rank_candidates(const NetControl& net, const NodeId& robot, Vec2 position) {
  std::vector<Candidate> out;
  const auto servers = net.graph().nodes_of_kind(NodeKind::Server);
  for (const auto& [ru, rssi] : net.reachable_rus(robot)) {
    for (const auto& server : servers) {
      try {
        out.push_back({ru, server, net.predict_service_time(robot, position, ru, server)});
      } catch (const Error& e) {
        if (e.code() != ErrorCode::Unreachable) throw;
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.predicted_ms, a.ru, a.host) < std::tie(b.predicted_ms, b.ru, b.host);
  });
  return out;
}

OrchestratorPlugin::OrchestratorPlugin(OrchestratorParams params) : params_(std::move(params)) {
  if (!(params_.target_ms > 0.0)) throw Error(ErrorCode::InvalidArgument, "target_ms must be > 0");
  if (!(params_.hysteresis >= 0.0) || params_.hysteresis >= 1.0) {
    throw Error(ErrorCode::InvalidArgument, "hysteresis must lie in [0, 1)");
  }
}

PluginOutput OrchestratorPlugin::on_tick(const WorldView& view) {
  PluginOutput out;
  const NetControl& net = view.net();
  bool migrated = false;

  for (const auto& robot : view.robots().robots()) {
    if (net.handover_in_progress(robot)) continue;

    // An in-flight migration counts as the current host so it is not re-issued.
    std::optional<NodeId> host = net.host_of(params_.vnf);
    if (const auto p = net.pending_deployments().find(params_.vnf); p != net.pending_deployments().end()) {
      host = p->second.target;
    }
    if (!host) continue;

    const Vec2 estimate = view.sample_localization(robot).estimate;
    const auto ranked = rank_candidates(net, robot, estimate);
    if (ranked.empty()) continue;
    const Candidate& best = ranked.front();

    const auto ru = net.attachment(robot);
    double current_ms = std::numeric_limits<double>::infinity();
    if (ru) {
      try {
        current_ms = net.predict_service_time(robot, estimate, *ru, *host);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::Unreachable) throw;
      }
    }
    if (!(best.predicted_ms < current_ms * (1.0 - params_.hysteresis))) continue;

    if (!ru || *ru != best.ru) out.instructions.push_back(HandoverInstruction{robot, best.ru});
    if (*host != best.host && !migrated) {
      out.instructions.push_back(PlaceVnfInstruction{params_.vnf, best.host});
      migrated = true;
    }
  }
  return out;
}

}  // namespace cotorra::plugins
