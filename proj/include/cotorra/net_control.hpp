#pragma once

#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "cotorra/hw_graph.hpp"
#include "cotorra/types.hpp"

namespace cotorra {

// Log-distance path loss plus a piecewise-linear mapping from signal level to
// one-way wireless hop delay.
struct RadioModel {
  double p0_dbm = -40.0;
  double d0_m = 1.0;
  double eta = 3.0;
  double attach_threshold_dbm = -75.0;
  double good_rssi_dbm = -65.0;
  double wireless_min_ms = 2.0;
  double wireless_max_ms = 20.0;
  double wireless_mbps = 54.0;

  double rssi_dbm(double distance_m) const;
  // Flat at wireless_min_ms above good_rssi_dbm, wireless_max_ms at the
  // attach threshold, and continuing on the same slope below it.
  double wireless_delay_ms(double rssi_dbm) const;
};

// Layout [rssi_dbm, tx_rate_mbps, rx_rate_mbps, attached_count].
struct RuContext {
  double rssi_dbm = 0.0;
  double tx_rate_mbps = 0.0;
  double rx_rate_mbps = 0.0;
  double attached_count = 0.0;

  std::vector<double> values() const { return {rssi_dbm, tx_rate_mbps, rx_rate_mbps, attached_count}; }
  friend bool operator==(const RuContext&, const RuContext&) = default;
};

struct LinkMeasurement {
  double d_ms = 0.0;
  double lambda_mbps = 0.0;
  double eff_d_ms = 0.0;
  double eff_lambda_mbps = 0.0;
};

struct AttachmentState {
  std::map<NodeId, std::optional<NodeId>> phi;
  std::map<NodeId, TimeMs> handover_until;
};

// Ordered pair of VNFs joined by a virtual link.
struct VirtualLinkId {
  VnfId from;
  VnfId to;
  friend auto operator<=>(const VirtualLinkId&, const VirtualLinkId&) = default;
  friend bool operator==(const VirtualLinkId&, const VirtualLinkId&) = default;
};

struct PlacementMap {
  std::map<NodeId, std::set<VnfId>> node_map;               // a(n)
  std::map<VirtualLinkId, std::vector<NodeId>> link_map;    // a(n1,n2) as hop sequence

  std::optional<NodeId> host_of(const VnfId& v) const;
  static std::vector<LinkKey> links_of(const std::vector<NodeId>& hops);
  friend bool operator==(const PlacementMap&, const PlacementMap&) = default;
};

struct PendingDeployment {
  VnfId vnf;
  NodeId target;
  TimeMs due_ms = 0;
};

struct ServiceTime {
  double steady_ms = 0.0;              // round trip through the serving host
  double handover_remaining_ms = 0.0;  // interruption still owed by an open handover
  double total_ms() const { return steady_ms + handover_remaining_ms; }
};

struct NetControlConfig {
  RadioModel radio;
  TimeMs handover_ms = 100;
  TimeMs default_deploy_ms = 500;
  std::map<VnfId, TimeMs> deploy_ms;  // per-VNF instantiation delay overrides
};

/// Network control: link measurement and shaping, radio context, robot
/// attachment, and VNF/VL placement over a hardware graph it does not own.
class NetControl {
 public:
  NetControl(HardwareGraph& graph, NetControlConfig config);

  const NetControlConfig& config() const noexcept { return config_; }
  const HardwareGraph& graph() const noexcept { return graph_; }
  TimeMs now() const noexcept { return now_; }

  // Moves the clock forward and completes deployments that fell due. Returns
  // the VNFs whose migration or instantiation finished.
  std::vector<VnfId> advance_to(TimeMs now);

  void set_emulation(const NodeId& a, const NodeId& b, double psi, double delta);
  LinkMeasurement measure_link(const NodeId& a, const NodeId& b) const;

  double rssi_dbm(const NodeId& ru, const NodeId& robot) const;
  RuContext ru_context(const NodeId& ru, const NodeId& robot) const;
  // Strongest client signal and summed rates over all robots.
  RuContext ru_context(const NodeId& ru) const;
  std::vector<std::pair<NodeId, double>> reachable_rus(const NodeId& robot) const;
  // Recomputes base metrics of every wireless link from current positions.
  void refresh_wireless();

  void handover(const NodeId& robot, const NodeId& ru);
  std::optional<NodeId> attachment(const NodeId& robot) const;
  const AttachmentState& attachment_state() const noexcept { return attachment_; }
  bool handover_in_progress(const NodeId& robot) const;
  TimeMs handover_remaining_ms(const NodeId& robot) const;

  // Setup-time placement, bypassing instantiation delay.
  void place_vnf_now(const VnfId& v, const NodeId& n);
  void place_vnf(const VnfId& v, const NodeId& n);
  void place_vl(const VnfId& from, const VnfId& to, const std::vector<NodeId>& hops);
  const PlacementMap& placements() const noexcept { return placements_; }
  std::optional<NodeId> host_of(const VnfId& v) const { return placements_.host_of(v); }
  const std::map<VnfId, PendingDeployment>& pending_deployments() const noexcept { return pending_; }
  TimeMs deploy_delay_ms(const VnfId& v) const;

  ServiceTime service_time(const NodeId& robot, const VnfId& v) const;
  // Steady-state service time if the robot were at `position`, attached to
  // `ru`, and served from `host`.
  double predict_service_time(const NodeId& robot, Vec2 position, const NodeId& ru, const NodeId& host) const;

 private:
  const NodeAttrs& require_kind(const NodeId& id, NodeKind kind) const;
  double path_link_delay(const std::vector<NodeId>& hops) const;
  void commit_placement(const VnfId& v, const NodeId& n);
  void repair_virtual_links();

  HardwareGraph& graph_;
  NetControlConfig config_;
  TimeMs now_ = 0;
  AttachmentState attachment_;
  PlacementMap placements_;
  std::map<VnfId, PendingDeployment> pending_;
};

}  // namespace cotorra
