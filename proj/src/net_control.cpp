#include "cotorra/net_control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cotorra/error.hpp"

namespace cotorra {

double RadioModel::rssi_dbm(double distance_m) const {
  return p0_dbm - 10.0 * eta * std::log10(std::max(distance_m, d0_m) / d0_m);
}

double RadioModel::wireless_delay_ms(double rssi) const {
  if (rssi >= good_rssi_dbm) return wireless_min_ms;
  const double slope = (wireless_max_ms - wireless_min_ms) / (good_rssi_dbm - attach_threshold_dbm);
  return wireless_min_ms + (good_rssi_dbm - rssi) * slope;
}

std::optional<NodeId> PlacementMap::host_of(const VnfId& v) const {
  for (const auto& [node, vnfs] : node_map) {
    if (vnfs.contains(v)) return node;
  }
  return std::nullopt;
}

std::vector<LinkKey> PlacementMap::links_of(const std::vector<NodeId>& hops) {
  std::vector<LinkKey> out;
  for (std::size_t i = 1; i < hops.size(); ++i) out.emplace_back(hops[i - 1], hops[i]);
  return out;
}

NetControl::NetControl(HardwareGraph& graph, NetControlConfig config)
    : graph_(graph), config_(std::move(config)) {
  if (config_.handover_ms < 0 || config_.default_deploy_ms < 0) {
    throw Error(ErrorCode::InvalidArgument, "negative handover or deploy delay");
  }
  for (const auto& robot : graph_.nodes_of_kind(NodeKind::Robot)) attachment_.phi[robot] = std::nullopt;
}

std::vector<VnfId> NetControl::advance_to(TimeMs now) {
  if (now < now_) throw Error(ErrorCode::NonMonotonicTime, "clock moved backwards");
  now_ = now;
  std::vector<PendingDeployment> due;
  for (const auto& [v, p] : pending_) {
    if (p.due_ms <= now_) due.push_back(p);
  }
  std::sort(due.begin(), due.end(), [](const auto& a, const auto& b) {
    return std::tie(a.due_ms, a.vnf) < std::tie(b.due_ms, b.vnf);
  });
  std::vector<VnfId> done;
  for (const auto& p : due) {
    pending_.erase(p.vnf);
    commit_placement(p.vnf, p.target);
    done.push_back(p.vnf);
  }
  if (!done.empty()) repair_virtual_links();
  return done;
}

void NetControl::set_emulation(const NodeId& a, const NodeId& b, double psi, double delta) {
  if (!graph_.has_link(a, b)) throw Error(ErrorCode::UnknownLink, LinkKey(a, b).str());
  if (!(psi >= 1.0) || !(delta >= 1.0) || !std::isfinite(psi) || !std::isfinite(delta)) {
    throw Error(ErrorCode::InvalidFactor, "psi and delta must be finite and >= 1");
  }
  LinkMetrics& m = graph_.metrics(a, b);
  m.psi = psi;
  m.delta = delta;
}

LinkMeasurement NetControl::measure_link(const NodeId& a, const NodeId& b) const {
  if (!graph_.has_link(a, b)) throw Error(ErrorCode::UnknownLink, LinkKey(a, b).str());
  const LinkMetrics& m = graph_.metrics(a, b);
  return {m.d_ms, m.lambda_mbps, m.effective_delay_ms(), m.effective_throughput_mbps()};
}

const NodeAttrs& NetControl::require_kind(const NodeId& id, NodeKind kind) const {
  const NodeAttrs& attrs = graph_.node(id);
  if (attrs.kind != kind) {
    throw Error(ErrorCode::WrongKind, id.str() + " is " + std::string(to_string(attrs.kind)) + ", expected " +
                                          std::string(to_string(kind)));
  }
  return attrs;
}

double NetControl::rssi_dbm(const NodeId& ru, const NodeId& robot) const {
  const NodeAttrs& r = require_kind(ru, NodeKind::RadioUnit);
  const NodeAttrs& b = require_kind(robot, NodeKind::Robot);
  return config_.radio.rssi_dbm(distance(r.position, b.position));
}

RuContext NetControl::ru_context(const NodeId& ru, const NodeId& robot) const {
  RuContext ctx;
  ctx.rssi_dbm = rssi_dbm(ru, robot);
  for (const auto& [r, attached] : attachment_.phi) {
    if (attached && *attached == ru) ctx.attached_count += 1.0;
  }
  const auto it = attachment_.phi.find(robot);
  if (it != attachment_.phi.end() && it->second && *it->second == ru) {
    const double rate = graph_.metrics(robot, ru).effective_throughput_mbps();
    ctx.tx_rate_mbps = rate;
    ctx.rx_rate_mbps = rate;
  }
  return ctx;
}

RuContext NetControl::ru_context(const NodeId& ru) const {
  require_kind(ru, NodeKind::RadioUnit);
  RuContext ctx;
  ctx.rssi_dbm = -std::numeric_limits<double>::infinity();
  for (const auto& [robot, attached] : attachment_.phi) {
    const RuContext one = ru_context(ru, robot);
    ctx.rssi_dbm = std::max(ctx.rssi_dbm, one.rssi_dbm);
    ctx.tx_rate_mbps += one.tx_rate_mbps;
    ctx.rx_rate_mbps += one.rx_rate_mbps;
    ctx.attached_count = one.attached_count;
  }
  return ctx;
}

std::vector<std::pair<NodeId, double>> NetControl::reachable_rus(const NodeId& robot) const {
  require_kind(robot, NodeKind::Robot);
  std::vector<std::pair<NodeId, double>> out;
  for (const auto& ru : graph_.nodes_of_kind(NodeKind::RadioUnit)) {
    const double rssi = rssi_dbm(ru, robot);
    if (rssi >= config_.radio.attach_threshold_dbm) out.emplace_back(ru, rssi);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

void NetControl::refresh_wireless() {
  for (const auto& [robot, attached] : attachment_.phi) {
    if (!attached) continue;
    LinkMetrics& m = graph_.metrics(robot, *attached);
    m.d_ms = config_.radio.wireless_delay_ms(rssi_dbm(*attached, robot));
    m.lambda_mbps = config_.radio.wireless_mbps;
  }
}

void NetControl::handover(const NodeId& robot, const NodeId& ru) {
  require_kind(robot, NodeKind::Robot);
  require_kind(ru, NodeKind::RadioUnit);
  if (handover_in_progress(robot)) throw Error(ErrorCode::HandoverInProgress, robot.str());
  const double rssi = rssi_dbm(ru, robot);
  if (rssi < config_.radio.attach_threshold_dbm) {
    throw Error(ErrorCode::OutOfRange, ru.str() + " not reachable from " + robot.str());
  }
  std::optional<NodeId>& current = attachment_.phi[robot];
  if (current && *current == ru) return;

  const bool had_attachment = current.has_value();
  if (had_attachment) graph_.remove_link(robot, *current);
  LinkMetrics wireless;
  wireless.d_ms = config_.radio.wireless_delay_ms(rssi);
  wireless.lambda_mbps = config_.radio.wireless_mbps;
  graph_.add_link(robot, ru, wireless, LinkMedium::Wireless);
  current = ru;
  // A first association has nothing to interrupt; only a switch between RUs
  // opens the window.
  if (had_attachment) attachment_.handover_until[robot] = now_ + config_.handover_ms;
  repair_virtual_links();
}

std::optional<NodeId> NetControl::attachment(const NodeId& robot) const {
  const auto it = attachment_.phi.find(robot);
  if (it == attachment_.phi.end()) throw Error(ErrorCode::UnknownRobot, robot.str());
  return it->second;
}

bool NetControl::handover_in_progress(const NodeId& robot) const { return handover_remaining_ms(robot) > 0; }

TimeMs NetControl::handover_remaining_ms(const NodeId& robot) const {
  const auto it = attachment_.handover_until.find(robot);
  if (it == attachment_.handover_until.end()) return 0;
  return std::max<TimeMs>(0, it->second - now_);
}

TimeMs NetControl::deploy_delay_ms(const VnfId& v) const {
  const auto it = config_.deploy_ms.find(v);
  return it == config_.deploy_ms.end() ? config_.default_deploy_ms : it->second;
}

void NetControl::commit_placement(const VnfId& v, const NodeId& n) {
  for (auto it = placements_.node_map.begin(); it != placements_.node_map.end();) {
    it->second.erase(v);
    it = it->second.empty() && it->first != n ? placements_.node_map.erase(it) : std::next(it);
  }
  placements_.node_map[n].insert(v);
}

namespace {

void require_host_kind(const HardwareGraph& graph, const NodeId& n) {
  const NodeKind kind = graph.node(n).kind;
  if (kind == NodeKind::Switch) throw Error(ErrorCode::WrongKind, n.str() + " is a switch and cannot host VNFs");
}

}  // namespace

void NetControl::place_vnf_now(const VnfId& v, const NodeId& n) {
  if (v.empty()) throw Error(ErrorCode::InvalidArgument, "empty VNF id");
  require_host_kind(graph_, n);
  pending_.erase(v);
  commit_placement(v, n);
  repair_virtual_links();
}

void NetControl::place_vnf(const VnfId& v, const NodeId& n) {
  if (v.empty()) throw Error(ErrorCode::InvalidArgument, "empty VNF id");
  require_host_kind(graph_, n);
  const auto host = host_of(v);
  const auto pending = pending_.find(v);
  if (pending != pending_.end() && pending->second.target == n) return;
  if (host && *host == n) {
    // Re-targeting back to the live host cancels any in-flight migration.
    if (pending != pending_.end()) pending_.erase(pending);
    return;
  }
  const TimeMs delay = deploy_delay_ms(v);
  if (delay == 0) {
    pending_.erase(v);
    commit_placement(v, n);
    repair_virtual_links();
    return;
  }
  // The previous instance keeps serving until the new one is up.
  pending_[v] = PendingDeployment{v, n, now_ + delay};
}

void NetControl::place_vl(const VnfId& from, const VnfId& to, const std::vector<NodeId>& hops) {
  if (hops.empty()) throw Error(ErrorCode::BrokenPath, "empty path");
  for (std::size_t i = 1; i < hops.size(); ++i) {
    if (!graph_.has_link(hops[i - 1], hops[i])) {
      throw Error(ErrorCode::BrokenPath, "no link " + hops[i - 1].str() + " -> " + hops[i].str());
    }
  }
  const auto from_host = host_of(from);
  const auto to_host = host_of(to);
  if (!from_host || !to_host || hops.front() != *from_host || hops.back() != *to_host) {
    throw Error(ErrorCode::EndpointMismatch, "path endpoints do not host " + from.str() + " and " + to.str());
  }
  placements_.link_map[{from, to}] = hops;
}

void NetControl::repair_virtual_links() {
  // Attachment changes and migrations invalidate VL paths; the VIM re-routes
  // them along the current shortest path, or drops them when unreachable.
  for (auto it = placements_.link_map.begin(); it != placements_.link_map.end();) {
    const auto from_host = host_of(it->first.from);
    const auto to_host = host_of(it->first.to);
    auto& hops = it->second;
    bool valid = from_host && to_host && hops.front() == *from_host && hops.back() == *to_host;
    for (std::size_t i = 1; valid && i < hops.size(); ++i) valid = graph_.has_link(hops[i - 1], hops[i]);
    if (valid) {
      ++it;
      continue;
    }
    if (from_host && to_host) {
      try {
        hops = graph_.shortest_effective_delay_path(*from_host, *to_host).path;
        ++it;
        continue;
      } catch (const Error&) {
      }
    }
    it = placements_.link_map.erase(it);
  }
}

double NetControl::path_link_delay(const std::vector<NodeId>& hops) const {
  double total = 0.0;
  for (std::size_t i = 1; i < hops.size(); ++i) total += graph_.metrics(hops[i - 1], hops[i]).effective_delay_ms();
  return total;
}

ServiceTime NetControl::service_time(const NodeId& robot, const VnfId& v) const {
  if (!attachment(robot)) throw Error(ErrorCode::Unattached, robot.str());
  const auto host = host_of(v);
  if (!host) throw Error(ErrorCode::VnfNotPlaced, v.str());
  const PathResult path = graph_.shortest_effective_delay_path(robot, *host);
  const NodeAttrs& host_attrs = graph_.node(*host);
  const double proc = host_attrs.kind == NodeKind::Server ? host_attrs.proc_delay_ms : 0.0;
  ServiceTime st;
  st.steady_ms = 2.0 * path_link_delay(path.path) + proc;
  st.handover_remaining_ms = static_cast<double>(handover_remaining_ms(robot));
  return st;
}

double NetControl::predict_service_time(const NodeId& robot, Vec2 position, const NodeId& ru,
                                        const NodeId& host) const {
  const NodeAttrs& ru_attrs = require_kind(ru, NodeKind::RadioUnit);
  const auto& radio = config_.radio;
  double wireless = radio.wireless_delay_ms(radio.rssi_dbm(distance(position, ru_attrs.position)));
  if (graph_.has_link(robot, ru)) wireless *= graph_.metrics(robot, ru).psi;
  const PathResult path = graph_.shortest_effective_delay_path(ru, host);
  const NodeAttrs& host_attrs = graph_.node(host);
  const double proc = host_attrs.kind == NodeKind::Server ? host_attrs.proc_delay_ms : 0.0;
  return 2.0 * (wireless + path_link_delay(path.path)) + proc;
}

}  // namespace cotorra
