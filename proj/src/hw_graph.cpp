#include "cotorra/hw_graph.hpp"

#include <algorithm>
#include <limits>

#include "cotorra/error.hpp"

namespace cotorra {

std::string_view to_string(NodeKind kind) noexcept {
  switch (kind) {
    case NodeKind::Robot: return "Robot";
    case NodeKind::RadioUnit: return "RadioUnit";
    case NodeKind::Switch: return "Switch";
    case NodeKind::Server: return "Server";
  }
  return "Unknown";
}

std::optional<NodeKind> parse_node_kind(std::string_view text) noexcept {
  if (text == "Robot") return NodeKind::Robot;
  if (text == "RadioUnit") return NodeKind::RadioUnit;
  if (text == "Switch") return NodeKind::Switch;
  if (text == "Server") return NodeKind::Server;
  return std::nullopt;
}

NodeId HardwareGraph::add_node(const NodeId& id, NodeAttrs attrs) {
  if (id.empty()) throw Error(ErrorCode::InvalidArgument, "empty node id");
  if (nodes_.contains(id)) throw Error(ErrorCode::DuplicateId, id.str());
  if (attrs.kind != NodeKind::Server && attrs.proc_delay_ms != 0.0) {
    throw Error(ErrorCode::InvalidArgument, "proc_delay_ms is only meaningful on servers: " + id.str());
  }
  if (!(attrs.proc_delay_ms >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "negative proc_delay_ms on " + id.str());
  }
  nodes_.emplace(id, std::move(attrs));
  adjacency_[id];
  return id;
}

void HardwareGraph::require_node(const NodeId& id) const {
  if (!nodes_.contains(id)) throw Error(ErrorCode::UnknownNode, id.str());
}

void HardwareGraph::add_link(const NodeId& a, const NodeId& b, LinkMetrics metrics, LinkMedium medium) {
  require_node(a);
  require_node(b);
  if (a == b) throw Error(ErrorCode::SelfLoop, a.str());
  LinkKey key(a, b);
  if (links_.contains(key)) throw Error(ErrorCode::DuplicateLink, key.str());
  if (!(metrics.d_ms >= 0.0) || !(metrics.lambda_mbps >= 0.0) || !(metrics.psi >= 1.0) ||
      !(metrics.delta >= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "invalid metrics on " + key.str());
  }
  if (medium == LinkMedium::Wireless) {
    const NodeKind ka = nodes_.at(a).kind;
    const NodeKind kb = nodes_.at(b).kind;
    const bool robot_ru = (ka == NodeKind::Robot && kb == NodeKind::RadioUnit) ||
                          (ka == NodeKind::RadioUnit && kb == NodeKind::Robot);
    if (!robot_ru) throw Error(ErrorCode::WrongKind, "wireless link must join a robot and a radio unit");
    const NodeId& robot = ka == NodeKind::Robot ? a : b;
    for (const auto& n : adjacency_.at(robot)) {
      if (links_.at(LinkKey(robot, n)).medium == LinkMedium::Wireless) {
        throw Error(ErrorCode::DuplicateLink, "robot already has a wireless link: " + robot.str());
      }
    }
  }
  links_.emplace(key, Link{key, metrics, medium});
  auto insert_sorted = [](std::vector<NodeId>& v, const NodeId& id) {
    v.insert(std::lower_bound(v.begin(), v.end(), id), id);
  };
  insert_sorted(adjacency_[a], b);
  insert_sorted(adjacency_[b], a);
}

void HardwareGraph::remove_link(const NodeId& a, const NodeId& b) {
  const auto it = links_.find(LinkKey(a, b));
  if (it == links_.end()) throw Error(ErrorCode::UnknownLink, LinkKey(a, b).str());
  links_.erase(it);
  std::erase(adjacency_[a], b);
  std::erase(adjacency_[b], a);
}

bool HardwareGraph::has_link(const NodeId& a, const NodeId& b) const {
  return a != b && links_.contains(LinkKey(a, b));
}

const NodeAttrs& HardwareGraph::node(const NodeId& id) const {
  const auto it = nodes_.find(id);
  if (it == nodes_.end()) throw Error(ErrorCode::UnknownNode, id.str());
  return it->second;
}

const Link& HardwareGraph::link(const NodeId& a, const NodeId& b) const {
  const auto it = links_.find(LinkKey(a, b));
  if (it == links_.end()) throw Error(ErrorCode::UnknownLink, LinkKey(a, b).str());
  return it->second;
}

LinkMetrics& HardwareGraph::metrics(const NodeId& a, const NodeId& b) {
  const auto it = links_.find(LinkKey(a, b));
  if (it == links_.end()) throw Error(ErrorCode::UnknownLink, LinkKey(a, b).str());
  return it->second.metrics;
}

const LinkMetrics& HardwareGraph::metrics(const NodeId& a, const NodeId& b) const {
  return link(a, b).metrics;
}

void HardwareGraph::set_position(const NodeId& robot, Vec2 position) {
  const auto it = nodes_.find(robot);
  if (it == nodes_.end()) throw Error(ErrorCode::UnknownNode, robot.str());
  if (it->second.kind != NodeKind::Robot) throw Error(ErrorCode::WrongKind, robot.str() + " is not a robot");
  it->second.position = position;
}

void HardwareGraph::set_proc_delay(const NodeId& server, double proc_delay_ms) {
  const auto it = nodes_.find(server);
  if (it == nodes_.end()) throw Error(ErrorCode::UnknownNode, server.str());
  if (it->second.kind != NodeKind::Server) throw Error(ErrorCode::WrongKind, server.str() + " is not a server");
  if (!(proc_delay_ms >= 0.0)) throw Error(ErrorCode::InvalidArgument, "negative proc_delay_ms");
  it->second.proc_delay_ms = proc_delay_ms;
}

std::vector<NodeId> HardwareGraph::nodes_of_kind(NodeKind kind) const {
  std::vector<NodeId> out;
  for (const auto& [id, attrs] : nodes_) {
    if (attrs.kind == kind) out.push_back(id);
  }
  return out;
}

std::vector<NodeId> HardwareGraph::neighbors(const NodeId& id) const {
  require_node(id);
  return adjacency_.at(id);
}

PathResult HardwareGraph::shortest_effective_delay_path(const NodeId& src, const NodeId& dst) const {
  require_node(src);
  require_node(dst);
  if (src == dst) return {{src}, 0.0};

  // Label-setting search where a label is (delay, node sequence). Extending
  // two simple paths ending at the same node by the same hop preserves their
  // lexicographic order, so settled labels stay optimal under the tie rule.
  struct Label {
    double delay = std::numeric_limits<double>::infinity();
    std::vector<NodeId> path;
    bool settled = false;
  };
  auto better = [](double d, const std::vector<NodeId>& p, const Label& l) {
    if (d != l.delay) return d < l.delay;
    return p < l.path;
  };

  std::map<NodeId, Label> labels;
  for (const auto& [id, attrs] : nodes_) labels[id];
  labels[src].delay = 0.0;
  labels[src].path = {src};

  while (true) {
    Label* current = nullptr;
    const NodeId* current_id = nullptr;
    for (auto& [id, label] : labels) {
      if (label.settled || label.path.empty()) continue;
      if (current == nullptr || better(label.delay, label.path, *current)) {
        current = &label;
        current_id = &id;
      }
    }
    if (current == nullptr) break;
    current->settled = true;
    if (*current_id == dst) break;

    for (const auto& next : adjacency_.at(*current_id)) {
      Label& target = labels[next];
      if (target.settled) continue;
      const double d = current->delay + links_.at(LinkKey(*current_id, next)).metrics.effective_delay_ms();
      std::vector<NodeId> p = current->path;
      p.push_back(next);
      if (target.path.empty() || better(d, p, target)) {
        target.delay = d;
        target.path = std::move(p);
      }
    }
  }

  Label& result = labels[dst];
  if (!result.settled) throw Error(ErrorCode::Unreachable, src.str() + " -> " + dst.str());
  double delay = result.delay;
  const NodeAttrs& dst_attrs = nodes_.at(dst);
  if (dst_attrs.kind == NodeKind::Server) delay += dst_attrs.proc_delay_ms;
  return {std::move(result.path), delay};
}

void HardwareGraph::check_invariants() const {
  std::map<NodeId, int> wireless_per_robot;
  for (const auto& [key, link] : links_) {
    if (key.first() == key.second()) throw Error(ErrorCode::InvalidArgument, "self loop " + key.str());
    if (!nodes_.contains(key.first()) || !nodes_.contains(key.second())) {
      throw Error(ErrorCode::InvalidArgument, "dangling link " + key.str());
    }
    if (!(link.metrics.psi >= 1.0) || !(link.metrics.delta >= 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "shaping factor below 1 on " + key.str());
    }
    if (link.medium == LinkMedium::Wireless) {
      const NodeKind ka = nodes_.at(key.first()).kind;
      const NodeKind kb = nodes_.at(key.second()).kind;
      if (!((ka == NodeKind::Robot && kb == NodeKind::RadioUnit) ||
            (ka == NodeKind::RadioUnit && kb == NodeKind::Robot))) {
        throw Error(ErrorCode::InvalidArgument, "wireless link not robot<->RU: " + key.str());
      }
      const NodeId& robot = ka == NodeKind::Robot ? key.first() : key.second();
      if (++wireless_per_robot[robot] > 1) {
        throw Error(ErrorCode::InvalidArgument, "robot with two wireless links: " + robot.str());
      }
    }
  }
  for (const auto& [id, attrs] : nodes_) {
    if (attrs.kind != NodeKind::Server && attrs.proc_delay_ms != 0.0) {
      throw Error(ErrorCode::InvalidArgument, "non-server with proc delay: " + id.str());
    }
  }
}

}  // namespace cotorra
