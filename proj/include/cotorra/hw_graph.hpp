#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cotorra/link_metrics.hpp"
#include "cotorra/types.hpp"

namespace cotorra {

enum class NodeKind { Robot, RadioUnit, Switch, Server };

std::string_view to_string(NodeKind kind) noexcept;
std::optional<NodeKind> parse_node_kind(std::string_view text) noexcept;

struct NodeAttrs {
  NodeKind kind = NodeKind::Switch;
  Vec2 position;
  double proc_delay_ms = 0.0;  // queueing/processing delay, servers only
  std::string domain;
};

enum class LinkMedium { Wired, Wireless };

struct Link {
  LinkKey endpoints;
  LinkMetrics metrics;
  LinkMedium medium = LinkMedium::Wired;
};

struct PathResult {
  std::vector<NodeId> path;
  double delay_ms = 0.0;
};

/// Hardware graph of robots, radio units, switches and servers.
///
/// Nodes and links are kept in ordered maps so every iteration (and thus
/// every exported trace) is independent of insertion order.
class HardwareGraph {
 public:
  NodeId add_node(const NodeId& id, NodeAttrs attrs);
  void add_link(const NodeId& a, const NodeId& b, LinkMetrics metrics,
                LinkMedium medium = LinkMedium::Wired);
  void remove_link(const NodeId& a, const NodeId& b);

  bool has_node(const NodeId& id) const { return nodes_.contains(id); }
  bool has_link(const NodeId& a, const NodeId& b) const;

  const NodeAttrs& node(const NodeId& id) const;
  const Link& link(const NodeId& a, const NodeId& b) const;
  LinkMetrics& metrics(const NodeId& a, const NodeId& b);
  const LinkMetrics& metrics(const NodeId& a, const NodeId& b) const;

  // Robots move; everything else is fixed at construction.
  void set_position(const NodeId& robot, Vec2 position);
  // Overrides the processing delay of a server.
  void set_proc_delay(const NodeId& server, double proc_delay_ms);

  const std::map<NodeId, NodeAttrs>& nodes() const noexcept { return nodes_; }
  const std::map<LinkKey, Link>& links() const noexcept { return links_; }
  std::vector<NodeId> nodes_of_kind(NodeKind kind) const;
  std::vector<NodeId> neighbors(const NodeId& id) const;

  /// Minimum total effective delay (psi * d per link) from src to dst, plus
  /// dst's processing delay when dst is a server. Equal-delay paths are
  /// ordered by their node-id sequence.
  PathResult shortest_effective_delay_path(const NodeId& src, const NodeId& dst) const;

  // Throws InvalidArgument describing the first violated invariant.
  void check_invariants() const;

 private:
  void require_node(const NodeId& id) const;

  std::map<NodeId, NodeAttrs> nodes_;
  std::map<LinkKey, Link> links_;
  std::map<NodeId, std::vector<NodeId>> adjacency_;
};

}  // namespace cotorra
