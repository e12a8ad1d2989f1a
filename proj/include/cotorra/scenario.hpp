#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cotorra/hw_graph.hpp"
#include "cotorra/net_control.hpp"
#include "cotorra/robot_sim.hpp"

namespace cotorra {

struct NodeSpec {
  NodeId id;
  NodeAttrs attrs;
};

struct LinkSpec {
  NodeId a;
  NodeId b;
  LinkMetrics metrics;
};

struct RobotSpec {
  NodeId id;
  Trajectory trajectory;
  LocalizationModel localization;
  std::optional<NodeId> initial_ru;
  std::string domain;
};

struct PlacementSpec {
  VnfId vnf;
  NodeId node;
};

struct VirtualLinkSpec {
  VnfId from;
  VnfId to;
  std::vector<NodeId> path;
};

struct ServiceSpec {
  NodeId robot;
  VnfId vnf;
};

struct ScenarioConfig {
  std::string name;
  std::uint64_t seed = 1;
  TimeMs tick_ms = 100;
  double duration_s = 120.0;
  double target_ms = 15.0;
  NetControlConfig net;
  std::vector<NodeSpec> nodes;
  std::vector<LinkSpec> links;
  std::vector<RobotSpec> robots;
  std::vector<PlacementSpec> placements;
  std::vector<VirtualLinkSpec> virtual_links;
  std::vector<ServiceSpec> services;
  std::map<std::string, nlohmann::json> plugins;  // parameter table per plug-in
  std::vector<std::string> enabled_plugins;

  TimeMs duration_ms() const;
  std::uint64_t tick_count() const;
};

// Plug-in names the runtime knows how to build from a parameter table.
std::vector<std::string> available_plugins();

nlohmann::json read_scenario_document(const std::filesystem::path& path);

// Sets a dotted key ("radio.eta", "nodes.3.proc_delay_ms") to `value`, which
// is parsed as JSON when possible and taken as a string otherwise.
void apply_override(nlohmann::json& document, const std::string& assignment);

// Validates the whole document, naming the offending field on failure.
ScenarioConfig parse_scenario(const nlohmann::json& document);

ScenarioConfig load_scenario(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

}  // namespace cotorra
