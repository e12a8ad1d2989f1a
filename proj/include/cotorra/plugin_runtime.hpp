#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cotorra/error.hpp"
#include "cotorra/hw_graph.hpp"
#include "cotorra/measurements.hpp"
#include "cotorra/net_control.hpp"
#include "cotorra/robot_sim.hpp"

namespace cotorra {

struct MoveInstruction {
  NodeId robot;
  double speed = 0.0;
};
struct HandoverInstruction {
  NodeId robot;
  NodeId ru;
};
struct PlaceVnfInstruction {
  VnfId vnf;
  NodeId node;
};
struct PlaceVlInstruction {
  VnfId from;
  VnfId to;
  std::vector<NodeId> hops;
};
struct EmulateInstruction {
  NodeId a;
  NodeId b;
  double psi = 1.0;
  double delta = 1.0;
};

using Instruction =
    std::variant<MoveInstruction, HandoverInstruction, PlaceVnfInstruction, PlaceVlInstruction, EmulateInstruction>;

std::string instruction_kind(const Instruction& instruction);
// Compact text form used in the instruction log, e.g. "Handover(robot1;R2)".
std::string describe(const Instruction& instruction);

/// What a plug-in may see during a tick. Every accessor is a read; the one
/// exception is the localization service, whose draws advance a per-robot
/// counter but cannot change simulated state.
class WorldView {
 public:
  WorldView(TimeMs now, const HardwareGraph& graph, const NetControl& net, RobotSim& robots,
            const Measurements& history)
      : now_(now), graph_(graph), net_(net), robots_(robots), history_(history) {}

  TimeMs now() const noexcept { return now_; }
  const HardwareGraph& graph() const noexcept { return graph_; }
  const NetControl& net() const noexcept { return net_; }
  const RobotSim& robots() const noexcept { return robots_; }
  const Measurements& history() const noexcept { return history_; }
  const std::vector<NodeId>& ru_universe() const noexcept { return history_.ru_universe(); }

  LocalizationSample sample_localization(const NodeId& robot) const { return robots_.sample_localization(robot); }
  ContextEmbedding context_embedding(const NodeId& robot) const {
    return robots_.build_context_embedding(robot, ru_universe(), net_.attachment(robot));
  }

 private:
  TimeMs now_;
  const HardwareGraph& graph_;
  const NetControl& net_;
  RobotSim& robots_;
  const Measurements& history_;
};

struct PluginOutput {
  std::vector<Instruction> instructions;
  std::vector<FederationEvent> events;
};

class Plugin {
 public:
  virtual ~Plugin() = default;
  virtual std::string name() const = 0;
  virtual PluginOutput on_tick(const WorldView& view) = 0;
};

struct PluginHandle {
  std::string name;
  std::size_t order = 0;
};

struct AppliedInstruction {
  std::string plugin;
  Instruction instruction;
  std::optional<ErrorCode> error;  // empty when applied
  std::string message;
  bool applied() const { return !error.has_value(); }
};

struct PluginPanicRecord {
  std::string plugin;
  std::string message;
};

struct DispatchResult {
  std::vector<AppliedInstruction> instructions;
  std::vector<FederationEvent> events;
  std::vector<PluginPanicRecord> panics;
};

/// Runs plug-ins once per tick in registration order. All plug-ins observe
/// the same pre-tick state; their instructions are applied afterwards in
/// (registration, emission) order, so a later plug-in wins any conflict.
class PluginRuntime {
 public:
  using Applier = std::function<void(const Instruction&)>;

  PluginHandle register_plugin(std::unique_ptr<Plugin> plugin);
  DispatchResult tick_dispatch(const WorldView& view, const Applier& apply);

  std::vector<PluginHandle> plugins() const;
  Plugin* find(const std::string& name) const;
  bool quarantined(const std::string& name) const;

 private:
  struct Entry {
    std::unique_ptr<Plugin> plugin;
    std::string name;
    bool quarantined = false;
  };
  std::vector<Entry> entries_;
};

}  // namespace cotorra
