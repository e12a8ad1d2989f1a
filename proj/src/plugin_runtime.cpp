#include "cotorra/plugin_runtime.hpp"

#include "cotorra/measurements.hpp"

namespace cotorra {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

std::string instruction_kind(const Instruction& instruction) {
  return std::visit(Overloaded{
                        [](const MoveInstruction&) { return std::string("Move"); },
                        [](const HandoverInstruction&) { return std::string("Handover"); },
                        [](const PlaceVnfInstruction&) { return std::string("PlaceVnf"); },
                        [](const PlaceVlInstruction&) { return std::string("PlaceVl"); },
                        [](const EmulateInstruction&) { return std::string("Emulate"); },
                    },
                    instruction);
}

std::string describe(const Instruction& instruction) {
  // ';' separated so the text can sit in a CSV field unquoted.
  return std::visit(
      Overloaded{
          [](const MoveInstruction& m) { return "Move(" + m.robot.str() + ";" + format_number(m.speed) + ")"; },
          [](const HandoverInstruction& h) { return "Handover(" + h.robot.str() + ";" + h.ru.str() + ")"; },
          [](const PlaceVnfInstruction& p) { return "PlaceVnf(" + p.vnf.str() + ";" + p.node.str() + ")"; },
          [](const PlaceVlInstruction& p) {
            std::string hops;
            for (const auto& h : p.hops) hops += (hops.empty() ? "" : "|") + h.str();
            return "PlaceVl(" + p.from.str() + ";" + p.to.str() + ";" + hops + ")";
          },
          [](const EmulateInstruction& e) {
            return "Emulate(" + e.a.str() + ";" + e.b.str() + ";" + format_number(e.psi) + ";" +
                   format_number(e.delta) + ")";
          },
      },
      instruction);
}

PluginHandle PluginRuntime::register_plugin(std::unique_ptr<Plugin> plugin) {
  if (!plugin) throw Error(ErrorCode::InvalidArgument, "null plugin");
  std::string name = plugin->name();
  if (find(name) != nullptr) throw Error(ErrorCode::DuplicateName, name);
  entries_.push_back({std::move(plugin), name, false});
  return {std::move(name), entries_.size() - 1};
}

DispatchResult PluginRuntime::tick_dispatch(const WorldView& view, const Applier& apply) {
  DispatchResult result;
  std::vector<std::pair<std::string, Instruction>> queued;
  for (auto& entry : entries_) {
    if (entry.quarantined) continue;
    try {
      PluginOutput out = entry.plugin->on_tick(view);
      for (auto& i : out.instructions) queued.emplace_back(entry.name, std::move(i));
      for (auto& e : out.events) result.events.push_back(std::move(e));
    } catch (const std::exception& e) {
      entry.quarantined = true;
      result.panics.push_back({entry.name, e.what()});
    } catch (...) {
      entry.quarantined = true;
      result.panics.push_back({entry.name, "non-standard exception"});
    }
  }
  for (auto& [plugin, instruction] : queued) {
    AppliedInstruction record{plugin, instruction, std::nullopt, {}};
    try {
      apply(instruction);
    } catch (const Error& e) {
      record.error = e.code();
      record.message = e.what();
    }
    result.instructions.push_back(std::move(record));
  }
  return result;
}

std::vector<PluginHandle> PluginRuntime::plugins() const {
  std::vector<PluginHandle> out;
  for (std::size_t i = 0; i < entries_.size(); ++i) out.push_back({entries_[i].name, i});
  return out;
}

Plugin* PluginRuntime::find(const std::string& name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return e.plugin.get();
  }
  return nullptr;
}

bool PluginRuntime::quarantined(const std::string& name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return e.quarantined;
  }
  return false;
}

}  // namespace cotorra
