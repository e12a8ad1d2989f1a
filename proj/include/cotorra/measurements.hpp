#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cotorra/link_metrics.hpp"
#include "cotorra/net_control.hpp"
#include "cotorra/robot_sim.hpp"
#include "cotorra/types.hpp"

namespace cotorra {

// One timestamped entry of the embeddings history. The attachment and sensor
// streams are kept next to kappa so the embedding can be re-derived offline.
struct HistorySnapshot {
  TimeMs t_ms = 0;
  std::map<NodeId, ContextEmbedding> kappa;
  std::map<NodeId, std::optional<NodeId>> attachment;
  std::map<NodeId, SensorVector> sensors;
  PlacementMap placements;
  std::map<LinkKey, double> link_delays;       // effective, ms
  std::map<LinkKey, double> link_throughputs;  // effective, Mbps
  std::map<NodeId, RuContext> ru_contexts;
};

struct ServiceSample {
  TimeMs t_ms = 0;
  NodeId robot;
  std::optional<NodeId> attached_ru;
  std::optional<NodeId> vnf_host;
  std::optional<double> service_ms;
  double steady_ms = 0.0;
  double handover_remaining_ms = 0.0;
};

struct FederationEvent {
  TimeMs t_ms = 0;
  std::string event;
  std::string actor;
  std::string detail;
};

struct InstructionRecord {
  TimeMs t_ms = 0;
  std::string plugin;
  std::string instruction;
  std::string outcome;  // "applied", "rejected" or "panic"
  std::string detail;
};

enum class Selector { Kappa, Placements, Delays, Throughputs, RuContexts };

Selector parse_selector(std::string_view name);

using Projection = std::variant<std::map<NodeId, ContextEmbedding>, PlacementMap, std::map<LinkKey, double>,
                                std::map<NodeId, RuContext>>;

struct SeriesPoint {
  TimeMs t_ms = 0;
  Projection value;
};

struct ExportCounts {
  std::size_t snapshot_rows = 0;
  std::size_t service_rows = 0;
  std::size_t federation_rows = 0;
  std::size_t instruction_rows = 0;
};

inline constexpr std::string_view kSnapshotsHeader = "t_ms,entity_kind,entity_id,metric,value";
inline constexpr std::string_view kServiceTimeHeader = "t_ms,robot,attached_ru,vnf_host,service_ms";
inline constexpr std::string_view kFederationHeader = "t_ms,event,actor,detail";
inline constexpr std::string_view kInstructionsHeader = "t_ms,plugin,instruction,outcome,detail";

// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

/// Append-only store for the embeddings history and the per-run traces.
class Measurements {
 public:
  void set_ru_universe(std::vector<NodeId> rus) { ru_universe_ = std::move(rus); }
  const std::vector<NodeId>& ru_universe() const noexcept { return ru_universe_; }

  void record(HistorySnapshot snapshot);
  void record_service(ServiceSample sample);
  void record_federation(FederationEvent event);
  void record_instruction(InstructionRecord record);

  std::span<const HistorySnapshot> snapshots() const noexcept { return snapshots_; }
  std::span<const ServiceSample> service_samples() const noexcept { return service_; }
  std::span<const FederationEvent> federation_events() const noexcept { return federation_; }
  std::span<const InstructionRecord> instruction_log() const noexcept { return instructions_; }
  std::optional<TimeMs> last_time() const;

  /// Snapshots with from_ms <= t < to_ms projected onto one embedding family,
  /// optionally narrowed to a single node or link ("a--b").
  std::vector<SeriesPoint> query(TimeMs from_ms, TimeMs to_ms, Selector selector,
                                 const std::optional<std::string>& entity = std::nullopt) const;

  // Writes snapshots.csv, service_time.csv, federation.csv and
  // instructions.csv into `dir`.
  ExportCounts export_csv(const std::filesystem::path& dir) const;

 private:
  std::vector<NodeId> ru_universe_;
  std::vector<HistorySnapshot> snapshots_;
  std::vector<ServiceSample> service_;
  std::vector<FederationEvent> federation_;
  std::vector<InstructionRecord> instructions_;
};

}  // namespace cotorra
