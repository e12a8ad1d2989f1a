#include "cotorra/measurements.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cotorra/error.hpp"

namespace cotorra {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";  // folds -0 as well
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw Error(ErrorCode::InvalidArgument, "unformattable number");
  return std::string(buf, end);
}

Selector parse_selector(std::string_view name) {
  if (name == "kappa") return Selector::Kappa;
  if (name == "placements") return Selector::Placements;
  if (name == "delays") return Selector::Delays;
  if (name == "throughputs") return Selector::Throughputs;
  if (name == "ru_contexts") return Selector::RuContexts;
  throw Error(ErrorCode::UnknownSelector, std::string(name));
}

std::optional<TimeMs> Measurements::last_time() const {
  if (snapshots_.empty()) return std::nullopt;
  return snapshots_.back().t_ms;
}

void Measurements::record(HistorySnapshot snapshot) {
  if (!snapshots_.empty() && snapshot.t_ms <= snapshots_.back().t_ms) {
    throw Error(ErrorCode::NonMonotonicTime,
                "t=" + std::to_string(snapshot.t_ms) + " after t=" + std::to_string(snapshots_.back().t_ms));
  }
  snapshots_.push_back(std::move(snapshot));
}

void Measurements::record_service(ServiceSample sample) { service_.push_back(std::move(sample)); }
void Measurements::record_federation(FederationEvent event) { federation_.push_back(std::move(event)); }
void Measurements::record_instruction(InstructionRecord record) { instructions_.push_back(std::move(record)); }

namespace {

template <typename Map>
Map filter_by_node(const Map& in, const std::optional<std::string>& entity) {
  if (!entity) return in;
  Map out;
  const auto it = in.find(NodeId(*entity));
  if (it != in.end()) out.insert(*it);
  return out;
}

std::map<LinkKey, double> filter_by_link(const std::map<LinkKey, double>& in,
                                         const std::optional<std::string>& entity) {
  if (!entity) return in;
  std::map<LinkKey, double> out;
  const auto sep = entity->find("--");
  if (sep == std::string::npos) return out;
  const LinkKey key(NodeId(entity->substr(0, sep)), NodeId(entity->substr(sep + 2)));
  const auto it = in.find(key);
  if (it != in.end()) out.insert(*it);
  return out;
}

PlacementMap filter_placements(const PlacementMap& in, const std::optional<std::string>& entity) {
  if (!entity) return in;
  const NodeId node(*entity);
  PlacementMap out;
  const auto it = in.node_map.find(node);
  if (it != in.node_map.end()) out.node_map.insert(*it);
  for (const auto& [vl, hops] : in.link_map) {
    if (std::find(hops.begin(), hops.end(), node) != hops.end()) out.link_map.emplace(vl, hops);
  }
  return out;
}

}  // namespace

std::vector<SeriesPoint> Measurements::query(TimeMs from_ms, TimeMs to_ms, Selector selector,
                                             const std::optional<std::string>& entity) const {
  if (from_ms > to_ms) throw Error(ErrorCode::BadRange, std::to_string(from_ms) + " > " + std::to_string(to_ms));
  std::vector<SeriesPoint> out;
  for (const auto& s : snapshots_) {
    if (s.t_ms < from_ms || s.t_ms >= to_ms) continue;
    switch (selector) {
      case Selector::Kappa: out.push_back({s.t_ms, filter_by_node(s.kappa, entity)}); break;
      case Selector::Placements: out.push_back({s.t_ms, filter_placements(s.placements, entity)}); break;
      case Selector::Delays: out.push_back({s.t_ms, filter_by_link(s.link_delays, entity)}); break;
      case Selector::Throughputs: out.push_back({s.t_ms, filter_by_link(s.link_throughputs, entity)}); break;
      case Selector::RuContexts: out.push_back({s.t_ms, filter_by_node(s.ru_contexts, entity)}); break;
    }
  }
  return out;
}

namespace {

class CsvFile {
 public:
  CsvFile(const std::filesystem::path& path, std::string_view header) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    out_ << header << '\n';
  }

  template <typename... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    ((out_ << (first ? "" : ","), write_field(fields), first = false), ...);
    out_ << '\n';
    ++rows_;
  }

  template <typename Field>
  void write_field(const Field& field) {
    std::ostringstream text;
    text << field;
    const std::string s = text.str();
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
      out_ << s;
      return;
    }
    out_ << '"';
    for (char c : s) out_ << (c == '"' ? "\"\"" : std::string(1, c));
    out_ << '"';
  }

  std::size_t close() {
    out_.flush();
    if (!out_) throw Error(ErrorCode::IoError, "write failed: " + path_.string());
    return rows_;
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t rows_ = 0;
};

std::string join_hops(const std::vector<NodeId>& hops) {
  std::string out;
  for (const auto& h : hops) {
    if (!out.empty()) out += '|';
    out += h.str();
  }
  return out;
}

constexpr std::string_view kSensorNames[] = {"pos_x", "pos_y", "speed", "heading"};
constexpr std::string_view kRuContextNames[] = {"rssi_dbm", "tx_rate_mbps", "rx_rate_mbps", "attached_count"};

}  // namespace

ExportCounts Measurements::export_csv(const std::filesystem::path& dir) const {
  if (snapshots_.empty()) throw Error(ErrorCode::EmptyStore, "no snapshots recorded");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());

  ExportCounts counts;
  {
    CsvFile csv(dir / "snapshots.csv", kSnapshotsHeader);
    for (const auto& s : snapshots_) {
      for (const auto& [robot, k] : s.kappa) {
        for (std::size_t i = 0; i < k.attachment.size(); ++i) {
          const std::string name = i < ru_universe_.size() ? "phi:" + ru_universe_[i].str() : "phi:" + std::to_string(i);
          csv.row(s.t_ms, "robot", robot, name, format_number(k.attachment[i]));
        }
        const auto values = k.sensors.values();
        for (std::size_t i = 0; i < values.size(); ++i) {
          csv.row(s.t_ms, "robot", robot, kSensorNames[i], format_number(values[i]));
        }
      }
      for (const auto& [node, vnfs] : s.placements.node_map) {
        for (const auto& v : vnfs) csv.row(s.t_ms, "node", node, "vnf", v);
      }
      for (const auto& [vl, hops] : s.placements.link_map) {
        csv.row(s.t_ms, "vl", vl.from.str() + "->" + vl.to.str(), "path", join_hops(hops));
      }
      for (const auto& [key, d] : s.link_delays) csv.row(s.t_ms, "link", key.str(), "eff_delay_ms", format_number(d));
      for (const auto& [key, l] : s.link_throughputs) {
        csv.row(s.t_ms, "link", key.str(), "eff_throughput_mbps", format_number(l));
      }
      for (const auto& [ru, ctx] : s.ru_contexts) {
        const auto values = ctx.values();
        for (std::size_t i = 0; i < values.size(); ++i) {
          csv.row(s.t_ms, "ru", ru, kRuContextNames[i], format_number(values[i]));
        }
      }
    }
    counts.snapshot_rows = csv.close();
  }
  {
    CsvFile csv(dir / "service_time.csv", kServiceTimeHeader);
    for (const auto& s : service_) {
      csv.row(s.t_ms, s.robot, s.attached_ru ? s.attached_ru->str() : "", s.vnf_host ? s.vnf_host->str() : "",
              s.service_ms ? format_number(*s.service_ms) : "");
    }
    counts.service_rows = csv.close();
  }
  {
    CsvFile csv(dir / "federation.csv", kFederationHeader);
    for (const auto& e : federation_) csv.row(e.t_ms, e.event, e.actor, e.detail);
    counts.federation_rows = csv.close();
  }
  {
    CsvFile csv(dir / "instructions.csv", kInstructionsHeader);
    for (const auto& r : instructions_) csv.row(r.t_ms, r.plugin, r.instruction, r.outcome, r.detail);
    counts.instruction_rows = csv.close();
  }
  return counts;
}

}  // namespace cotorra
