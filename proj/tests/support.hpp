#pragma once

// Test-only helpers: small graph builders, hand-rolled random generators and
// brute-force oracles that share no code with the library algorithms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cotorra/error.hpp"
#include "cotorra/hw_graph.hpp"
#include "cotorra/types.hpp"

namespace testing {

using cotorra::HardwareGraph;
using cotorra::LinkMetrics;
using cotorra::NodeAttrs;
using cotorra::NodeId;
using cotorra::NodeKind;
using cotorra::Vec2;

// Error code raised by `f`, or empty when it returns normally.
inline std::optional<cotorra::ErrorCode> code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const cotorra::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline NodeAttrs server(double proc_ms = 0.0) {
  NodeAttrs a;
  a.kind = NodeKind::Server;
  a.proc_delay_ms = proc_ms;
  return a;
}

inline NodeAttrs switch_node() {
  NodeAttrs a;
  a.kind = NodeKind::Switch;
  return a;
}

inline NodeAttrs radio_unit(Vec2 pos, std::string domain = {}) {
  NodeAttrs a;
  a.kind = NodeKind::RadioUnit;
  a.position = pos;
  a.domain = std::move(domain);
  return a;
}

inline NodeAttrs robot_node(Vec2 pos) {
  NodeAttrs a;
  a.kind = NodeKind::Robot;
  a.position = pos;
  return a;
}

inline LinkMetrics wired(double d_ms, double lambda = 10000.0) { return LinkMetrics{d_ms, lambda, 1.0, 1.0}; }

// Seeded generator with the handful of draws the property tests need.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

struct RandomGraph {
  HardwareGraph graph;
  std::vector<NodeId> ids;
};

// Up to `max_nodes` switches/servers with random sparse wiring. Delays are
// drawn from a small integer grid so that equal-cost ties actually occur.
inline RandomGraph random_graph(Gen& g, int max_nodes = 8) {
  RandomGraph rg;
  const int n = g.integer(2, max_nodes);
  const double density = g.uniform(0.2, 0.8);
  for (int i = 0; i < n; ++i) {
    const NodeId id = std::string(1, static_cast<char>('a' + i));
    rg.ids.push_back(id);
    rg.graph.add_node(id, g.coin(0.3) ? server(static_cast<double>(g.integer(0, 3))) : switch_node());
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!g.coin(density)) continue;
      LinkMetrics m = wired(static_cast<double>(g.integer(0, 4)) * 0.5);
      if (g.coin(0.3)) m.psi = 1.0 + static_cast<double>(g.integer(0, 4)) * 0.25;
      rg.graph.add_link(rg.ids[i], rg.ids[j], m);
    }
  }
  return rg;
}

struct OraclePath {
  std::vector<NodeId> path;
  double delay_ms = std::numeric_limits<double>::infinity();
};

// Exhaustive simple-path enumeration. The best path minimizes delay, with
// exact-equal delays resolved by lexicographic order of the id sequence.
inline std::optional<OraclePath> brute_force_path(const HardwareGraph& g, const NodeId& src, const NodeId& dst) {
  std::optional<OraclePath> best;
  std::vector<NodeId> stack{src};
  std::function<void(double)> walk = [&](double acc) {
    const NodeId at = stack.back();
    if (at == dst) {
      double total = acc;
      // Identity queries cost nothing; otherwise a server destination adds its processing delay.
      if (stack.size() > 1 && g.node(dst).kind == NodeKind::Server) total += g.node(dst).proc_delay_ms;
      if (!best || total < best->delay_ms || (total == best->delay_ms && stack < best->path)) {
        best = OraclePath{stack, total};
      }
      return;
    }
    for (const auto& [key, link] : g.links()) {
      if (!key.touches(at)) continue;
      const NodeId next = key.other(at);
      if (std::find(stack.begin(), stack.end(), next) != stack.end()) continue;
      stack.push_back(next);
      walk(acc + link.metrics.psi * link.metrics.d_ms);
      stack.pop_back();
    }
  };
  walk(0.0);
  return best;
}

// Position after travelling `s` meters along a polyline, computed from the
// cumulative segment lengths rather than by stepping.
inline Vec2 point_at_arclength(const std::vector<Vec2>& pts, double s) {
  double walked = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double dx = pts[i].x - pts[i - 1].x;
    const double dy = pts[i].y - pts[i - 1].y;
    const double len = std::sqrt(dx * dx + dy * dy);
    if (s <= walked + len) {
      const double f = (s - walked) / len;
      return {pts[i - 1].x + f * dx, pts[i - 1].y + f * dy};
    }
    walked += len;
  }
  return pts.back();
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("cotorra_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace testing
