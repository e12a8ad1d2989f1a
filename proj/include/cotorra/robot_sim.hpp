#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "cotorra/types.hpp"

namespace cotorra {

// Sensor layout [pos_x m, pos_y m, speed m/s, heading rad]. The position
// components are what plug-ins use for navigation.
struct SensorVector {
  static constexpr std::size_t kSize = 4;

  double pos_x = 0.0;
  double pos_y = 0.0;
  double speed = 0.0;
  double heading = 0.0;  // [-pi, pi)

  Vec2 position() const { return {pos_x, pos_y}; }
  std::vector<double> values() const { return {pos_x, pos_y, speed, heading}; }
  friend bool operator==(const SensorVector&, const SensorVector&) = default;
};

// Attachment indicators over the run's radio units followed by the sensors.
struct ContextEmbedding {
  std::vector<double> attachment;  // one-hot or all zero, length N
  SensorVector sensors;

  std::size_t size() const { return attachment.size() + SensorVector::kSize; }
  std::vector<double> flatten() const;
  friend bool operator==(const ContextEmbedding&, const ContextEmbedding&) = default;
};

struct Trajectory {
  std::vector<Vec2> waypoints;
  double cruise_speed = 0.5;  // m/s
};

struct LocalizationModel {
  double sigma = 0.0;  // per-axis std of the position estimate, meters
};

struct LocalizationSample {
  Vec2 estimate;
  double sigma = 0.0;
};

double wrap_heading(double radians);

/// Constant-speed polyline following for a set of wheeled robots, plus a
/// seeded Gaussian localization service.
class RobotSim {
 public:
  explicit RobotSim(std::uint64_t seed) : seed_(seed) {}

  void add_robot(const NodeId& robot, Trajectory trajectory, LocalizationModel localization);
  bool has_robot(const NodeId& robot) const { return robots_.contains(robot); }
  std::vector<NodeId> robots() const;

  SensorVector step(const NodeId& robot, double dt_s);
  void set_velocity(const NodeId& robot, double speed);
  SensorVector sensors(const NodeId& robot) const;
  bool finished(const NodeId& robot) const;

  // Draw k for a robot depends only on (seed, robot registration index, k).
  LocalizationSample sample_localization(const NodeId& robot);
  std::uint64_t localization_draws(const NodeId& robot) const;

  ContextEmbedding build_context_embedding(const NodeId& robot, std::span<const NodeId> ru_universe,
                                           const std::optional<NodeId>& attached_ru) const;

 private:
  struct State {
    std::size_t index = 0;  // registration order, feeds the RNG stream
    Trajectory trajectory;
    LocalizationModel localization;
    Vec2 position;
    std::size_t segment = 0;  // heading toward waypoints[segment + 1]
    double heading = 0.0;
    bool done = false;
    std::uint64_t draws = 0;
  };

  State& state(const NodeId& robot);
  const State& state(const NodeId& robot) const;

  std::uint64_t seed_;
  std::map<NodeId, State> robots_;
};

}  // namespace cotorra
