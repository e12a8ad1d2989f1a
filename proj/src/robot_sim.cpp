#include "cotorra/robot_sim.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "cotorra/error.hpp"

namespace cotorra {

std::vector<double> ContextEmbedding::flatten() const {
  std::vector<double> out = attachment;
  const auto s = sensors.values();
  out.insert(out.end(), s.begin(), s.end());
  return out;
}

double wrap_heading(double radians) {
  constexpr double pi = std::numbers::pi;
  double h = std::fmod(radians + pi, 2.0 * pi);
  if (h < 0.0) h += 2.0 * pi;
  h -= pi;
  if (h >= pi) h -= 2.0 * pi;
  return h;
}

namespace {

double segment_heading(Vec2 from, Vec2 to) { return wrap_heading(std::atan2(to.y - from.y, to.x - from.x)); }

}  // namespace

void RobotSim::add_robot(const NodeId& robot, Trajectory trajectory, LocalizationModel localization) {
  if (robots_.contains(robot)) throw Error(ErrorCode::DuplicateId, robot.str());
  if (trajectory.waypoints.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "trajectory needs at least 2 waypoints: " + robot.str());
  }
  for (std::size_t i = 1; i < trajectory.waypoints.size(); ++i) {
    if (trajectory.waypoints[i] == trajectory.waypoints[i - 1]) {
      throw Error(ErrorCode::InvalidArgument, "repeated consecutive waypoint on " + robot.str());
    }
  }
  if (!(trajectory.cruise_speed > 0.0) || !std::isfinite(trajectory.cruise_speed)) {
    throw Error(ErrorCode::InvalidArgument, "cruise_speed must be > 0 on " + robot.str());
  }
  if (!(localization.sigma >= 0.0) || !std::isfinite(localization.sigma)) {
    throw Error(ErrorCode::InvalidArgument, "localization sigma must be finite and >= 0");
  }
  State s;
  s.index = robots_.size();
  s.position = trajectory.waypoints.front();
  s.heading = segment_heading(trajectory.waypoints[0], trajectory.waypoints[1]);
  s.trajectory = std::move(trajectory);
  s.localization = localization;
  robots_.emplace(robot, std::move(s));
}

std::vector<NodeId> RobotSim::robots() const {
  std::vector<NodeId> out;
  for (const auto& [id, s] : robots_) out.push_back(id);
  return out;
}

RobotSim::State& RobotSim::state(const NodeId& robot) {
  const auto it = robots_.find(robot);
  if (it == robots_.end()) throw Error(ErrorCode::UnknownRobot, robot.str());
  return it->second;
}

const RobotSim::State& RobotSim::state(const NodeId& robot) const {
  const auto it = robots_.find(robot);
  if (it == robots_.end()) throw Error(ErrorCode::UnknownRobot, robot.str());
  return it->second;
}

SensorVector RobotSim::step(const NodeId& robot, double dt_s) {
  State& s = state(robot);
  if (!(dt_s > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be > 0");
  const auto& wp = s.trajectory.waypoints;
  double remaining = s.trajectory.cruise_speed * dt_s;
  while (!s.done && remaining > 0.0) {
    const Vec2 target = wp[s.segment + 1];
    const double to_target = distance(s.position, target);
    if (remaining < to_target) {
      s.position = s.position + (remaining / to_target) * (target - s.position);
      remaining = 0.0;
    } else {
      s.position = target;
      remaining -= to_target;
      if (s.segment + 2 < wp.size()) {
        ++s.segment;
        s.heading = segment_heading(wp[s.segment], wp[s.segment + 1]);
      } else {
        s.done = true;
      }
    }
  }
  return sensors(robot);
}

void RobotSim::set_velocity(const NodeId& robot, double speed) {
  State& s = state(robot);
  if (speed < 0.0) throw Error(ErrorCode::NegativeSpeed, robot.str());
  if (!std::isfinite(speed)) throw Error(ErrorCode::InvalidArgument, "speed must be finite");
  s.trajectory.cruise_speed = speed;
}

SensorVector RobotSim::sensors(const NodeId& robot) const {
  const State& s = state(robot);
  return {s.position.x, s.position.y, s.done ? 0.0 : s.trajectory.cruise_speed, s.heading};
}

bool RobotSim::finished(const NodeId& robot) const { return state(robot).done; }

LocalizationSample RobotSim::sample_localization(const NodeId& robot) {
  State& s = state(robot);
  const std::uint64_t draw = s.draws++;
  const double sigma = s.localization.sigma;
  if (sigma == 0.0) return {s.position, 0.0};
  std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                    static_cast<std::uint32_t>(s.index), static_cast<std::uint32_t>(draw),
                    static_cast<std::uint32_t>(draw >> 32)};
  std::mt19937_64 engine(seq);
  std::normal_distribution<double> noise(0.0, sigma);
  const double dx = noise(engine);
  const double dy = noise(engine);
  return {{s.position.x + dx, s.position.y + dy}, sigma};
}

std::uint64_t RobotSim::localization_draws(const NodeId& robot) const { return state(robot).draws; }

ContextEmbedding RobotSim::build_context_embedding(const NodeId& robot, std::span<const NodeId> ru_universe,
                                                   const std::optional<NodeId>& attached_ru) const {
  ContextEmbedding k;
  k.sensors = sensors(robot);
  k.attachment.reserve(ru_universe.size());
  for (const auto& ru : ru_universe) k.attachment.push_back(attached_ru && *attached_ru == ru ? 1.0 : 0.0);
  return k;
}

}  // namespace cotorra
