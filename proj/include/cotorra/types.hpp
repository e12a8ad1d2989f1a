#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <utility>

namespace cotorra {

// Simulation time in integer milliseconds; every scheduled event lands on an
// exact value so timelines can be compared without tolerance.
using TimeMs = std::int64_t;

template <typename Tag>
class StrongId {
 public:
  StrongId() = default;
  StrongId(std::string value) : value_(std::move(value)) {}  // NOLINT: implicit by intent
  StrongId(const char* value) : value_(value) {}             // NOLINT

  const std::string& str() const noexcept { return value_; }
  bool empty() const noexcept { return value_.empty(); }

  friend auto operator<=>(const StrongId&, const StrongId&) = default;
  friend bool operator==(const StrongId&, const StrongId&) = default;
  friend std::ostream& operator<<(std::ostream& os, const StrongId& id) { return os << id.value_; }

 private:
  std::string value_;
};

struct NodeTag {};
struct VnfTag {};

using NodeId = StrongId<NodeTag>;
using VnfId = StrongId<VnfTag>;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;

  double norm() const { return std::hypot(x, y); }
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

}  // namespace cotorra

template <typename Tag>
struct std::hash<cotorra::StrongId<Tag>> {
  std::size_t operator()(const cotorra::StrongId<Tag>& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};
