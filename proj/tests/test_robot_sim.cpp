#include <doctest.h>

#include <numbers>

#include "cotorra/robot_sim.hpp"
#include "support.hpp"

using namespace cotorra;
using namespace testing;

namespace {

RobotSim single(Trajectory t, double sigma = 0.0, std::uint64_t seed = 1) {
  RobotSim sim(seed);
  sim.add_robot("r", std::move(t), {sigma});
  return sim;
}

}  // namespace

TEST_CASE("straight-line step") {
  auto sim = single({{{0, 0}, {10, 0}}, 1.0});
  const auto s = sim.step("r", 1.0);
  CHECK(s.pos_x == doctest::Approx(1.0));
  CHECK(s.pos_y == 0.0);
  CHECK(s.speed == 1.0);
  CHECK(s.heading == 0.0);
}

TEST_CASE("overshoot carries over to the next segment") {
  const std::vector<Vec2> wp{{0, 0}, {3, 0}, {3, 4}, {-1, 4}};
  auto sim = single({wp, 2.0});
  sim.step("r", 2.0);  // 4 m: 3 along x then 1 up
  const auto s = sim.sensors("r");
  const Vec2 oracle = point_at_arclength(wp, 4.0);
  CHECK(s.pos_x == doctest::Approx(oracle.x).epsilon(1e-12));
  CHECK(s.pos_y == doctest::Approx(oracle.y).epsilon(1e-12));
  CHECK(s.heading == doctest::Approx(std::numbers::pi / 2));
}

TEST_CASE("stepping agrees with the arclength oracle on random polylines") {
  Gen g(42);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Vec2> wp{{g.uniform(-5, 5), g.uniform(-5, 5)}};
    const int n = g.integer(2, 6);
    for (int i = 0; i < n; ++i) wp.push_back({wp.back().x + g.uniform(0.1, 4), wp.back().y + g.uniform(-3, 3)});
    const double speed = g.uniform(0.1, 2.0);
    auto sim = single({wp, speed});
    double travelled = 0.0;
    for (int k = 0; k < 40; ++k) {
      const double dt = g.uniform(0.01, 1.0);
      sim.step("r", dt);
      travelled += speed * dt;
      const Vec2 expect = point_at_arclength(wp, travelled);
      const auto s = sim.sensors("r");
      REQUIRE(std::abs(s.pos_x - expect.x) < 1e-9);
      REQUIRE(std::abs(s.pos_y - expect.y) < 1e-9);
    }
  }
}

TEST_CASE("final waypoint clamps and reports zero speed") {
  auto sim = single({{{0, 0}, {1, 0}}, 1.0});
  sim.step("r", 5.0);
  CHECK(sim.finished("r"));
  const auto s = sim.sensors("r");
  CHECK(s.position() == Vec2{1, 0});
  CHECK(s.speed == 0.0);
  sim.step("r", 1.0);
  CHECK(sim.sensors("r").position() == Vec2{1, 0});
}

TEST_CASE("set_velocity") {
  auto sim = single({{{0, 0}, {10, 0}}, 1.0});
  sim.set_velocity("r", 0.5);
  sim.step("r", 2.0);
  CHECK(sim.sensors("r").pos_x == doctest::Approx(1.0));
  sim.set_velocity("r", 0.0);
  const auto halted = sim.step("r", 1.0);
  CHECK(halted.pos_x == doctest::Approx(1.0));
  CHECK(halted.speed == 0.0);
  CHECK(code_of([&] { sim.set_velocity("r", -1.0); }) == ErrorCode::NegativeSpeed);
  CHECK(code_of([&] { sim.set_velocity("ghost", 1.0); }) == ErrorCode::UnknownRobot);
  CHECK(code_of([&] { sim.step("ghost", 1.0); }) == ErrorCode::UnknownRobot);
}

TEST_CASE("trajectory validation") {
  RobotSim sim(1);
  CHECK(code_of([&] { sim.add_robot("a", {{{0, 0}}, 1.0}, {}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { sim.add_robot("a", {{{0, 0}, {0, 0}}, 1.0}, {}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { sim.add_robot("a", {{{0, 0}, {1, 0}}, 0.0}, {}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { sim.add_robot("a", {{{0, 0}, {1, 0}}, 1.0}, {-0.1}); }) == ErrorCode::InvalidArgument);
  sim.add_robot("a", {{{0, 0}, {1, 0}}, 1.0}, {});
  CHECK(code_of([&] { sim.add_robot("a", {{{0, 0}, {1, 0}}, 1.0}, {}); }) == ErrorCode::DuplicateId);
}

TEST_CASE("heading stays in [-pi, pi)") {
  CHECK(wrap_heading(std::numbers::pi) == doctest::Approx(-std::numbers::pi));
  CHECK(wrap_heading(3 * std::numbers::pi / 2) == doctest::Approx(-std::numbers::pi / 2));
  Gen g(3);
  for (int i = 0; i < 1000; ++i) {
    const double h = wrap_heading(g.uniform(-50, 50));
    REQUIRE(h >= -std::numbers::pi);
    REQUIRE(h < std::numbers::pi);
  }
  auto sim = single({{{0, 0}, {-1, 0}}, 1.0});
  CHECK(sim.sensors("r").heading == doctest::Approx(-std::numbers::pi));
}

TEST_CASE("localization noise") {
  SUBCASE("sigma zero is exact") {
    auto sim = single({{{2, 3}, {4, 3}}, 1.0}, 0.0);
    const auto s = sim.sample_localization("r");
    CHECK(s.estimate == Vec2{2, 3});
    CHECK(s.sigma == 0.0);
  }
  SUBCASE("sample mean converges") {
    auto sim = single({{{2, 3}, {4, 3}}, 1.0}, 0.1, 99);
    double sx = 0.0;
    double sy = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
      const auto s = sim.sample_localization("r");
      sx += s.estimate.x;
      sy += s.estimate.y;
    }
    CHECK(std::abs(sx / n - 2.0) < 0.01);
    CHECK(std::abs(sy / n - 3.0) < 0.01);
    CHECK(sim.localization_draws("r") == static_cast<std::uint64_t>(n));
  }
  SUBCASE("deterministic per seed and draw index") {
    auto a = single({{{0, 0}, {1, 0}}, 1.0}, 0.5, 7);
    auto b = single({{{0, 0}, {1, 0}}, 1.0}, 0.5, 7);
    auto c = single({{{0, 0}, {1, 0}}, 1.0}, 0.5, 8);
    const auto a1 = a.sample_localization("r");
    CHECK(a1.estimate == b.sample_localization("r").estimate);
    CHECK_FALSE(a1.estimate == c.sample_localization("r").estimate);
    CHECK_FALSE(a1.estimate == a.sample_localization("r").estimate);
  }
  SUBCASE("unknown robot") {
    RobotSim sim(1);
    CHECK(code_of([&] { sim.sample_localization("nobody"); }) == ErrorCode::UnknownRobot);
  }
}

TEST_CASE("context embedding layout") {
  auto sim = single({{{0, 0}, {1, 0}}, 1.0});
  const std::vector<NodeId> rus{"R1", "R2", "R3"};
  const auto k = sim.build_context_embedding("r", rus, NodeId("R2"));
  CHECK(k.size() == rus.size() + SensorVector::kSize);
  CHECK(k.attachment == std::vector<double>{0, 1, 0});
  const auto flat = k.flatten();
  CHECK(flat.size() == 7);
  CHECK(flat[3] == 0.0);  // pos_x
  CHECK(flat[5] == 1.0);  // speed
  const auto none = sim.build_context_embedding("r", rus, std::nullopt);
  CHECK(none.attachment == std::vector<double>{0, 0, 0});
  const auto empty = sim.build_context_embedding("r", {}, std::nullopt);
  CHECK(empty.size() == SensorVector::kSize);
}
