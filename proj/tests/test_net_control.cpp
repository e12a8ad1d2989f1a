#include <doctest.h>

#include <cmath>

#include "cotorra/net_control.hpp"
#include "support.hpp"

using namespace cotorra;
using namespace testing;

namespace {

// robot at the origin; R1 1 m away, R2 20 m away (out of range).
struct Fixture {
  HardwareGraph g;
  std::unique_ptr<NetControl> net;

  explicit Fixture(NetControlConfig cfg = {}) {
    g.add_node("robot", robot_node({0, 0}));
    g.add_node("R1", radio_unit({1, 0}));
    g.add_node("R2", radio_unit({20, 0}));
    g.add_node("R3", radio_unit({0, 5}));
    g.add_node("sw", switch_node());
    g.add_node("fog", server(0));
    g.add_node("cloud", server(10));
    g.add_link("R1", "sw", wired(0.1));
    g.add_link("R2", "sw", wired(0.1));
    g.add_link("R3", "sw", wired(0.1));
    g.add_link("sw", "fog", wired(0.1));
    g.add_link("sw", "cloud", wired(0.3));
    net = std::make_unique<NetControl>(g, cfg);
  }
};

}  // namespace

TEST_CASE("log-distance rssi") {
  const RadioModel m;
  CHECK(m.rssi_dbm(1.0) == -40.0);
  CHECK(m.rssi_dbm(0.2) == -40.0);  // clamped at d0
  CHECK(m.rssi_dbm(10.0) == doctest::Approx(-70.0));
  CHECK(m.rssi_dbm(100.0) == doctest::Approx(-100.0));
}

TEST_CASE("wireless delay mapping") {
  const RadioModel m;
  CHECK(m.wireless_delay_ms(-40.0) == 2.0);
  CHECK(m.wireless_delay_ms(-65.0) == 2.0);
  CHECK(m.wireless_delay_ms(-70.0) == doctest::Approx(11.0));
  CHECK(m.wireless_delay_ms(-75.0) == doctest::Approx(20.0));
  CHECK(m.wireless_delay_ms(-80.0) == doctest::Approx(29.0));
}

TEST_CASE("emulation shapes effective metrics") {
  Fixture f;
  f.net->set_emulation("sw", "fog", 2.0, 4.0);
  const auto m = f.net->measure_link("fog", "sw");
  CHECK(m.d_ms == 0.1);
  CHECK(m.eff_d_ms == 0.2);
  CHECK(m.lambda_mbps == 10000.0);
  CHECK(m.eff_lambda_mbps == 2500.0);
  f.net->set_emulation("sw", "fog", 1.0, 1.0);
  CHECK(f.net->measure_link("sw", "fog").eff_d_ms == 0.1);
  CHECK(code_of([&] { f.net->set_emulation("sw", "fog", 0.5, 1.0); }) == ErrorCode::InvalidFactor);
  CHECK(code_of([&] { f.net->set_emulation("sw", "fog", 1.0, 0.9); }) == ErrorCode::InvalidFactor);
  CHECK(code_of([&] { f.net->set_emulation("R1", "fog", 1.0, 1.0); }) == ErrorCode::UnknownLink);
}

TEST_CASE("reachable radio units are ordered by signal") {
  Fixture f;
  const auto r = f.net->reachable_rus("robot");
  REQUIRE(r.size() == 2);
  CHECK(r[0].first == "R1");
  CHECK(r[1].first == "R3");
  CHECK(r[0].second == -40.0);
}

TEST_CASE("first association opens no handover window") {
  Fixture f;
  CHECK_FALSE(f.net->attachment("robot").has_value());
  f.net->handover("robot", "R1");
  CHECK(f.net->attachment("robot") == NodeId("R1"));
  CHECK_FALSE(f.net->handover_in_progress("robot"));
  CHECK(f.g.has_link("robot", "R1"));
  CHECK(f.g.link("robot", "R1").medium == LinkMedium::Wireless);
  CHECK(f.g.metrics("robot", "R1").d_ms == 2.0);
  CHECK(f.g.metrics("robot", "R1").lambda_mbps == 54.0);
}

TEST_CASE("handover between radio units") {
  Fixture f;
  f.net->handover("robot", "R1");
  f.net->advance_to(1000);
  f.net->handover("robot", "R3");
  CHECK_FALSE(f.g.has_link("robot", "R1"));
  CHECK(f.g.has_link("robot", "R3"));
  CHECK(f.net->handover_remaining_ms("robot") == 100);
  CHECK(code_of([&] { f.net->handover("robot", "R1"); }) == ErrorCode::HandoverInProgress);
  f.net->advance_to(1050);
  CHECK(f.net->handover_remaining_ms("robot") == 50);
  f.net->advance_to(1100);
  CHECK_FALSE(f.net->handover_in_progress("robot"));
  f.net->handover("robot", "R3");  // already there: no new window
  CHECK_FALSE(f.net->handover_in_progress("robot"));
  CHECK(code_of([&] { f.net->handover("robot", "R2"); }) == ErrorCode::OutOfRange);
  CHECK(code_of([&] { f.net->handover("robot", "sw"); }) == ErrorCode::WrongKind);
  CHECK(code_of([&] { f.net->attachment("ghost"); }) == ErrorCode::UnknownRobot);
}

TEST_CASE("ru context reflects attachment") {
  Fixture f;
  f.net->handover("robot", "R1");
  const auto ctx = f.net->ru_context("R1", "robot");
  CHECK(ctx.rssi_dbm == -40.0);
  CHECK(ctx.attached_count == 1.0);
  CHECK(ctx.tx_rate_mbps == 54.0);
  const auto other = f.net->ru_context("R3");
  CHECK(other.attached_count == 0.0);
  CHECK(other.tx_rate_mbps == 0.0);
  CHECK(other.values().size() == 4);
}

TEST_CASE("refresh_wireless tracks robot position") {
  Fixture f;
  f.net->handover("robot", "R1");
  f.g.set_position("robot", {11, 0});  // 10 m from R1
  f.net->refresh_wireless();
  CHECK(f.g.metrics("robot", "R1").d_ms == doctest::Approx(11.0));
}

TEST_CASE("service time is round trip plus host processing") {
  Fixture f;
  f.net->handover("robot", "R1");
  f.net->place_vnf_now("v_d", "cloud");
  auto st = f.net->service_time("robot", "v_d");
  CHECK(st.steady_ms == doctest::Approx(2 * (2.0 + 0.1 + 0.3) + 10));
  CHECK(st.handover_remaining_ms == 0.0);
  f.net->place_vnf_now("v_d", "fog");
  st = f.net->service_time("robot", "v_d");
  CHECK(st.steady_ms == doctest::Approx(2 * (2.0 + 0.1 + 0.1)));

  f.net->advance_to(500);
  f.net->handover("robot", "R3");
  st = f.net->service_time("robot", "v_d");
  CHECK(st.handover_remaining_ms == 100.0);
  CHECK(st.total_ms() == st.steady_ms + 100.0);
}

TEST_CASE("service time errors") {
  Fixture f;
  CHECK(code_of([&] { f.net->service_time("robot", "v_d"); }) == ErrorCode::Unattached);
  f.net->handover("robot", "R1");
  CHECK(code_of([&] { f.net->service_time("robot", "v_d"); }) == ErrorCode::VnfNotPlaced);
}

TEST_CASE("placement is make-before-break with a deploy delay") {
  NetControlConfig cfg;
  cfg.deploy_ms[VnfId("vAP")] = 8000;
  Fixture f(cfg);
  f.net->place_vnf_now("v_d", "cloud");
  f.net->advance_to(1000);
  f.net->place_vnf("v_d", "fog");
  CHECK(f.net->host_of("v_d") == NodeId("cloud"));
  REQUIRE(f.net->pending_deployments().size() == 1);
  CHECK(f.net->pending_deployments().at("v_d").due_ms == 1500);
  f.net->place_vnf("v_d", "fog");  // same target: unchanged
  CHECK(f.net->pending_deployments().at("v_d").due_ms == 1500);
  CHECK(f.net->advance_to(1400).empty());
  const auto done = f.net->advance_to(1500);
  CHECK(done == std::vector<VnfId>{"v_d"});
  CHECK(f.net->host_of("v_d") == NodeId("fog"));
  CHECK_FALSE(f.net->placements().node_map.contains("cloud"));
  CHECK(f.net->deploy_delay_ms("vAP") == 8000);
  CHECK(f.net->deploy_delay_ms("v_d") == 500);
}

TEST_CASE("re-targeting the live host cancels a migration") {
  Fixture f;
  f.net->place_vnf_now("v_d", "cloud");
  f.net->place_vnf("v_d", "fog");
  f.net->place_vnf("v_d", "cloud");
  CHECK(f.net->pending_deployments().empty());
  f.net->advance_to(10000);
  CHECK(f.net->host_of("v_d") == NodeId("cloud"));
}

TEST_CASE("hosts may be servers, radio units or robots but not switches") {
  Fixture f;
  f.net->place_vnf_now("vAP", "R1");
  f.net->place_vnf_now("v_r", "robot");
  CHECK(f.net->host_of("vAP") == NodeId("R1"));
  CHECK(code_of([&] { f.net->place_vnf_now("v_x", "sw"); }) == ErrorCode::WrongKind);
  CHECK(code_of([&] { f.net->place_vnf("v_x", "sw"); }) == ErrorCode::WrongKind);
  CHECK(code_of([&] { f.net->advance_to(-1); }) == ErrorCode::NonMonotonicTime);
}

TEST_CASE("virtual links are validated and repaired") {
  Fixture f;
  f.net->handover("robot", "R1");
  f.net->place_vnf_now("v_r", "robot");
  f.net->place_vnf_now("v_d", "cloud");
  CHECK(code_of([&] { f.net->place_vl("v_r", "v_d", {"robot", "R1", "cloud"}); }) == ErrorCode::BrokenPath);
  CHECK(code_of([&] { f.net->place_vl("v_r", "v_d", {"robot", "R1", "sw", "fog"}); }) == ErrorCode::EndpointMismatch);
  f.net->place_vl("v_r", "v_d", {"robot", "R1", "sw", "cloud"});
  const VirtualLinkId vl{"v_r", "v_d"};
  CHECK(f.net->placements().link_map.at(vl).size() == 4);

  f.net->handover("robot", "R3");
  CHECK(f.net->placements().link_map.at(vl) == std::vector<NodeId>{"robot", "R3", "sw", "cloud"});
  f.net->place_vnf_now("v_d", "fog");
  CHECK(f.net->placements().link_map.at(vl) == std::vector<NodeId>{"robot", "R3", "sw", "fog"});
  CHECK(PlacementMap::links_of(f.net->placements().link_map.at(vl)).size() == 3);
}

TEST_CASE("prediction matches the measured service time at the true position") {
  Fixture f;
  f.net->handover("robot", "R1");
  f.net->place_vnf_now("v_d", "cloud");
  f.g.set_position("robot", {4, 3});
  f.net->refresh_wireless();
  const double predicted = f.net->predict_service_time("robot", {4, 3}, "R1", "cloud");
  CHECK(predicted == doctest::Approx(f.net->service_time("robot", "v_d").steady_ms).epsilon(1e-12));
}
