#include <doctest.h>

#include "cotorra/error.hpp"
#include "cotorra/hw_graph.hpp"
#include "support.hpp"

using namespace cotorra;
using namespace testing;

TEST_CASE("add_node stores attributes and rejects duplicates") {
  HardwareGraph g;
  g.add_node("fog1", server(0.0));
  CHECK(g.nodes().size() == 1);
  CHECK(g.node("fog1").kind == NodeKind::Server);
  CHECK(code_of([&] { g.add_node("fog1", server(0.0)); }) == ErrorCode::DuplicateId);
  CHECK(code_of([&] { g.add_node("", switch_node()); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("proc delay is reserved for servers") {
  HardwareGraph g;
  NodeAttrs sw = switch_node();
  sw.proc_delay_ms = 1.0;
  CHECK(code_of([&] { g.add_node("sw", sw); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { g.add_node("s", server(-1.0)); }) == ErrorCode::InvalidArgument);
  g.add_node("s", server(5.0));
  g.set_proc_delay("s", 10.0);
  CHECK(g.node("s").proc_delay_ms == 10.0);
  g.add_node("w", switch_node());
  CHECK(code_of([&] { g.set_proc_delay("w", 1.0); }) == ErrorCode::WrongKind);
}

TEST_CASE("add_link preconditions") {
  HardwareGraph g;
  g.add_node("a", switch_node());
  g.add_node("b", switch_node());
  g.add_link("a", "b", wired(0.1));
  CHECK(g.has_link("b", "a"));
  CHECK(g.metrics("a", "b").d_ms == 0.1);
  CHECK(g.metrics("a", "b").lambda_mbps == 10000.0);
  CHECK(code_of([&] { g.add_link("a", "a", wired(1)); }) == ErrorCode::SelfLoop);
  CHECK(code_of([&] { g.add_link("b", "a", wired(1)); }) == ErrorCode::DuplicateLink);
  CHECK(code_of([&] { g.add_link("a", "zz", wired(1)); }) == ErrorCode::UnknownNode);
  CHECK(code_of([&] { g.remove_link("a", "zz"); }) == ErrorCode::UnknownLink);
  g.remove_link("a", "b");
  CHECK_FALSE(g.has_link("a", "b"));
  g.check_invariants();
}

TEST_CASE("wireless links join one robot to one radio unit") {
  HardwareGraph g;
  g.add_node("r", robot_node({0, 0}));
  g.add_node("R1", radio_unit({1, 0}));
  g.add_node("R2", radio_unit({2, 0}));
  g.add_node("sw", switch_node());
  CHECK(code_of([&] { g.add_link("sw", "R1", wired(1), LinkMedium::Wireless); }) == ErrorCode::WrongKind);
  g.add_link("r", "R1", wired(2), LinkMedium::Wireless);
  CHECK(code_of([&] { g.add_link("r", "R2", wired(2), LinkMedium::Wireless); }) == ErrorCode::DuplicateLink);
  g.set_position("r", {0.5, 0});
  CHECK(g.node("r").position == Vec2{0.5, 0});
  CHECK(code_of([&] { g.set_position("R1", {0, 0}); }) == ErrorCode::WrongKind);
  g.check_invariants();
}

TEST_CASE("shortest path prefers the cheaper of two parallel routes") {
  HardwareGraph g;
  for (const char* id : {"s", "x", "y", "t"}) g.add_node(id, switch_node());
  g.add_link("s", "x", wired(3));
  g.add_link("x", "t", wired(4));
  g.add_link("s", "y", wired(2));
  g.add_link("y", "t", wired(2));
  const auto r = g.shortest_effective_delay_path("s", "t");
  CHECK(r.delay_ms == 4.0);
  CHECK(r.path == std::vector<NodeId>{"s", "y", "t"});
  const auto oracle = brute_force_path(g, "s", "t");
  REQUIRE(oracle);
  CHECK(oracle->path == r.path);
}

TEST_CASE("shortest path identity and unreachable") {
  HardwareGraph g;
  g.add_node("a", server(7));
  g.add_node("b", switch_node());
  const auto self = g.shortest_effective_delay_path("a", "a");
  CHECK(self.path == std::vector<NodeId>{"a"});
  CHECK(self.delay_ms == 0.0);
  CHECK(code_of([&] { g.shortest_effective_delay_path("a", "b"); }) == ErrorCode::Unreachable);
  CHECK(code_of([&] { g.shortest_effective_delay_path("a", "nope"); }) == ErrorCode::UnknownNode);
}

TEST_CASE("server processing delay is charged at the destination only") {
  HardwareGraph g;
  g.add_node("s1", server(5));
  g.add_node("sw", switch_node());
  g.add_node("s2", server(10));
  g.add_link("s1", "sw", wired(1));
  g.add_link("sw", "s2", wired(1));
  CHECK(g.shortest_effective_delay_path("s1", "s2").delay_ms == 12.0);
  CHECK(g.shortest_effective_delay_path("s2", "s1").delay_ms == 7.0);
}

TEST_CASE("equal-delay paths resolve to the lexicographically smaller id sequence") {
  HardwareGraph g;
  for (const char* id : {"s", "m", "b", "t"}) g.add_node(id, switch_node());
  g.add_link("s", "m", wired(1));
  g.add_link("m", "t", wired(1));
  g.add_link("s", "b", wired(1));
  g.add_link("b", "t", wired(1));
  CHECK(g.shortest_effective_delay_path("s", "t").path == std::vector<NodeId>{"s", "b", "t"});
}

TEST_CASE("routing uses effective delay psi*d") {
  HardwareGraph g;
  for (const char* id : {"s", "x", "y", "t"}) g.add_node(id, switch_node());
  g.add_link("s", "x", wired(1));
  g.add_link("x", "t", wired(1));
  g.add_link("s", "y", wired(1.5));
  g.add_link("y", "t", wired(1.5));
  CHECK(g.shortest_effective_delay_path("s", "t").path == std::vector<NodeId>{"s", "x", "t"});
  g.metrics("s", "x").psi = 3.0;
  const auto r = g.shortest_effective_delay_path("s", "t");
  CHECK(r.path == std::vector<NodeId>{"s", "y", "t"});
  CHECK(r.delay_ms == 3.0);
}

TEST_CASE("neighbors and kinds come back sorted") {
  HardwareGraph g;
  g.add_node("c", switch_node());
  g.add_node("a", server());
  g.add_node("b", server());
  g.add_link("c", "b", wired(1));
  g.add_link("c", "a", wired(1));
  CHECK(g.neighbors("c") == std::vector<NodeId>{"a", "b"});
  CHECK(g.nodes_of_kind(NodeKind::Server) == std::vector<NodeId>{"a", "b"});
  CHECK(parse_node_kind("RadioUnit") == NodeKind::RadioUnit);
  CHECK_FALSE(parse_node_kind("router").has_value());
}
