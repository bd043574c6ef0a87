#include <doctest.h>

#include <set>

#include "generators.hpp"
#include "oracles.hpp"
#include "pmk/camera.hpp"
#include "pmk/layout.hpp"

using namespace pmk;

namespace {

Diagram hs_baseline(const ColouredNet& hs) {
  return swap_lanes_after(layered_layout(hs, hs_path_colours(hs)), "do AS");
}

}  // namespace

TEST_CASE("plain layout keeps each coloured path on one side") {
  ColouredNet hs = build_hs_net();
  Diagram d = layered_layout(hs, hs_path_colours(hs));
  CHECK(d.colour_order == std::vector<std::string>{"green", "red"});
  CHECK(oracle::side_switches(d) == 0);
  for (const auto& n : d.nodes) {
    if (n.colour == "green") CHECK(n.lane < 0);
    if (n.colour == "red") CHECK(n.lane > 0);
  }
  CHECK(d.nodes.size() == hs.places.size() + hs.transitions.size());
  std::size_t arcs = 0;
  for (const auto& t : hs.transitions) arcs += t.inputs.size() + t.outputs.size();
  CHECK(d.routes.size() == arcs);
}

TEST_CASE("swapping lanes after do AS creates side switches") {
  ColouredNet hs = build_hs_net();
  Diagram d = hs_baseline(hs);
  auto sw = count_side_switches(d);
  std::int64_t total = 0;
  for (const auto& [_, k] : sw) total += k;
  CHECK(total >= 2);
  CHECK(total == oracle::side_switches(d));
  const DiagramNode* as = d.find("do AS");
  for (const auto& n : d.nodes) {
    if (n.layer > as->layer && n.colour == "green") CHECK(n.lane > 0);
  }
}

TEST_CASE("baseline crossings equal the pairwise intersection oracle") {
  ColouredNet hs = build_hs_net();
  Diagram d = hs_baseline(hs);
  CHECK(count_crossings(d) == oracle::crossings(d));
  CHECK(count_crossings(d) > 0);
}

TEST_CASE("crossing counter agrees with the oracle on random diagrams") {
  gen::Rng rng(11);
  for (int i = 0; i < 60; ++i) {
    Diagram d = gen::diagram(rng, 40);
    CHECK(count_crossings(d) == oracle::crossings(d));
  }
}

TEST_CASE("crossing rule corner cases") {
  auto c = [](Point a, Point b, Point p, Point q) { return count_crossings(std::vector<Segment>{{a, b}, {p, q}}); };
  CHECK(c({0, 0}, {2, 2}, {0, 2}, {2, 0}) == 1);
  CHECK(c({0, 0}, {2, 2}, {2, 2}, {4, 0}) == 0);  // shared endpoint
  CHECK(c({0, 0}, {2, 0}, {1, 0}, {3, 0}) == 1);  // collinear overlap
  CHECK(c({0, 0}, {2, 0}, {2, 0}, {3, 0}) == 0);  // collinear, touching ends
  CHECK(c({0, 0}, {2, 0}, {2, 0}, {0, 0}) == 0);  // same pair of points
  CHECK(c({0, 0}, {4, 0}, {2, 0}, {2, 3}) == 1);  // T junction
  CHECK(c({1, 1}, {1, 1}, {0, 0}, {2, 2}) == 1);  // point inside a segment
  CHECK(c({0, 0}, {1, 0}, {0, 1}, {1, 1}) == 0);  // parallel
}

TEST_CASE("optimized HS diagram removes switches, sync arrows and crossings") {
  ColouredNet hs = build_hs_net({.frames = 3});
  Diagram base = hs_baseline(hs);
  LayoutResult r = optimize_layout(hs, base, {}, {.max_nodes = 200});
  REQUIRE_FALSE(r.diagnostic);
  CHECK(r.equivalence_checked);
  CHECK(r.before.side_switches_total >= 2);
  CHECK(r.after.side_switches_total == 0);
  CHECK(oracle::side_switches(r.diagram) == 0);
  CHECK(r.before.sync_arrows > 0);
  CHECK(r.after.sync_arrows == 0);
  CHECK(r.after.crossings < r.before.crossings);
  CHECK(r.after.crossings == oracle::crossings(r.diagram));
  CHECK(r.after.composite <= r.before.composite);
}

TEST_CASE("counter clusters hold exactly the transitions using the counter") {
  ColouredNet hs = build_hs_net();
  Diagram d = group_counters(hs, layered_layout(hs, hs_path_colours(hs)));
  // Scan guards, assignments and arc multiplicities by hand.
  std::map<std::string, std::set<std::string>> users;
  for (const auto& t : hs.transitions) {
    std::set<std::string> refs;
    if (t.guard) oracle::names_in(*t.guard, refs);
    for (const auto& a : t.assignments) {
      refs.insert(a.variable);
      oracle::names_in(a.value, refs);
    }
    for (const auto* arcs : {&t.inputs, &t.outputs}) {
      for (const auto& arc : *arcs) {
        for (const auto& term : arc.terms) oracle::names_in(term.count, refs);
      }
    }
    for (const auto& v : hs.variables) {
      if (v.kind == VarKind::Counter && refs.count(v.name)) users[v.name].insert(t.name);
    }
  }
  REQUIRE(d.clusters.size() == 1);
  const Cluster& c = d.clusters[0];
  std::set<std::string> expected;
  for (const auto& counter : c.counters) expected.insert(users[counter].begin(), users[counter].end());
  CHECK(std::set<std::string>(c.members.begin(), c.members.end()) == expected);
  CHECK(std::set<std::string>(c.counters.begin(), c.counters.end()) == std::set<std::string>{"shotCount", "storedCount"});
  CHECK(count_sync_arrows(d) == 0);
  std::size_t sync_arcs = 0;
  for (const auto& t : hs.transitions) {
    for (const auto* arcs : {&t.inputs, &t.outputs}) {
      for (const auto& arc : *arcs) sync_arcs += arc.sync_role.has_value();
    }
  }
  CHECK(c.absorbed.size() == sync_arcs);
}

TEST_CASE("optimizing never makes random layouts worse") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    gen::Rng rng(seed);
    auto [net, colours] = gen::layout_net(rng, 20);
    Diagram d = layered_layout(net, colours);
    LayoutResult r = optimize_layout(net, d, {}, {.max_nodes = 5000});
    CAPTURE(seed);
    CHECK(r.after.composite <= r.before.composite);
    CHECK(readability(r.diagram).composite == doctest::Approx(r.after.composite));
  }
}

TEST_CASE("DOT output is deterministic") {
  ColouredNet hs = build_hs_net();
  LayoutResult a = optimize_layout(hs, hs_baseline(hs));
  LayoutResult b = optimize_layout(hs, hs_baseline(hs));
  CHECK(render_dot(a.diagram) == render_dot(b.diagram));
  CHECK(render_dot(a.diagram).rfind("digraph diagram {", 0) == 0);
}
