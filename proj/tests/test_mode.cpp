#include <doctest.h>

#include <chrono>
#include <set>
#include <tuple>

#include "oracles.hpp"
#include "pmk/camera.hpp"
#include "pmk/mode.hpp"

using namespace pmk;

namespace {

Mode leaf(const std::string& name) {
  Mode m;
  m.name = name;
  return m;
}

Mode root(const std::string& name, const std::vector<std::string>& children) {
  Mode m;
  m.name = name;
  for (const auto& c : children) m.children.push_back(leaf(c));
  m.initial_child = children.front();
  return m;
}

// Submode automaton with some submodes missing; toggles into a missing
// submode are dropped.
ModeAutomaton auto_without(const std::set<std::string>& missing) {
  std::vector<std::string> subs;
  for (const char* s : {"FE", "F", "E", "0"}) {
    if (!missing.count(s)) subs.push_back(s);
  }
  auto bits = [](const std::string& s) { return std::pair{s == "FE" || s == "F", s == "FE" || s == "E"}; };
  auto name = [](bool af, bool ae) { return std::string(af && ae ? "FE" : af ? "F" : ae ? "E" : "0"); };
  std::vector<ModeTransition> ts;
  for (const auto& s : subs) {
    auto [af, ae] = bits(s);
    for (auto [event, target] : {std::pair{"toggle-AF", name(!af, ae)}, std::pair{"toggle-AE", name(af, !ae)}}) {
      if (!missing.count(target)) ts.push_back({s, event, std::nullopt, target, std::nullopt});
    }
  }
  return ModeAutomaton("AutoMode", root("Auto", subs), {"toggle-AF", "toggle-AE"}, ts);
}

}  // namespace

TEST_CASE("hierarchical camera model and parallel model agree on 16 configurations") {
  auto start = std::chrono::steady_clock::now();
  CameraAutomata a = build_camera_automata();
  ModeEquivalence r = hierarchical_parallel_equivalent(a.hierarchical, a.parallel);
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(r.equivalent);
  CHECK(r.hierarchical_configurations == 16);
  CHECK(r.parallel_configurations == 16);
  CHECK(seconds < 1.0);

  auto h = configuration_graph(a.hierarchical);
  auto p = configuration_graph(a.parallel);
  CHECK(h.graph.node_count == 16);
  CHECK(p.graph.node_count == 16);
  CHECK(oracle::isomorphic(h.graph, p.graph));
}

TEST_CASE("parallel model without submode E is not equivalent") {
  CameraAutomata a = build_camera_automata();
  ProductAutomaton cut = parallel_product(a.camera, auto_without({"E"}));
  ModeEquivalence r = hierarchical_parallel_equivalent(a.hierarchical, cut);
  CHECK_FALSE(r.equivalent);
  CHECK(r.parallel_configurations == 12);
  CHECK_FALSE(r.witness_configuration.empty());
  CHECK_FALSE(r.witness_path.empty());
  CHECK_FALSE(oracle::isomorphic(configuration_graph(a.hierarchical).graph, configuration_graph(cut).graph));
}

TEST_CASE("shared events move both factors or neither") {
  ModeAutomaton a("A", root("RA", {"a0", "a1"}), {"e", "x"},
                  {{"a0", "e", std::nullopt, "a1", std::nullopt}, {"a1", "x", std::nullopt, "a0", std::nullopt}});
  ModeAutomaton b("B", root("RB", {"b0", "b1"}), {"e", "y"},
                  {{"b0", "y", std::nullopt, "b1", std::nullopt}, {"b1", "e", std::nullopt, "b0", std::nullopt}});
  ProductAutomaton p = parallel_product(a, b);
  CHECK(p.shared() == std::set<std::string>{"e"});

  // Brute force over every pair of leaves.
  using Edge = std::tuple<std::string, std::string, std::string, std::string, std::string>;
  auto moves = [](const ModeAutomaton& m, const std::string& from, const std::string& ev) {
    std::vector<std::string> out;
    for (const auto& t : m.transitions()) {
      if (t.source == from && t.event == ev) out.push_back(t.target);
    }
    return out;
  };
  std::set<Edge> expected;
  std::set<std::pair<std::string, std::string>> reach{{"a0", "b0"}};
  std::vector<std::pair<std::string, std::string>> todo{{"a0", "b0"}};
  while (!todo.empty()) {
    auto [x, y] = todo.back();
    todo.pop_back();
    for (const char* ev : {"e", "x", "y"}) {
      bool in_a = a.has_event(ev), in_b = b.has_event(ev);
      auto ma = in_a ? moves(a, x, ev) : std::vector<std::string>{x};
      auto mb = in_b ? moves(b, y, ev) : std::vector<std::string>{y};
      for (const auto& nx : ma) {
        for (const auto& ny : mb) {
          expected.insert({x, y, ev, nx, ny});
          if (reach.insert({nx, ny}).second) todo.push_back({nx, ny});
        }
      }
    }
  }
  std::set<Edge> actual;
  for (const auto& e : p.edges()) {
    const auto& s = p.states()[e.from];
    const auto& t = p.states()[e.to];
    actual.insert({s[0].active, s[1].active, e.event, t[0].active, t[1].active});
  }
  CHECK(actual == expected);
  CHECK(p.states().size() == reach.size());
  // From (a0, b0) only y is possible: a wants e, b does not offer it.
  for (const auto& e : p.edges()) {
    if (e.from == 0) CHECK(e.event == "y");
  }
}

TEST_CASE("camera steps apply entry effects and honour alternatives") {
  CameraAutomata a = build_camera_automata();
  const ModeAutomaton& cam = a.camera;
  ModeConfig c = initial_config(cam);
  CHECK(c.active == "IDLE");
  CHECK(c.globals.at("DspEnabled") == 0);

  StepResult same = step(cam, c, "release");
  CHECK(same.config == c);
  CHECK_FALSE(same.taken);

  StepResult mf = step(cam, c, "full-press");
  CHECK(mf.config.active == "HS");
  CHECK(mf.config.globals.at("DspEnabled") == 1);

  auto pick_sf = [](const std::vector<const LeafTransition*>& alts) {
    for (std::size_t i = 0; i < alts.size(); ++i) {
      if (alts[i]->target == "SF") return i;
    }
    return std::size_t{0};
  };
  StepResult sf = step(cam, c, "full-press", pick_sf);
  CHECK(sf.config.active == "SF");
  CHECK(step(cam, sf.config, "shoot-complete").config.active == "IDLE");

  ModeConfig busy = mf.config;
  busy.pending = {"do IS"};
  StepResult back = step(cam, busy, "release");
  CHECK(back.config.active == "IDLE");
  CHECK(back.completed == std::vector<std::string>{"do IS"});
  CHECK(back.config.globals.at("DspEnabled") == 0);

  StepResult ls = step(cam, mf.config, "buffer-full");
  CHECK(ls.config.active == "LS");
  CHECK(step(cam, ls.config, "buffer-freed").config.active == "LS");

  CHECK_THROWS_AS(step(cam, c, "no-such-event"), ModeError);
}

TEST_CASE("refinement applies the entry reassignments") {
  CameraAutomata a = build_camera_automata();
  auto global = [](const ColouredNet& n, const std::string& v) { return n.find_variable(v)->initial; };
  CHECK(global(refine(a.camera, "IDLE"), "DspEnabled") == 0);
  CHECK(global(refine(a.camera, "HS"), "DspEnabled") == 1);
  CHECK(global(refine(a.camera, "SF"), "DspEnabled") == 1);
  CHECK(refine(a.camera, "SF").name == "SF");
  CHECK_THROWS_AS(refine(a.autofocus, "FE"), ModeError);
}

TEST_CASE("flattening keeps the leaf behaviour") {
  CameraAutomata a = build_camera_automata();
  ModeAutomaton flat = flatten(a.camera);
  CHECK(oracle::isomorphic(configuration_graph(flat).graph, configuration_graph(a.camera).graph));
  for (const auto& t : flat.transitions()) CHECK(flat.find_mode(t.source)->is_leaf());
}

TEST_CASE("malformed automata are rejected") {
  Mode r = root("R", {"x", "y"});
  CHECK_THROWS_AS(ModeAutomaton("M", r, {"e"}, {{"x", "e", std::nullopt, "z", std::nullopt}}), ModeError);
  CHECK_THROWS_AS(ModeAutomaton("M", r, {"e"}, {{"x", "f", std::nullopt, "y", std::nullopt}}), ModeError);
  CHECK_THROWS_AS(ModeAutomaton("M", r, {"e"},
                                {{"x", "e", std::nullopt, "y", 0.5}, {"x", "e", std::nullopt, "x", 0.25}}),
                  ModeError);
  Mode dup = root("R", {"x", "x"});
  CHECK_THROWS_AS(ModeAutomaton("M", dup, {"e"}, {}), ModeError);
  Mode writes = root("R", {"x", "y"});
  writes.children[0].on_entry.push_back({"Undeclared", Expr::constant(1)});
  CHECK_THROWS_AS(ModeAutomaton("M", writes, {"e"}, {}), ModeError);
  Mode no_initial = root("R", {"x", "y"});
  no_initial.initial_child.reset();
  ModeAutomaton lazy("M", no_initial, {"e"}, {});
  CHECK_THROWS_AS(lazy.initial_leaf(), ModeError);
}
