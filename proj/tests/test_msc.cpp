#include <doctest.h>

#include <functional>
#include <map>
#include <set>

#include "oracles.hpp"
#include "pmk/camera.hpp"
#include "pmk/msc.hpp"

using namespace pmk;

namespace {

DeploymentAssignment default_assignment(const ColouredNet& net) {
  DeploymentAssignment a;
  DeploymentMatrix m = camera_deployment_matrix();
  for (const auto& op : net_operations(net)) a[op] = *deployment_options(op, m).begin();
  return a;
}

std::optional<std::string> site_of_place(const ColouredNet& n, const std::string& place) {
  const Component* c = n.find_component(n.find_place(place)->component);
  if (c->site) return std::string(to_string(*c->site));
  return std::nullopt;
}

// Greedy run to deadlock: always the first enabled firing.
std::vector<std::string> run_to_end(const ColouredNet& net) {
  std::vector<std::string> out;
  oracle::State s = oracle::initial_state(net);
  while (true) {
    auto next = oracle::successors(net, s);
    if (next.empty()) return out;
    out.push_back(net.transitions[next[0].transition].name);
    s = next[0].next;
  }
}

}  // namespace

TEST_CASE("default HS assignment touches every lifeline") {
  ColouredNet hs = build_hs_net();
  DeploymentAssignment a = default_assignment(hs);
  std::set<std::string> expected;
  for (const auto& [op, t] : a) expected.insert(std::string(to_string(t)));
  for (const auto& c : hs.components) {
    if (c.site) expected.insert(std::string(to_string(*c.site)));
  }
  auto got = lifelines(hs, a);
  CHECK(std::set<std::string>(got.begin(), got.end()) == expected);
  CHECK(got == std::vector<std::string>{"GPP", "DSP", "Motors", "Buffer", "Flash"});
}

TEST_CASE("messages are the steps that cross components") {
  ColouredNet hs = build_hs_net({.frames = 2});
  DeploymentAssignment a = default_assignment(hs);
  std::vector<std::string> trace = run_to_end(hs);
  REQUIRE(std::count(trace.begin(), trace.end(), "do IS") == 2);
  Msc msc = trace_to_msc(hs, trace, a);

  std::size_t crossing = 0;
  for (const auto& name : trace) {
    const Transition* t = hs.find_transition(name);
    std::optional<std::string> from, to;
    for (const auto& arc : t->inputs) {
      if ((from = site_of_place(hs, arc.place))) break;
    }
    for (const auto& arc : t->outputs) {
      if ((to = site_of_place(hs, arc.place))) break;
    }
    std::string own = transition_lifeline(hs, *t, a);
    if (from.value_or(own) != to.value_or(own)) ++crossing;
  }
  CHECK(msc.message_count() == crossing);
  CHECK(crossing > 0);

  std::map<std::size_t, std::size_t> sent;
  for (std::size_t i = 0; i < msc.events.size(); ++i) {
    const auto& e = msc.events[i];
    if (e.kind == MscEvent::Kind::Send) sent[e.message] = i;
    if (e.kind == MscEvent::Kind::Receive) {
      REQUIRE(sent.count(e.message));
      CHECK(sent[e.message] < i);
      CHECK(msc.events[sent[e.message]].peer == e.lifeline);
    }
  }
  CHECK(sent.size() == msc.message_count());
}

TEST_CASE("infeasible traces are rejected") {
  ColouredNet hs = build_hs_net();
  CHECK_THROWS_AS(trace_to_msc(hs, {"do IB"}, default_assignment(hs)), NotEnabledError);
  CHECK_THROWS_AS(trace_to_msc(hs, {"nope"}, default_assignment(hs)), NetError);
}

TEST_CASE("camera high-level chart references one chart per mode without cycles") {
  CameraAutomata a = build_camera_automata();
  ColouredNet hs = build_hs_net();
  DeploymentAssignment assign = default_assignment(hs);
  Msc top = modes_to_hmsc(a.camera, assign);
  CHECK(top.initial == "IDLE");
  CHECK(top.references.size() == a.camera.leaves().size());
  CHECK(top.children.size() == top.references.size());

  std::map<std::string, const Msc*> charts{{top.name, &top}};
  for (const auto& c : top.children) charts[c.name] = &c;
  std::set<std::string> visiting, done;
  std::function<bool(const std::string&)> acyclic = [&](const std::string& n) {
    if (done.count(n)) return true;
    if (!visiting.insert(n).second) return false;
    for (const auto& r : charts.at(n)->references) {
      if (!acyclic(r.msc)) return false;
    }
    visiting.erase(n);
    done.insert(n);
    return true;
  };
  CHECK(acyclic(top.name));
  for (const auto& c : top.children) CHECK(c.references.empty());

  std::string text = render_msc(top);
  CHECK(text.rfind("hmsc CameraMode;", 0) == 0);
  CHECK(text.find("connect HS -> LS on 'buffer-full';") != std::string::npos);
  CHECK(text == render_msc(modes_to_hmsc(a.camera, assign)));
  CHECK_THROWS_AS(modes_to_hmsc(a.autofocus, assign), ModeError);
}
