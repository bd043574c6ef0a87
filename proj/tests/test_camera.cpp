#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "pmk/camera.hpp"

using namespace pmk;

namespace {

DeploymentAssignment assignment() {
  DeploymentAssignment a;
  DeploymentMatrix m = camera_deployment_matrix();
  for (const auto& net : {build_hs_net(), build_idle_net()}) {
    for (const auto& op : net_operations(net)) a[op] = *deployment_options(op, m).begin();
  }
  return a;
}

ScenarioResult run(const std::vector<CameraEvent>& script, const BudgetConfig& cfg = {}) {
  return run_scenario(script, cfg, assignment(), camera_default_profile());
}

std::size_t fired(const ScenarioResult& r, const std::string& name) {
  return std::count_if(r.trace.begin(), r.trace.end(), [&](const FiringRecord& f) { return f.transition == name; });
}

}  // namespace

TEST_CASE("held burst switches HS to LS at the first delayed frame") {
  for (auto [shoot, store, cap] : {std::tuple{10, 40, 4}, std::tuple{5, 12, 2}, std::tuple{3, 7, 3}}) {
    BudgetConfig cfg;
    cfg.shoot_period = shoot;
    cfg.store_period = store;
    cfg.buffer_capacity = cap;
    ScenarioResult r = run({{CameraEventKind::FullPress, 0}, {CameraEventKind::Hold, 100}, {CameraEventKind::Release, 200}}, cfg);
    auto it = std::find_if(r.timeline.begin(), r.timeline.end(), [](const TimelineEntry& e) { return e.to == "LS"; });
    CAPTURE(shoot);
    CAPTURE(store);
    REQUIRE(it != r.timeline.end());
    CHECK(it->from == "HS");
    CHECK(it->frame == burst_feasibility(cfg));
    CHECK(it->frame == oracle::first_delayed_frame(shoot, store, cap, 100));
    CHECK(it->at == *it->frame * shoot);
    CHECK(r.final_mode == "IDLE");
    CHECK(fired(r, "do IS") == static_cast<std::size_t>(r.frames_shot));
  }
}

TEST_CASE("storage that keeps pace never leaves HS") {
  BudgetConfig cfg;
  cfg.shoot_period = 40;
  cfg.store_period = 10;
  ScenarioResult r = run({{CameraEventKind::FullPress, 0}, {CameraEventKind::Release, 200}}, cfg);
  for (const auto& e : r.timeline) CHECK(e.to != "LS");
  CHECK(r.frames_shot == 5);
}

TEST_CASE("single frame goes IDLE to SF and back") {
  ScenarioResult r = run({{CameraEventKind::SelectSF, 0}, {CameraEventKind::FullPress, 10}, {CameraEventKind::Release, 20}});
  REQUIRE(r.timeline.size() == 2);
  CHECK(r.timeline[0].from == "IDLE");
  CHECK(r.timeline[0].to == "SF");
  CHECK(r.timeline[1].from == "SF");
  CHECK(r.timeline[1].to == "IDLE");
  CHECK(r.timeline[1].event == "shoot-complete");
  CHECK(r.timeline[1].at == 10 + BudgetConfig{}.store_period);
  CHECK(r.frames_shot == 1);
  CHECK(r.final_mode == "IDLE");
}

TEST_CASE("half-press does idle focusing according to the submode") {
  ScenarioResult on = run({{CameraEventKind::HalfPress, 0}});
  CHECK(fired(on, "do AF") == 1);
  CHECK(fired(on, "do AE") == 1);
  ScenarioResult off = run({{CameraEventKind::ToggleAF, 0}, {CameraEventKind::HalfPress, 1}});
  CHECK(fired(off, "skip AF") == 1);
  CHECK(fired(off, "do AE") == 1);
  CHECK(on.cost.time.worst > off.cost.time.worst);
}

TEST_CASE("scenario cost is the sum over the recorded trace") {
  ScenarioResult r = run({{CameraEventKind::FullPress, 0}, {CameraEventKind::Release, 35}});
  ColouredNet hs = build_hs_net();
  ColouredNet idle = build_idle_net();
  ResourceProfile p = camera_default_profile();
  DeploymentAssignment a = assignment();
  double worst = 0;
  for (const auto& f : r.trace) {
    const Transition* t = hs.find_transition(f.transition);
    if (!t) t = idle.find_transition(f.transition);
    REQUIRE(t);
    if (t->operation) worst += p.at(*t->operation, a.at(*t->operation)).wcet;
  }
  CHECK(r.cost.time.worst == doctest::Approx(worst));
  CHECK(std::is_sorted(r.trace.begin(), r.trace.end(),
                       [](const FiringRecord& x, const FiringRecord& y) { return x.at < y.at; }));
}

TEST_CASE("events going back in time are rejected with their index") {
  try {
    (void)run({{CameraEventKind::FullPress, 10}, {CameraEventKind::Release, 5}});
    FAIL("expected ScenarioError");
  } catch (const ScenarioError& e) {
    CHECK(e.index() == 1);
  }
}

TEST_CASE("HS buffer stays within capacity on every reachable marking") {
  for (std::int64_t cap = 1; cap <= 3; ++cap) {
    ColouredNet hs = build_hs_net({.buffer_capacity = cap, .frames = 5});
    oracle::Exploration ex = oracle::explore(hs);
    for (const auto& s : ex.states) {
      std::int64_t held = s.vars.at("shotCount") - s.vars.at("storedCount");
      CHECK(held >= 0);
      CHECK(held <= cap);
    }
  }
}

TEST_CASE("event names round-trip") {
  for (auto k : {CameraEventKind::HalfPress, CameraEventKind::FullPress, CameraEventKind::Hold, CameraEventKind::Release,
                 CameraEventKind::SelectSF, CameraEventKind::SelectMF, CameraEventKind::ToggleAF, CameraEventKind::ToggleAE}) {
    CHECK(camera_event_from_string(to_string(k)) == k);
  }
  CHECK_FALSE(camera_event_from_string("wiggle"));
}
