#include <doctest.h>

#include "generators.hpp"
#include "oracles.hpp"
#include "pmk/budget.hpp"
#include "pmk/camera.hpp"
#include "pmk/model_io.hpp"

using namespace pmk;

TEST_CASE("trace cost sums the assigned worst cases") {
  ColouredNet hs = build_hs_net();
  ResourceProfile p = camera_default_profile();
  DeploymentAssignment a{{"IB", Target::DSP}, {"IP", Target::DSP}};
  CHECK(p.at("IB", Target::DSP).wcet == 10);
  CHECK(p.at("IP", Target::DSP).wcet == 25);
  CostEnvelope c = trace_cost(hs, {"do IB", "do IP"}, p, a);
  CHECK(c.time.worst == 35);
  CHECK(c.time.best == p.at("IB", Target::DSP).bcet + p.at("IP", Target::DSP).bcet);
  CHECK(c.energy.expected == p.at("IB", Target::DSP).acec + p.at("IP", Target::DSP).acec);
  CHECK(trace_cost(hs, {"Shoot"}, p, a) == CostEnvelope{});
  CHECK_THROWS_AS(trace_cost(hs, {"do AF"}, p, a), BudgetError);
  CHECK_THROWS_AS(p.at("IS", Target::DSP), BudgetError);
}

TEST_CASE("default profile respects the component table") {
  CHECK_NOTHROW(check_profile(camera_default_profile(), camera_deployment_matrix()));
  ResourceProfile bad = camera_default_profile();
  bad.entries[{"IS", Target::DSP}] = {1, 2, 3, 1, 2, 3};
  CHECK_THROWS_AS(check_profile(bad, camera_deployment_matrix()), BudgetError);
  ResourceProfile disordered = camera_default_profile();
  disordered.entries[{"AF", Target::GPP}].acet = 100;
  CHECK_THROWS_AS(check_profile(disordered, camera_deployment_matrix()), BudgetError);
  CHECK_THROWS_AS(deployment_options("nope", camera_deployment_matrix()), BudgetError);
}

TEST_CASE("first delayed frame matches the event-driven oracle") {
  auto at = [](std::int64_t shoot, std::int64_t store, std::int64_t cap) {
    BudgetConfig c;
    c.shoot_period = shoot;
    c.store_period = store;
    c.buffer_capacity = cap;
    return c;
  };
  CHECK(oracle::first_delayed_frame(10, 40, 4, 20) == 5);
  CHECK(burst_feasibility(at(10, 40, 4)) == 5);
  CHECK(oracle::first_delayed_frame(1, 2, 1, 20) == 1);
  CHECK(burst_feasibility(at(1, 2, 1)) == 1);
  CHECK_FALSE(burst_feasibility(at(40, 10, 1)));
  CHECK_FALSE(oracle::first_delayed_frame(40, 10, 1, 20));
  for (std::int64_t shoot = 1; shoot <= 12; ++shoot) {
    for (std::int64_t store = 1; store <= 12; ++store) {
      for (std::int64_t cap = 1; cap <= 3; ++cap) {
        CAPTURE(shoot);
        CAPTURE(store);
        CAPTURE(cap);
        CHECK(burst_feasibility(at(shoot, store, cap)) == oracle::first_delayed_frame(shoot, store, cap, 200));
      }
    }
  }
  BudgetConfig zero;
  zero.shoot_period = 0;
  CHECK_THROWS_AS(burst_feasibility(zero), BudgetError);
}

TEST_CASE("card holds card * den / (image * num) frames") {
  BudgetConfig c;
  CHECK(max_frames(c) == 1000 * 5 / 25);
  c.compression = {2, 3};
  CHECK(max_frames(c) == 1000 * 3 / (25 * 2));
  c.compression = {3, 2};
  CHECK_THROWS_AS(max_frames(c), BudgetError);
}

TEST_CASE("time objective moves work to the DSP, energy objective keeps it on the GPP") {
  ColouredNet hs = build_hs_net();
  DeploymentMatrix m = camera_deployment_matrix();
  ResourceProfile p = camera_default_profile();
  AssignmentResult time = optimize_assignment(hs, m, p, Objective::MinWorstTime);
  AssignmentResult energy = optimize_assignment(hs, m, p, Objective::MinWorstEnergy);
  for (const char* op : {"AF", "AE", "IB", "IP"}) CHECK(time.assignment.at(op) == Target::DSP);
  for (const char* op : {"AF", "AE", "AS"}) CHECK(energy.assignment.at(op) == Target::GPP);
  CHECK(energy.assignment.at("IS") == Target::GPP);
  CHECK(time.objective == oracle::brute_force_minimum(hs, m, p, Objective::MinWorstTime, false));
  CHECK(energy.objective == oracle::brute_force_minimum(hs, m, p, Objective::MinWorstEnergy, false));
  CHECK(time.objective == objective_value(time.cost, Objective::MinWorstTime));
}

TEST_CASE("IDLE context never uses the DSP") {
  ColouredNet idle = build_idle_net();
  DeploymentMatrix m = camera_deployment_matrix();
  ResourceProfile p = camera_default_profile();
  for (auto o : {Objective::MinWorstTime, Objective::MinWorstEnergy}) {
    AssignmentResult r = optimize_assignment(idle, m, p, o, "IDLE");
    for (const auto& [op, t] : r.assignment) CHECK(t != Target::DSP);
    CHECK(r.objective == oracle::brute_force_minimum(idle, m, p, o, true));
  }
  // Buffer check only runs on the DSP, so HS work cannot be placed while idle.
  CHECK_THROWS_AS(optimize_assignment(build_hs_net(), m, p, Objective::MinWorstTime, "IDLE"), BudgetError);
}

TEST_CASE("optimal assignment equals brute force on random nets") {
  gen::Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    ColouredNet n = gen::op_net(rng, 6);
    DeploymentMatrix m = gen::matrix_for(rng, n);
    ResourceProfile p = gen::profile_for(rng, m);
    for (auto o : {Objective::MinWorstTime, Objective::MinWorstEnergy}) {
      AssignmentResult r = optimize_assignment(n, m, p, o);
      CHECK(r.objective == oracle::brute_force_minimum(n, m, p, o, false));
      CHECK(oracle::sum_cost(n, p, r.assignment, o) == r.objective);
    }
  }
}

TEST_CASE("two-branch expectation is the probability-weighted sum") {
  ModelDoc doc = parse_model(R"(pmkit-model 1
net Branch {
  colour Sig = { s };
  component C;
  place p : Sig in C = 1`s;
  place q : Sig in C;
  transition left in C { op L; prob 0.3; in p : 1`s; out q : 1`s; }
  transition right in C { op R; prob 0.7; in p : 1`s; out q : 1`s; }
  transition done in C { op D; in q : 1`s; }
}
)");
  ResourceProfile p;
  p.entries[{"L", Target::GPP}] = {1, 10, 20, 2, 4, 8};
  p.entries[{"R", Target::GPP}] = {1, 20, 30, 1, 1, 1};
  p.entries[{"D", Target::GPP}] = {1, 5, 9, 3, 3, 3};
  DeploymentAssignment a{{"L", Target::GPP}, {"R", Target::GPP}, {"D", Target::GPP}};
  const ColouredNet& net = doc.nets.front();
  ExpectedCost exact = expected_cost(net, a, p, {});
  CHECK(exact.time == doctest::Approx(0.3 * 10 + 0.7 * 20 + 5));
  CHECK(exact.energy == doctest::Approx(0.3 * 4 + 0.7 * 1 + 3));
  auto [t, e] = oracle::expectation(net, p, a, 1000);
  CHECK(exact.time == doctest::Approx(t));
  CHECK(exact.energy == doctest::Approx(e));

  ExpectedCost mc = expected_cost(net, a, p, {.method = CostMethod::MonteCarlo, .runs = 20000, .seed = 3});
  CHECK(std::abs(mc.time - exact.time) <= 4 * mc.time_stderr);
  CHECK(mc.runs == 20000);
}

TEST_CASE("HS expectation matches the path-enumeration oracle") {
  ColouredNet hs = build_hs_net({.buffer_capacity = 2, .frames = 3, .probabilistic_bc = true});
  ResourceProfile p = camera_default_profile();
  DeploymentAssignment a = optimize_assignment(hs, camera_deployment_matrix(), p, Objective::MinWorstEnergy).assignment;
  ExpectedCost exact = expected_cost(hs, a, p, {});
  auto [t, e] = oracle::expectation(hs, p, a, 1000);
  CHECK(exact.time == doctest::Approx(t));
  CHECK(exact.energy == doctest::Approx(e));
  ExpectedCost capped = expected_cost(hs, a, p, {.horizon = 7});
  auto [t7, e7] = oracle::expectation(hs, p, a, 7);
  CHECK(capped.time == doctest::Approx(t7));
  CHECK(capped.energy == doctest::Approx(e7));
}

TEST_CASE("conflicts need probabilities summing to one") {
  ModelDoc doc = parse_model(R"(pmkit-model 1
net Bad {
  colour Sig = { s };
  component C;
  place p : Sig in C = 1`s;
  transition a in C { prob 0.5; in p : 1`s; }
  transition b in C { prob 0.2; in p : 1`s; }
}
)");
  CHECK_THROWS_AS(expected_cost(doc.nets.front(), {}, {}, {}), BudgetError);
}
