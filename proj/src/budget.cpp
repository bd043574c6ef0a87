#include "pmk/budget.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

namespace pmk {

std::string_view to_string(Target t) {
  switch (t) {
    case Target::GPP: return "GPP";
    case Target::DSP: return "DSP";
    case Target::Motors: return "Motors";
  }
  return "?";
}

std::optional<Target> target_from_string(std::string_view s) {
  if (s == "GPP") return Target::GPP;
  if (s == "DSP") return Target::DSP;
  if (s == "Motors") return Target::Motors;
  return std::nullopt;
}

DeploymentMatrix camera_deployment_matrix() {
  using enum Target;
  DeploymentMatrix m;
  m.rows = {
      {"AF", {GPP, DSP}}, {"AE", {GPP, DSP}}, {"IP", {DSP}}, {"IB", {DSP}},
      {"IS", {GPP}},      {"AS", {GPP, DSP}}, {"BC", {DSP}},
      // modes and submodes
      {"IDLE", {DSP}},    {"SF", {GPP, DSP}}, {"MF", {GPP, DSP}},
      {"FE", {GPP, DSP}}, {"F", {GPP, DSP}},  {"E", {GPP, DSP}}, {"0", {GPP, DSP}},
  };
  return m;
}

std::set<Target> deployment_options(const std::string& op, const DeploymentMatrix& matrix) {
  auto it = matrix.rows.find(op);
  if (it == matrix.rows.end()) throw BudgetError("unknown operation '" + op + "'");
  return it->second;
}

const CostEntry& ResourceProfile::at(const std::string& op, Target t) const {
  auto it = entries.find({op, t});
  if (it == entries.end()) {
    throw BudgetError("no profile entry for (" + op + ", " + std::string(to_string(t)) + ")");
  }
  return it->second;
}

ResourceProfile camera_default_profile() {
  struct Row {
    const char* op;
    double t[3];
    double e[3];
    std::set<Target> on;
  };
  const Row rows[] = {
      {"AF", {8, 12, 16}, {4, 6, 8}, {Target::GPP, Target::DSP}},
      {"AE", {6, 10, 12}, {3, 5, 6}, {Target::GPP, Target::DSP}},
      {"AS", {4, 6, 8}, {2, 3, 4}, {Target::GPP, Target::DSP}},
      {"IB", {10, 16, 20}, {5, 8, 10}, {Target::DSP}},
      {"IP", {30, 40, 50}, {15, 20, 25}, {Target::DSP}},
      {"IS", {20, 30, 40}, {10, 15, 20}, {Target::GPP}},
      {"BC", {2, 4, 4}, {1, 2, 2}, {Target::DSP}},
  };
  ResourceProfile p;
  for (const auto& r : rows) {
    for (Target t : r.on) {
      double tf = t == Target::DSP ? 0.5 : 1.0;
      double ef = t == Target::DSP ? 2.0 : 1.0;
      p.entries[{r.op, t}] = CostEntry{r.t[0] * tf, r.t[1] * tf, r.t[2] * tf,
                                       r.e[0] * ef, r.e[1] * ef, r.e[2] * ef};
    }
  }
  return p;
}

void check_profile(const ResourceProfile& profile, const DeploymentMatrix& matrix) {
  for (const auto& [key, e] : profile.entries) {
    const auto& [op, t] = key;
    std::string where = "(" + op + ", " + std::string(to_string(t)) + ")";
    if (!(e.bcet <= e.acet && e.acet <= e.wcet)) throw BudgetError("time budget out of order for " + where);
    if (!(e.bcec <= e.acec && e.acec <= e.wcec)) throw BudgetError("energy budget out of order for " + where);
    if (!deployment_options(op, matrix).count(t)) throw BudgetError("target not allowed for " + where);
  }
}

void check_config(const BudgetConfig& cfg) {
  if (cfg.buffer_capacity <= 0 || cfg.card_size <= 0 || cfg.image_size <= 0 ||
      cfg.shoot_period <= 0 || cfg.store_period <= 0) {
    throw BudgetError("budget config fields must be positive");
  }
  if (cfg.compression.num <= 0 || cfg.compression.den <= 0 ||
      cfg.compression.num > cfg.compression.den) {
    throw BudgetError("compression must lie in (0, 1]");
  }
}

CostEnvelope operator+(const CostEnvelope& a, const CostEnvelope& b) {
  auto add = [](const Triple& x, const Triple& y) {
    return Triple{x.best + y.best, x.expected + y.expected, x.worst + y.worst};
  };
  return {add(a.time, b.time), add(a.energy, b.energy)};
}

namespace {

CostEnvelope transition_cost(const Transition& t, const ResourceProfile& profile,
                             const DeploymentAssignment& assignment) {
  if (!t.operation) return {};
  auto it = assignment.find(*t.operation);
  if (it == assignment.end()) throw BudgetError("operation '" + *t.operation + "' is not assigned");
  const CostEntry& e = profile.at(*t.operation, it->second);
  return {{e.bcet, e.acet, e.wcet}, {e.bcec, e.acec, e.wcec}};
}

struct CostModel {
  const NetSemantics& sem;
  std::vector<CostEnvelope> per_transition;
  std::size_t horizon;

  // Bindings to choose between at m, with their probabilities. Empty at deadlock.
  std::vector<std::pair<Binding, double>> choices(const Marking& m) const {
    std::vector<Binding> enabled = sem.enabled_bindings(m);
    std::vector<std::pair<Binding, double>> out;
    if (enabled.empty()) return out;
    const Binding& first = enabled.front();
    Marking after_first = sem.fire(m, first);
    std::vector<Binding> group{first};
    for (std::size_t i = 1; i < enabled.size(); ++i) {
      const Binding& other = enabled[i];
      if (!sem.is_enabled(after_first, other) || !sem.is_enabled(sem.fire(m, other), first)) {
        group.push_back(other);
      }
    }
    if (group.size() == 1) {
      out.emplace_back(first, 1.0);
      return out;
    }
    double sum = 0;
    for (const auto& b : group) {
      const Transition& t = sem.net().transitions[b.transition];
      if (!t.probability) {
        throw BudgetError("conflict without probabilities at '" + sem.describe(b) + "'");
      }
      sum += *t.probability;
      out.emplace_back(b, *t.probability);
    }
    if (std::fabs(sum - 1.0) > 1e-9) {
      throw BudgetError("conflict probabilities at '" + sem.describe(first) + "' sum to " +
                        std::to_string(sum));
    }
    return out;
  }
};

struct Pair {
  double time = 0, energy = 0;
};

Pair exact(const CostModel& model, const Marking& m, std::size_t remaining,
           std::unordered_map<std::string, Pair>& memo) {
  if (remaining == 0) return {};
  std::string key = model.sem.encode(m) + "#" + std::to_string(remaining);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  Pair total;
  for (const auto& [b, p] : model.choices(m)) {
    Pair rest = exact(model, model.sem.fire(m, b), remaining - 1, memo);
    const CostEnvelope& c = model.per_transition[b.transition];
    total.time += p * (c.time.expected + rest.time);
    total.energy += p * (c.energy.expected + rest.energy);
  }
  memo.emplace(std::move(key), total);
  return total;
}

}  // namespace

CostEnvelope trace_cost(const ColouredNet& net, const std::vector<std::string>& trace,
                        const ResourceProfile& profile, const DeploymentAssignment& assignment) {
  CostEnvelope total;
  for (const auto& name : trace) {
    const Transition* t = net.find_transition(name);
    if (!t) throw BudgetError("unknown transition '" + name + "'");
    total = total + transition_cost(*t, profile, assignment);
  }
  return total;
}

ExpectedCost expected_cost(const ColouredNet& net, const DeploymentAssignment& assignment,
                           const ResourceProfile& profile, const ExpectedCostOptions& options) {
  NetSemantics sem(net);
  CostModel model{sem, {}, options.horizon};
  for (const auto& t : net.transitions) {
    model.per_transition.push_back(transition_cost(t, profile, assignment));
  }
  ExpectedCost out;
  Marking start = sem.initial_marking();

  if (options.method == CostMethod::Exact) {
    std::unordered_map<std::string, Pair> memo;
    Pair p = exact(model, start, options.horizon, memo);
    out.time = p.time;
    out.energy = p.energy;
    out.runs = 1;
    return out;
  }

  if (options.runs < 2) throw BudgetError("monte carlo needs at least two runs");
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double sum_t = 0, sum_t2 = 0, sum_e = 0, sum_e2 = 0;
  // Markings are numbered as they are met; runs then walk the numbered graph.
  struct Successor {
    std::size_t transition;
    double probability;
    std::size_t next;
  };
  std::unordered_map<Marking, std::size_t, MarkingHash> ids;
  std::vector<Marking> markings;
  std::vector<std::optional<std::vector<Successor>>> successors;
  auto id_of = [&](const Marking& m) {
    auto [it, fresh] = ids.emplace(m, markings.size());
    if (fresh) {
      markings.push_back(m);
      successors.emplace_back();
    }
    return it->second;
  };
  auto successors_of = [&](std::size_t id) -> const std::vector<Successor>& {
    if (!successors[id]) {
      std::vector<Successor> out;
      Marking m = markings[id];
      for (const auto& [b, p] : model.choices(m)) out.push_back({b.transition, p, id_of(sem.fire(m, b))});
      successors[id] = std::move(out);
    }
    return *successors[id];
  };
  std::size_t start_id = id_of(start);
  for (std::size_t run = 0; run < options.runs; ++run) {
    std::size_t at = start_id;
    double t = 0, e = 0;
    for (std::size_t step = 0; step < options.horizon; ++step) {
      const auto& opts = successors_of(at);
      if (opts.empty()) break;
      std::size_t pick = 0;
      if (opts.size() > 1) {
        double u = unit(rng);
        double acc = 0;
        pick = opts.size() - 1;
        for (std::size_t i = 0; i < opts.size(); ++i) {
          acc += opts[i].probability;
          if (u < acc) {
            pick = i;
            break;
          }
        }
      }
      const Successor& next = opts[pick];
      t += model.per_transition[next.transition].time.expected;
      e += model.per_transition[next.transition].energy.expected;
      at = next.next;
    }
    sum_t += t;
    sum_t2 += t * t;
    sum_e += e;
    sum_e2 += e * e;
  }
  double n = static_cast<double>(options.runs);
  auto stderr_of = [n](double s, double s2) {
    double var = (s2 - s * s / n) / (n - 1);
    return std::sqrt(std::max(var, 0.0) / n);
  };
  out.time = sum_t / n;
  out.energy = sum_e / n;
  out.time_stderr = stderr_of(sum_t, sum_t2);
  out.energy_stderr = stderr_of(sum_e, sum_e2);
  out.runs = options.runs;
  return out;
}

std::optional<std::int64_t> burst_feasibility(const BudgetConfig& cfg) {
  check_config(cfg);
  if (cfg.store_period <= cfg.shoot_period) return std::nullopt;
  // completion[j]: time image j leaves the buffer (storage is sequential).
  std::vector<std::int64_t> completion;
  std::size_t done = 0;
  for (std::int64_t k = 0;; ++k) {
    std::int64_t now = k * cfg.shoot_period;
    while (done < completion.size() && completion[done] <= now) ++done;
    std::int64_t occupancy = static_cast<std::int64_t>(completion.size() - done);
    if (occupancy >= cfg.buffer_capacity) return k;
    std::int64_t start = completion.empty() ? now : std::max(now, completion.back());
    completion.push_back(start + cfg.store_period);
  }
}

std::int64_t max_frames(const BudgetConfig& cfg) {
  check_config(cfg);
  return (cfg.card_size * cfg.compression.den) / (cfg.image_size * cfg.compression.num);
}

std::string_view to_string(Objective o) {
  return o == Objective::MinWorstTime ? "min-worst-time" : "min-worst-energy";
}

std::optional<Objective> objective_from_string(std::string_view s) {
  if (s == "min-worst-time") return Objective::MinWorstTime;
  if (s == "min-worst-energy") return Objective::MinWorstEnergy;
  return std::nullopt;
}

std::vector<std::string> net_operations(const ColouredNet& net) {
  std::set<std::string> ops;
  for (const auto& t : net.transitions) {
    if (t.operation) ops.insert(*t.operation);
  }
  return {ops.begin(), ops.end()};
}

CostEnvelope net_cost(const ColouredNet& net, const ResourceProfile& profile,
                      const DeploymentAssignment& assignment) {
  CostEnvelope total;
  for (const auto& t : net.transitions) total = total + transition_cost(t, profile, assignment);
  return total;
}

double objective_value(const CostEnvelope& c, Objective o) {
  return o == Objective::MinWorstTime ? c.time.worst : c.energy.worst;
}

AssignmentResult optimize_assignment(const ColouredNet& net, const DeploymentMatrix& matrix,
                                     const ResourceProfile& profile, Objective objective,
                                     const std::string& context) {
  std::vector<std::string> ops = net_operations(net);
  std::vector<std::vector<Target>> options;
  for (const auto& op : ops) {
    std::set<Target> allowed = deployment_options(op, matrix);
    if (context == "IDLE") allowed.erase(Target::DSP);
    if (allowed.empty()) {
      throw BudgetError("infeasible: operation '" + op + "' has no allowed target in context '" +
                        context + "'");
    }
    options.emplace_back(allowed.begin(), allowed.end());
  }

  std::vector<std::size_t> choice(ops.size(), 0);
  std::optional<AssignmentResult> best;
  while (true) {
    DeploymentAssignment a;
    for (std::size_t i = 0; i < ops.size(); ++i) a[ops[i]] = options[i][choice[i]];
    CostEnvelope c = net_cost(net, profile, a);
    double v = objective_value(c, objective);
    if (!best || v < best->objective) best = AssignmentResult{a, c, v};
    std::size_t i = ops.size();
    while (i > 0) {
      --i;
      if (++choice[i] < options[i].size()) break;
      choice[i] = 0;
      if (i == 0) return *best;
    }
    if (ops.empty()) return *best;
  }
}

}  // namespace pmk
