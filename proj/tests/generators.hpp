#pragma once

// Seeded random inputs for property tests.

#include <algorithm>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "pmk/budget.hpp"
#include "pmk/cpn.hpp"
#include "pmk/layout.hpp"
#include "pmk/mode.hpp"
#include "pmk/model_io.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline std::int64_t uniform(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }
template <class T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(v.size()) - 1))];
}

inline pmk::Arc arc(const std::string& place, const std::string& symbol = "s", std::int64_t k = 1) {
  return pmk::Arc{place, {pmk::ArcTerm{pmk::Expr::constant(k), symbol}}, std::nullopt};
}

// A token-conserving cycle of places whose transitions carry operations drawn
// from at most `max_ops` names.
inline pmk::ColouredNet op_net(Rng& rng, std::size_t max_ops) {
  pmk::ColouredNet n;
  n.name = "Ops";
  n.colour_sets.push_back({"Sig", {"s"}});
  n.components.push_back({"C", std::nullopt});
  std::size_t ops = static_cast<std::size_t>(uniform(rng, 1, static_cast<std::int64_t>(max_ops)));
  std::size_t places = static_cast<std::size_t>(uniform(rng, 2, 6));
  for (std::size_t i = 0; i < places; ++i) {
    pmk::Place p{"p" + std::to_string(i), "Sig", "C", std::nullopt, {}};
    if (i == 0) p.initial.emplace_back("s", 1);
    n.places.push_back(p);
  }
  std::size_t count = static_cast<std::size_t>(uniform(rng, static_cast<std::int64_t>(ops), static_cast<std::int64_t>(ops) + 4));
  for (std::size_t i = 0; i < count; ++i) {
    pmk::Transition t;
    t.name = "t" + std::to_string(i);
    t.component = "C";
    std::size_t from = static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(places) - 1));
    t.inputs.push_back(arc("p" + std::to_string(from)));
    t.outputs.push_back(arc("p" + std::to_string((from + 1) % places)));
    // Every operation appears at least once.
    std::size_t op = i < ops ? i : static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(ops) - 1));
    if (i < ops || coin(rng, 0.7)) t.operation = "op" + std::to_string(op);
    n.transitions.push_back(t);
  }
  return n;
}

inline pmk::DeploymentMatrix matrix_for(Rng& rng, const pmk::ColouredNet& n) {
  pmk::DeploymentMatrix m;
  const pmk::Target all[] = {pmk::Target::GPP, pmk::Target::DSP, pmk::Target::Motors};
  for (const auto& op : pmk::net_operations(n)) {
    std::set<pmk::Target> row;
    for (auto t : all) {
      if (coin(rng, 0.6)) row.insert(t);
    }
    if (row.empty()) row.insert(all[uniform(rng, 0, 2)]);
    m.rows[op] = row;
  }
  return m;
}

inline pmk::ResourceProfile profile_for(Rng& rng, const pmk::DeploymentMatrix& m) {
  pmk::ResourceProfile p;
  for (const auto& [op, row] : m.rows) {
    for (auto t : row) {
      auto triple = [&] {
        std::vector<double> v{double(uniform(rng, 1, 40)), double(uniform(rng, 1, 40)), double(uniform(rng, 1, 40))};
        std::sort(v.begin(), v.end());
        return v;
      };
      auto time = triple(), energy = triple();
      p.entries[{op, t}] = {time[0], time[1], time[2], energy[0], energy[1], energy[2]};
    }
  }
  return p;
}

// Bounded counters incremented and tested by transitions of the counters'
// component; a fixed number of tokens circulates.
inline pmk::ColouredNet counter_net(Rng& rng) {
  pmk::ColouredNet n;
  n.name = "Counters";
  n.colour_sets.push_back({"Sig", {"s"}});
  n.colour_sets.push_back({"Img", {"a", "b"}});
  n.components.push_back({"Work", std::nullopt});
  n.components.push_back({"Other", std::nullopt});
  std::size_t counters = static_cast<std::size_t>(uniform(rng, 1, 2));
  for (std::size_t i = 0; i < counters; ++i) {
    n.variables.push_back({"c" + std::to_string(i), pmk::VarKind::Counter, "Work", uniform(rng, 1, 5), 0});
  }
  n.variables.push_back({"Limit", pmk::VarKind::Global, "", std::nullopt, uniform(rng, 0, 2)});
  std::size_t places = static_cast<std::size_t>(uniform(rng, 2, 5));
  bool coloured = coin(rng, 0.3);
  for (std::size_t i = 0; i < places; ++i) {
    pmk::Place p{"q" + std::to_string(i), coloured && i == 0 ? "Img" : "Sig", "Work", std::nullopt, {}};
    n.places.push_back(p);
  }
  if (coloured) n.places[0].initial.emplace_back("a", 1);
  else n.places[0].initial.emplace_back("s", uniform(rng, 1, 3));
  auto c = [&](std::size_t i) { return "c" + std::to_string(i); };
  std::size_t count = static_cast<std::size_t>(uniform(rng, 3, 6));
  for (std::size_t i = 0; i < count; ++i) {
    pmk::Transition t;
    t.name = "u" + std::to_string(i);
    t.component = "Work";
    std::size_t from = static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(places) - 1));
    std::size_t to = static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(places) - 1));
    const std::string& in_colour = n.places[from].colour;
    const std::string& out_colour = n.places[to].colour;
    if (in_colour == "Img" && out_colour == "Img") {
      t.inputs.push_back(arc(n.places[from].name, "x"));
      t.outputs.push_back(arc(n.places[to].name, coin(rng) ? "x" : "b"));
    } else {
      t.inputs.push_back(arc(n.places[from].name, in_colour == "Img" ? "x" : "s"));
      t.outputs.push_back(arc(n.places[to].name, out_colour == "Img" ? "a" : "s"));
    }
    std::size_t k = static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(counters) - 1));
    if (coin(rng, 0.7)) {
      t.assignments.push_back({c(k), pmk::parse_expr(c(k) + " + " + std::to_string(uniform(rng, 1, 2)))});
    }
    switch (uniform(rng, 0, 3)) {
      case 0: t.guard = pmk::parse_expr(c(k) + " < " + std::to_string(uniform(rng, 1, 3))); break;
      case 1:
        if (counters == 2) t.guard = pmk::parse_expr("c0 - c1 <= Limit");
        break;
      case 2: t.guard = pmk::parse_expr(c(k) + " == Limit || " + c(k) + " > 1"); break;
      default: break;
    }
    if (coin(rng, 0.2)) t.inputs.back().terms.back().count = pmk::parse_expr("1 + " + c(k) + " - " + c(k));
    n.transitions.push_back(t);
  }
  // A reset-free observer in another component that never touches counters.
  pmk::Transition idle;
  idle.name = "observe";
  idle.component = "Other";
  idle.guard = pmk::parse_expr("Limit >= 0");
  idle.inputs.push_back(arc(n.places.back().name, n.places.back().colour == "Img" ? "a" : "s"));
  idle.outputs.push_back(arc(n.places.back().name, n.places.back().colour == "Img" ? "a" : "s"));
  n.transitions.push_back(idle);
  return n;
}

// Routes over a small grid so that shared endpoints, collinear overlaps and
// degenerate segments are common.
inline pmk::Diagram diagram(Rng& rng, std::size_t max_segments) {
  pmk::Diagram d;
  std::size_t budget = static_cast<std::size_t>(uniform(rng, 1, static_cast<std::int64_t>(max_segments)));
  std::int64_t span = uniform(rng, 2, 6);
  auto point = [&] { return pmk::Point{uniform(rng, -span, span), uniform(rng, 0, span)}; };
  while (budget > 0) {
    pmk::Route r;
    r.from = "n" + std::to_string(d.routes.size());
    r.to = r.from;
    std::size_t segs = std::min<std::size_t>(budget, static_cast<std::size_t>(uniform(rng, 1, 3)));
    if (!d.routes.empty() && coin(rng, 0.15)) {
      r.points = d.routes.back().points;
      std::reverse(r.points.begin(), r.points.end());
      segs = r.points.size() - 1;
      if (segs > budget || segs == 0) continue;
    } else {
      r.points.push_back(point());
      for (std::size_t i = 0; i < segs; ++i) r.points.push_back(coin(rng, 0.05) ? r.points.back() : point());
    }
    budget -= segs;
    d.routes.push_back(r);
  }
  return d;
}

// About `size` nodes, alternating places and transitions, with coloured paths.
inline std::pair<pmk::ColouredNet, std::map<std::string, std::string>> layout_net(Rng& rng, std::size_t size) {
  pmk::ColouredNet n;
  n.name = "L";
  n.colour_sets.push_back({"Sig", {"s"}});
  n.components.push_back({"C", std::nullopt});
  std::size_t places = size / 2, transitions = size - places;
  for (std::size_t i = 0; i < places; ++i) {
    pmk::Place p{"p" + std::to_string(i), "Sig", "C", std::nullopt, {}};
    if (i == 0 || coin(rng, 0.1)) p.initial.emplace_back("s", 1);
    n.places.push_back(p);
  }
  for (std::size_t i = 0; i < transitions; ++i) {
    pmk::Transition t;
    t.name = "t" + std::to_string(i);
    t.component = "C";
    auto p = [&] { return "p" + std::to_string(uniform(rng, 0, static_cast<std::int64_t>(places) - 1)); };
    t.inputs.push_back(arc(i < places ? "p" + std::to_string(i) : p()));
    t.outputs.push_back(arc(i + 1 < places ? "p" + std::to_string(i + 1) : p()));
    n.transitions.push_back(t);
  }
  std::map<std::string, std::string> colours;
  for (const auto& p : n.places) {
    if (coin(rng, 0.7)) colours[p.name] = coin(rng) ? "green" : "red";
  }
  for (const auto& t : n.transitions) {
    if (coin(rng, 0.7)) colours[t.name] = coin(rng) ? "green" : "red";
  }
  return {n, colours};
}

// ---------------------------------------------------------------- documents

inline std::string name(Rng& rng, const std::string& stem) {
  static const std::vector<std::string> decorations{"", "", "", " x", "-1", "_y", " do"};
  return stem + std::to_string(uniform(rng, 0, 999)) + pick(rng, decorations);
}

inline double decimal(Rng& rng) {
  return std::uniform_real_distribution<double>(0.001, 100.0)(rng);
}

inline pmk::ColouredNet doc_net(Rng& rng, const std::string& net_name) {
  pmk::ColouredNet n;
  n.name = net_name;
  n.colour_sets.push_back({"Sig", {"s"}});
  n.colour_sets.push_back({"Val", {"v0", "v1", "v2"}});
  const std::vector<std::string> sites{"GPP", "DSP", "Motors", "Buffer", "Flash"};
  std::size_t comps = static_cast<std::size_t>(uniform(rng, 1, 3));
  for (std::size_t i = 0; i < comps; ++i) {
    pmk::Component c{"K" + std::to_string(i) + (coin(rng, 0.3) ? " part" : ""), std::nullopt};
    if (coin(rng, 0.4)) c.site = pmk::site_from_string(pick(rng, sites));
    n.components.push_back(c);
  }
  auto comp = [&] { return pick(rng, n.components).name; };
  n.variables.push_back({"G", pmk::VarKind::Global, "", std::nullopt, uniform(rng, -5, 5)});
  n.variables.push_back({"cnt", pmk::VarKind::Counter, n.components[0].name, uniform(rng, 1, 9), 0});
  if (coin(rng)) n.variables.push_back({"loc", pmk::VarKind::Local, comp(), std::nullopt, uniform(rng, 0, 3)});
  if (coin(rng)) n.variables.push_back({"clk", pmk::VarKind::Clock, "", uniform(rng, 5, 50), 0});
  std::size_t places = static_cast<std::size_t>(uniform(rng, 1, 5));
  for (std::size_t i = 0; i < places; ++i) {
    bool val = coin(rng);
    pmk::Place p{coin(rng, 0.2) ? name(rng, "place ") : "p" + std::to_string(i), val ? "Val" : "Sig", comp(), std::nullopt, {}};
    p.name += "_" + std::to_string(i);
    if (coin(rng, 0.3)) p.capacity = uniform(rng, 1, 9);
    if (coin(rng)) p.initial.emplace_back(val ? "v1" : "s", uniform(rng, 1, 3));
    if (val && coin(rng, 0.3)) p.initial.emplace_back("v2", 1);
    n.places.push_back(p);
  }
  const std::vector<std::string> guards{"G > 0", "cnt < 3 && G != 1", "!(cnt == 2) || G <= -1", "-G + 2 * cnt >= 0"};
  std::size_t transitions = static_cast<std::size_t>(uniform(rng, 0, 4));
  for (std::size_t i = 0; i < transitions; ++i) {
    pmk::Transition t;
    t.name = (coin(rng, 0.4) ? "do T" : "T") + std::to_string(i);
    if (coin(rng, 0.3)) t.label = name(rng, "label ");
    t.component = n.components[0].name;
    if (coin(rng)) t.guard = pmk::parse_expr(pick(rng, guards));
    if (coin(rng, 0.3)) t.probability = std::uniform_real_distribution<double>(0.01, 1.0)(rng);
    if (coin(rng)) t.operation = "OP" + std::to_string(uniform(rng, 0, 3));
    const pmk::Place& in = pick(rng, n.places);
    std::string sym = in.colour == "Val" ? (coin(rng) ? "x" : "v0") : "s";
    pmk::Arc a = arc(in.name, sym, uniform(rng, 1, 2));
    if (in.colour == "Val" && coin(rng, 0.3)) a.terms.push_back({pmk::parse_expr("cnt + 1"), "v2"});
    t.inputs.push_back(a);
    const pmk::Place& out = pick(rng, n.places);
    pmk::Arc b = arc(out.name, out.colour == "Val" ? (in.colour == "Val" && sym == "x" ? "x" : "v1") : "s");
    if (coin(rng, 0.3)) b.sync_role = "cnt";
    t.outputs.push_back(b);
    if (coin(rng)) t.assignments.push_back({"cnt", pmk::parse_expr("cnt + 1")});
    n.transitions.push_back(t);
  }
  return n;
}

inline pmk::ModeAutomaton doc_automaton(Rng& rng, const std::string& aut_name,
                                        const std::vector<std::shared_ptr<const pmk::ColouredNet>>& nets) {
  pmk::Mode root;
  root.name = "Root";
  std::vector<std::string> leaves;
  std::size_t kids = static_cast<std::size_t>(uniform(rng, 1, 3));
  for (std::size_t i = 0; i < kids; ++i) {
    pmk::Mode m;
    m.name = "M" + std::to_string(i) + (coin(rng, 0.3) ? " mode" : "");
    if (coin(rng, 0.4)) {
      for (std::size_t j = 0; j < 2; ++j) {
        pmk::Mode c;
        c.name = m.name + "." + std::to_string(j);
        if (!nets.empty() && coin(rng)) c.refinement = pick(rng, nets);
        leaves.push_back(c.name);
        m.children.push_back(c);
      }
      m.initial_child = m.children[0].name;
    } else {
      if (!nets.empty() && coin(rng)) m.refinement = pick(rng, nets);
      leaves.push_back(m.name);
    }
    if (coin(rng)) m.on_entry.push_back({"g", pmk::parse_expr(std::to_string(uniform(rng, 0, 4)))});
    root.children.push_back(m);
  }
  root.initial_child = root.children[0].name;
  std::vector<std::string> events{"go", "stop", "press down"};
  std::vector<pmk::ModeTransition> ts;
  for (const auto& l : leaves) {
    if (coin(rng, 0.3)) {
      double p = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
      ts.push_back({l, "go", std::nullopt, pick(rng, leaves), p});
      ts.push_back({l, "go", std::nullopt, root.children.back().name, 1.0 - p});
    } else if (coin(rng)) {
      ts.push_back({l, pick(rng, events), coin(rng) ? std::optional(pmk::parse_expr("g >= 1")) : std::nullopt,
                    pick(rng, leaves), std::nullopt});
    }
  }
  return pmk::ModeAutomaton(aut_name, root, events, ts, {{"g", uniform(rng, 0, 3)}});
}

inline pmk::ModelDoc model_doc(Rng& rng) {
  pmk::ModelDoc doc;
  std::size_t nets = static_cast<std::size_t>(uniform(rng, 0, 3));
  std::vector<std::shared_ptr<const pmk::ColouredNet>> shared;
  for (std::size_t i = 0; i < nets; ++i) {
    doc.nets.push_back(doc_net(rng, "N" + std::to_string(i) + (coin(rng, 0.3) ? " net" : "")));
    shared.push_back(std::make_shared<const pmk::ColouredNet>(doc.nets.back()));
  }
  std::size_t automata = static_cast<std::size_t>(uniform(rng, 0, 2));
  for (std::size_t i = 0; i < automata; ++i) doc.automata.push_back(doc_automaton(rng, "A" + std::to_string(i), shared));
  if (coin(rng)) {
    pmk::DeploymentMatrix m;
    m.rows["OP0"] = {pmk::Target::GPP};
    m.rows["OP1"] = {pmk::Target::GPP, pmk::Target::DSP};
    m.rows["MODE X"] = {pmk::Target::DSP, pmk::Target::Motors};
    doc.matrix = m;
  }
  if (coin(rng)) {
    pmk::ResourceProfile p;
    for (const char* op : {"OP0", "OP1", "OP2"}) {
      if (coin(rng)) {
        p.entries[{op, pmk::Target::GPP}] = {decimal(rng), decimal(rng), decimal(rng), decimal(rng), decimal(rng), decimal(rng)};
      }
    }
    doc.profile = p;
  }
  if (coin(rng)) {
    doc.config = pmk::BudgetConfig{uniform(rng, 1, 9), uniform(rng, 100, 9999), uniform(rng, 1, 99),
                                   {uniform(rng, 1, 3), uniform(rng, 3, 9)}, uniform(rng, 1, 50), uniform(rng, 1, 50)};
  }
  for (const auto& n : doc.nets) {
    if (!coin(rng)) continue;
    auto& tags = doc.colours[n.name];
    for (const auto& p : n.places) {
      if (coin(rng)) tags[p.name] = coin(rng) ? "green" : "red";
    }
    for (const auto& t : n.transitions) {
      if (coin(rng)) tags[t.name] = "red";
    }
    if (tags.empty()) doc.colours.erase(n.name);
  }
  return doc;
}

}  // namespace gen
