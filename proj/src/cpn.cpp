#include "pmk/cpn.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>
#include <sstream>

#include "pmk/graph.hpp"

namespace pmk {

std::optional<std::size_t> ColourSet::index_of(std::string_view value) const {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == value) return i;
  }
  return std::nullopt;
}

std::string_view to_string(Site s) {
  switch (s) {
    case Site::GPP: return "GPP";
    case Site::DSP: return "DSP";
    case Site::Motors: return "Motors";
    case Site::Buffer: return "Buffer";
    case Site::Flash: return "Flash";
  }
  return "?";
}

std::optional<Site> site_from_string(std::string_view s) {
  for (Site x : {Site::GPP, Site::DSP, Site::Motors, Site::Buffer, Site::Flash}) {
    if (to_string(x) == s) return x;
  }
  return std::nullopt;
}

std::string_view to_string(VarKind k) {
  switch (k) {
    case VarKind::Local: return "local";
    case VarKind::Global: return "global";
    case VarKind::Counter: return "counter";
    case VarKind::Clock: return "clock";
  }
  return "?";
}

namespace {

template <typename T>
const T* find_named(const std::vector<T>& items, std::string_view n) {
  for (const auto& item : items) {
    if (item.name == n) return &item;
  }
  return nullptr;
}

template <typename T>
std::optional<std::size_t> index_named(const std::vector<T>& items, std::string_view n) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].name == n) return i;
  }
  return std::nullopt;
}

}  // namespace

const ColourSet* ColouredNet::find_colour_set(std::string_view n) const { return find_named(colour_sets, n); }
const Place* ColouredNet::find_place(std::string_view n) const { return find_named(places, n); }
const Transition* ColouredNet::find_transition(std::string_view n) const { return find_named(transitions, n); }
const Variable* ColouredNet::find_variable(std::string_view n) const { return find_named(variables, n); }
const Component* ColouredNet::find_component(std::string_view n) const { return find_named(components, n); }
std::optional<std::size_t> ColouredNet::place_index(std::string_view n) const { return index_named(places, n); }
std::optional<std::size_t> ColouredNet::transition_index(std::string_view n) const { return index_named(transitions, n); }
std::optional<std::size_t> ColouredNet::variable_index(std::string_view n) const { return index_named(variables, n); }

TimeInfeasibleError::TimeInfeasibleError(std::string clock, std::int64_t lo, std::int64_t hi,
                                         std::int64_t requested)
    : NetError("time infeasible: clock '" + clock + "' must stay in [" + std::to_string(lo) + ", " +
               std::to_string(hi) + "], requested " + std::to_string(requested)),
      clock_(std::move(clock)),
      lo_(lo),
      hi_(hi),
      requested_(requested) {}

std::size_t MarkingHash::operator()(const Marking& m) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ull ^ static_cast<std::size_t>(m.time);
  auto mix = [&h](std::int64_t v) {
    h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  for (const auto& p : m.tokens) {
    mix(static_cast<std::int64_t>(p.size()));
    for (auto c : p) mix(c);
  }
  for (auto v : m.store) mix(v);
  return h;
}

// ---------------------------------------------------------------------------
// Validation

std::vector<Violation> validate_net(const ColouredNet& net) {
  std::vector<Violation> out;
  auto report = [&out](std::string_view kind, std::string message) {
    out.push_back(Violation{std::string(kind), std::move(message)});
  };

  auto check_unique = [&](const auto& items, std::string_view what) {
    std::set<std::string> seen;
    for (const auto& item : items) {
      if (!seen.insert(item.name).second) {
        report(kDuplicate, std::string(what) + " '" + item.name + "' declared twice");
      }
    }
  };
  check_unique(net.colour_sets, "colour set");
  check_unique(net.components, "component");
  check_unique(net.variables, "variable");
  check_unique(net.places, "place");
  check_unique(net.transitions, "transition");

  for (const auto& cs : net.colour_sets) {
    if (cs.values.empty()) report(kBadMarking, "colour set '" + cs.name + "' is empty");
    std::set<std::string> vals(cs.values.begin(), cs.values.end());
    if (vals.size() != cs.values.size()) {
      report(kDuplicate, "colour set '" + cs.name + "' repeats a value");
    }
  }

  for (const auto& v : net.variables) {
    if ((v.kind == VarKind::Counter || v.kind == VarKind::Clock) && !v.bound) {
      report(kMissingBound, std::string(to_string(v.kind)) + " '" + v.name + "' has no bound");
    }
    if (v.kind == VarKind::Global && !v.scope.empty()) {
      report(kOutOfScope, "global parameter '" + v.name + "' must not carry a scope");
    }
    if (!v.scope.empty() && !net.find_component(v.scope)) {
      report(kDangling, "variable '" + v.name + "' scoped to unknown component '" + v.scope + "'");
    }
    if (v.bound && (v.initial > *v.bound || v.initial < 0) &&
        (v.kind == VarKind::Counter || v.kind == VarKind::Clock)) {
      report(kBadMarking, "variable '" + v.name + "' starts outside [0, bound]");
    }
  }

  for (const auto& p : net.places) {
    const ColourSet* cs = net.find_colour_set(p.colour);
    if (!cs) report(kDangling, "place '" + p.name + "' uses unknown colour set '" + p.colour + "'");
    if (!net.find_component(p.component)) {
      report(kDangling, "place '" + p.name + "' in unknown component '" + p.component + "'");
    }
    if (p.capacity && *p.capacity < 1) {
      report(kBadMarking, "place '" + p.name + "' capacity must be at least 1");
    }
    std::int64_t total = 0;
    for (const auto& [val, n] : p.initial) {
      if (cs && !cs->index_of(val)) {
        report(kBadMarking, "place '" + p.name + "' initial token '" + val + "' not in colour set");
      }
      if (n < 0) report(kBadMarking, "place '" + p.name + "' has a negative initial count");
      total += n;
    }
    if (p.capacity && total > *p.capacity) {
      report(kBadMarking, "place '" + p.name + "' initial marking exceeds capacity");
    }
  }

  std::set<std::string> colour_constants;
  for (const auto& cs : net.colour_sets) colour_constants.insert(cs.values.begin(), cs.values.end());

  for (const auto& t : net.transitions) {
    const std::string tag = "transition '" + t.name + "'";
    if (!net.find_component(t.component)) {
      report(kDangling, tag + " in unknown component '" + t.component + "'");
    }
    if (t.probability && !(*t.probability > 0.0 && *t.probability <= 1.0)) {
      report(kBadProbability, tag + " probability outside (0, 1]");
    }

    std::set<std::string> binding_vars;
    std::set<std::string> refs;
    for (const auto* arcs : {&t.inputs, &t.outputs}) {
      for (const auto& arc : *arcs) {
        const Place* p = net.find_place(arc.place);
        if (!p) {
          report(kDangling, tag + " arc references unknown place '" + arc.place + "'");
        }
        const ColourSet* cs = p ? net.find_colour_set(p->colour) : nullptr;
        for (const auto& term : arc.terms) {
          collect_refs(term.count, refs);
          if (cs && cs->index_of(term.symbol)) continue;
          if (net.find_variable(term.symbol)) {
            report(kOutOfScope, tag + " uses store variable '" + term.symbol + "' as a token");
            continue;
          }
          binding_vars.insert(term.symbol);
        }
        if (arc.sync_role) {
          const Variable* v = net.find_variable(*arc.sync_role);
          if (!v || v->kind != VarKind::Counter) {
            report(kDangling, tag + " sync role '" + *arc.sync_role + "' is not a counter");
          }
        }
      }
    }
    if (t.guard) collect_refs(*t.guard, refs);
    for (const auto& a : t.assignments) {
      refs.insert(a.variable);
      collect_refs(a.value, refs);
      const Variable* v = net.find_variable(a.variable);
      if (!v) continue;
      if (v->kind == VarKind::Global) {
        report(kGlobalWritten, tag + " assigns global parameter '" + v->name + "'");
      } else if (v->kind == VarKind::Clock) {
        report(kClockAssigned, tag + " assigns clock '" + v->name + "'");
      } else if (v->kind == VarKind::Counter) {
        auto k = increment_of(a.value, v->name);
        if (!k || *k < 1) {
          report(kNonMonotoneCounter,
                 tag + " updates counter '" + v->name + "' by something other than +k, k >= 1");
        }
      }
    }

    for (const auto& r : refs) {
      if (binding_vars.count(r)) continue;
      const Variable* v = net.find_variable(r);
      if (!v) {
        if (colour_constants.count(r)) continue;
        report(kOutOfScope, tag + " references undeclared name '" + r + "'");
        continue;
      }
      if (v->kind == VarKind::Global || v->scope.empty()) continue;
      if (v->scope != t.component) {
        auto kind = v->kind == VarKind::Counter ? kCounterCrossesComponent : kLocalCrossesComponent;
        report(kind, tag + " in component '" + t.component + "' uses " +
                         std::string(to_string(v->kind)) + " '" + v->name + "' of component '" +
                         v->scope + "'");
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Firing rule

NetSemantics::NetSemantics(const ColouredNet& net)
    : net_(std::make_shared<const ColouredNet>(net)) {
  const ColouredNet& n = *net_;
  for (const auto& cs : n.colour_sets) {
    for (std::size_t i = 0; i < cs.values.size(); ++i) colour_constants_.emplace(cs.values[i], i);
  }
  for (std::size_t i = 0; i < n.variables.size(); ++i) var_index_.emplace(n.variables[i].name, i);
  for (const auto& p : n.places) {
    auto ci = index_named(n.colour_sets, p.colour);
    if (!ci) throw NetError("place '" + p.name + "' uses unknown colour set '" + p.colour + "'");
    place_colour_.push_back(*ci);
  }
  for (const auto& t : n.transitions) {
    TransitionRef tr;
    std::map<std::string, std::size_t> vars;
    auto resolve_arcs = [&](const std::vector<Arc>& arcs, std::vector<ArcRef>& out) {
      for (const auto& arc : arcs) {
        auto pi = n.place_index(arc.place);
        if (!pi) {
          throw NetError("transition '" + t.name + "' references unknown place '" + arc.place + "'");
        }
        ArcRef ar{*pi, {}};
        const ColourSet& cs = n.colour_sets[place_colour_[*pi]];
        for (const auto& term : arc.terms) {
          ArcTermRef ref{term.count, cs.index_of(term.symbol), {}};
          if (!ref.constant) {
            ref.variable = term.symbol;
            auto [it, inserted] = vars.emplace(term.symbol, place_colour_[*pi]);
            if (!inserted && it->second != place_colour_[*pi]) {
              throw NetError("transition '" + t.name + "' binds '" + term.symbol +
                             "' to two colour sets");
            }
          }
          ar.terms.push_back(std::move(ref));
        }
        out.push_back(std::move(ar));
      }
    };
    resolve_arcs(t.inputs, tr.inputs);
    resolve_arcs(t.outputs, tr.outputs);
    for (const auto& a : t.assignments) {
      auto vi = n.variable_index(a.variable);
      if (!vi) {
        throw NetError("transition '" + t.name + "' assigns unknown variable '" + a.variable + "'");
      }
      tr.assignments.push_back({*vi, a.value});
    }
    tr.free_vars.assign(vars.begin(), vars.end());
    transitions_.push_back(std::move(tr));
  }
}

Marking NetSemantics::initial_marking() const {
  const ColouredNet& n = *net_;
  Marking m;
  for (std::size_t p = 0; p < n.places.size(); ++p) {
    const ColourSet& cs = n.colour_sets[place_colour_[p]];
    std::vector<std::int64_t> counts(cs.values.size(), 0);
    for (const auto& [val, k] : n.places[p].initial) {
      auto idx = cs.index_of(val);
      if (!idx) throw NetError("place '" + n.places[p].name + "' initial token '" + val + "' not in colour set");
      counts[*idx] += k;
    }
    m.tokens.push_back(std::move(counts));
  }
  for (const auto& v : n.variables) m.store.push_back(v.initial);
  return m;
}

void NetSemantics::check_marking(const Marking& m) const {
  const ColouredNet& n = *net_;
  auto bad = [](const std::string& why) { throw NetError("malformed marking: " + why); };
  if (m.tokens.size() != n.places.size()) bad("place count mismatch");
  if (m.store.size() != n.variables.size()) bad("variable count mismatch");
  if (m.time < 0) bad("negative time");
  for (std::size_t p = 0; p < n.places.size(); ++p) {
    const auto& counts = m.tokens[p];
    if (counts.size() != n.colour_sets[place_colour_[p]].values.size()) {
      bad("place '" + n.places[p].name + "' has tokens outside its colour set");
    }
    std::int64_t total = 0;
    for (auto c : counts) {
      if (c < 0) bad("place '" + n.places[p].name + "' has a negative count");
      total += c;
    }
    if (n.places[p].capacity && total > *n.places[p].capacity) {
      bad("place '" + n.places[p].name + "' exceeds its capacity");
    }
  }
  for (std::size_t i = 0; i < n.variables.size(); ++i) {
    const auto& v = n.variables[i];
    if (v.kind == VarKind::Counter && v.bound && m.store[i] > *v.bound) {
      bad("counter '" + v.name + "' exceeds its bound");
    }
  }
}

Resolver NetSemantics::resolver(const Marking& m, const Binding& b) const {
  return [this, &m, &b](std::string_view name) -> std::optional<std::int64_t> {
    for (const auto& [var, val] : b.values) {
      if (var == name) return static_cast<std::int64_t>(val);
    }
    if (auto it = var_index_.find(std::string(name)); it != var_index_.end()) {
      return m.store[it->second];
    }
    if (auto it = colour_constants_.find(std::string(name)); it != colour_constants_.end()) {
      return static_cast<std::int64_t>(it->second);
    }
    return std::nullopt;
  };
}

std::vector<std::int64_t> NetSemantics::arc_counts(const ArcRef& arc, const Marking& m,
                                                   const Binding& b) const {
  const ColourSet& cs = net_->colour_sets[place_colour_[arc.place]];
  std::vector<std::int64_t> counts(cs.values.size(), 0);
  auto res = resolver(m, b);
  for (const auto& term : arc.terms) {
    std::int64_t k = evaluate(term.count, res);
    if (k < 0) throw NetError("negative arc multiplicity");
    std::size_t idx = 0;
    if (term.constant) {
      idx = *term.constant;
    } else {
      auto it = std::find_if(b.values.begin(), b.values.end(),
                             [&](const auto& kv) { return kv.first == term.variable; });
      idx = it->second;
    }
    counts[idx] += k;
  }
  return counts;
}

bool NetSemantics::enabled_impl(const Marking& m, const Binding& b, std::string* why) const {
  auto fail = [why](std::string s) {
    if (why) *why = std::move(s);
    return false;
  };
  const ColouredNet& n = *net_;
  if (b.transition >= transitions_.size()) return fail("no such transition");
  const TransitionRef& tr = transitions_[b.transition];
  const Transition& t = n.transitions[b.transition];
  if (b.values.size() != tr.free_vars.size()) return fail("incomplete binding");
  for (std::size_t i = 0; i < b.values.size(); ++i) {
    if (b.values[i].first != tr.free_vars[i].first) return fail("binding names mismatch");
    if (b.values[i].second >= n.colour_sets[tr.free_vars[i].second].values.size()) {
      return fail("binding value outside colour set");
    }
  }
  auto res = resolver(m, b);
  if (t.guard && evaluate(*t.guard, res) == 0) return fail("guard false");

  std::map<std::size_t, std::vector<std::int64_t>> consumed, produced;
  for (const auto& arc : tr.inputs) {
    auto counts = arc_counts(arc, m, b);
    auto& acc = consumed[arc.place];
    if (acc.empty()) acc.assign(counts.size(), 0);
    for (std::size_t c = 0; c < counts.size(); ++c) acc[c] += counts[c];
  }
  for (const auto& [p, need] : consumed) {
    for (std::size_t c = 0; c < need.size(); ++c) {
      if (m.tokens[p][c] < need[c]) return fail("insufficient tokens in '" + n.places[p].name + "'");
    }
  }
  for (const auto& arc : tr.outputs) {
    auto counts = arc_counts(arc, m, b);
    auto& acc = produced[arc.place];
    if (acc.empty()) acc.assign(counts.size(), 0);
    for (std::size_t c = 0; c < counts.size(); ++c) acc[c] += counts[c];
  }
  for (const auto& [p, add] : produced) {
    const auto& cap = n.places[p].capacity;
    if (!cap) continue;
    std::int64_t total = 0;
    for (auto c : m.tokens[p]) total += c;
    for (auto c : add) total += c;
    if (auto it = consumed.find(p); it != consumed.end()) {
      for (auto c : it->second) total -= c;
    }
    if (total > *cap) return fail("capacity of '" + n.places[p].name + "' exceeded");
  }
  for (const auto& a : tr.assignments) {
    const Variable& v = n.variables[a.variable];
    std::int64_t nv = evaluate(a.value, res);
    if (v.bound && (nv > *v.bound || nv < 0)) return fail("'" + v.name + "' would leave its bound");
  }
  return true;
}

bool NetSemantics::is_enabled(const Marking& m, const Binding& b) const {
  return enabled_impl(m, b, nullptr);
}

std::vector<Binding> NetSemantics::enabled_bindings(const Marking& m) const {
  check_marking(m);
  std::vector<Binding> out;
  const ColouredNet& n = *net_;
  for (std::size_t ti = 0; ti < transitions_.size(); ++ti) {
    const auto& fv = transitions_[ti].free_vars;
    Binding b;
    b.transition = ti;
    for (const auto& [name, cs] : fv) b.values.emplace_back(name, 0);
    while (true) {
      if (enabled_impl(m, b, nullptr)) out.push_back(b);
      // Odometer over the free variables' colour sets.
      std::size_t k = 0;
      for (; k < fv.size(); ++k) {
        auto& slot = b.values[k].second;
        if (++slot < n.colour_sets[fv[k].second].values.size()) break;
        slot = 0;
      }
      if (k == fv.size()) break;
    }
  }
  return out;
}

Marking NetSemantics::fire(const Marking& m, const Binding& b) const {
  std::string why;
  if (!enabled_impl(m, b, &why)) {
    std::string name = b.transition < net_->transitions.size() ? describe(b) : "?";
    throw NotEnabledError("not enabled: " + name + " (" + why + ")");
  }
  const TransitionRef& tr = transitions_[b.transition];
  Marking next = m;
  for (const auto& arc : tr.inputs) {
    auto counts = arc_counts(arc, m, b);
    for (std::size_t c = 0; c < counts.size(); ++c) next.tokens[arc.place][c] -= counts[c];
  }
  for (const auto& arc : tr.outputs) {
    auto counts = arc_counts(arc, m, b);
    for (std::size_t c = 0; c < counts.size(); ++c) next.tokens[arc.place][c] += counts[c];
  }
  // Assignments are simultaneous: right-hand sides read the pre-state.
  auto res = resolver(m, b);
  for (const auto& a : tr.assignments) next.store[a.variable] = evaluate(a.value, res);
  return next;
}

Marking NetSemantics::advance_time(const Marking& m, std::int64_t delta) const {
  if (delta < 0) throw NetError("time cannot run backwards");
  if (delta == 0) return m;
  check_marking(m);
  const ColouredNet& n = *net_;
  std::vector<Binding> enabled = enabled_bindings(m);
  std::set<std::size_t> enabled_transitions;
  for (const auto& b : enabled) enabled_transitions.insert(b.transition);

  Marking next = m;
  for (std::size_t i = 0; i < n.variables.size(); ++i) {
    const Variable& v = n.variables[i];
    if (v.kind != VarKind::Clock) continue;
    std::int64_t lo = m.store[i];
    std::int64_t hi = v.bound.value_or(std::numeric_limits<std::int64_t>::max());
    for (auto ti : enabled_transitions) {
      const auto& g = n.transitions[ti].guard;
      if (!g) continue;
      for (auto ub : upper_bounds_on(*g, v.name)) hi = std::min(hi, ub);
    }
    std::int64_t requested = m.store[i] + delta;
    if (requested > hi) throw TimeInfeasibleError(v.name, lo, hi, requested);
    next.store[i] = requested;
  }
  next.time += delta;
  return next;
}

std::int64_t NetSemantics::value(const Marking& m, std::string_view variable) const {
  auto it = var_index_.find(std::string(variable));
  if (it == var_index_.end()) throw NetError("unknown variable '" + std::string(variable) + "'");
  return m.store.at(it->second);
}

std::int64_t NetSemantics::tokens(const Marking& m, std::string_view place,
                                  std::string_view colour_value) const {
  auto pi = net_->place_index(place);
  if (!pi) throw NetError("unknown place '" + std::string(place) + "'");
  auto ci = net_->colour_sets[place_colour_[*pi]].index_of(colour_value);
  if (!ci) throw NetError("'" + std::string(colour_value) + "' is not a colour of '" + std::string(place) + "'");
  return m.tokens.at(*pi).at(*ci);
}

std::int64_t NetSemantics::total_tokens(const Marking& m, std::string_view place) const {
  auto pi = net_->place_index(place);
  if (!pi) throw NetError("unknown place '" + std::string(place) + "'");
  std::int64_t total = 0;
  for (auto c : m.tokens.at(*pi)) total += c;
  return total;
}

std::string NetSemantics::describe(const Binding& b) const {
  const Transition& t = net_->transitions.at(b.transition);
  std::string out = t.name;
  if (b.values.empty()) return out;
  const auto& fv = transitions_[b.transition].free_vars;
  out += "<";
  for (std::size_t i = 0; i < b.values.size(); ++i) {
    if (i) out += ",";
    const auto& cs = net_->colour_sets[fv[i].second];
    out += b.values[i].first + "=" + cs.values.at(b.values[i].second);
  }
  out += ">";
  return out;
}

std::string NetSemantics::encode(const Marking& m) const {
  const ColouredNet& n = *net_;
  std::vector<std::size_t> places(n.places.size());
  for (std::size_t i = 0; i < places.size(); ++i) places[i] = i;
  std::sort(places.begin(), places.end(),
            [&](auto a, auto b) { return n.places[a].name < n.places[b].name; });
  std::ostringstream os;
  for (auto p : places) {
    const ColourSet& cs = n.colour_sets[place_colour_[p]];
    os << n.places[p].name << "{";
    bool first = true;
    for (std::size_t c = 0; c < cs.values.size(); ++c) {
      if (m.tokens[p][c] == 0) continue;
      if (!first) os << ",";
      first = false;
      os << cs.values[c] << ":" << m.tokens[p][c];
    }
    os << "}";
  }
  std::vector<std::size_t> vars(n.variables.size());
  for (std::size_t i = 0; i < vars.size(); ++i) vars[i] = i;
  std::sort(vars.begin(), vars.end(),
            [&](auto a, auto b) { return n.variables[a].name < n.variables[b].name; });
  os << "|";
  for (auto v : vars) os << n.variables[v].name << "=" << m.store[v] << ";";
  os << "|t=" << m.time;
  return os.str();
}

std::vector<Binding> enabled_bindings(const ColouredNet& net, const Marking& m) {
  return NetSemantics(net).enabled_bindings(m);
}

Marking fire(const ColouredNet& net, const Marking& m, const Binding& b) {
  NetSemantics sem(net);
  sem.check_marking(m);
  return sem.fire(m, b);
}

Marking advance_time(const ColouredNet& net, const Marking& m, std::int64_t delta) {
  return NetSemantics(net).advance_time(m, delta);
}

// ---------------------------------------------------------------------------
// Exploration

ReachGraph reachability_graph(const ColouredNet& net, const ExploreLimits& limits) {
  if (limits.max_nodes < 1) throw NetError("max_nodes must be at least 1");
  NetSemantics sem(net);
  ReachGraph g;
  g.limits = limits;
  std::unordered_map<Marking, std::size_t, MarkingHash> index;
  std::vector<std::size_t> depth;

  Marking init = sem.initial_marking();
  index.emplace(init, 0);
  g.nodes.push_back(std::move(init));
  depth.push_back(0);

  for (std::size_t cur = 0; cur < g.nodes.size(); ++cur) {
    auto bindings = sem.enabled_bindings(g.nodes[cur]);
    if (depth[cur] >= limits.max_depth) {
      if (!bindings.empty()) g.truncated = true;
      continue;
    }
    for (auto& b : bindings) {
      Marking next = sem.fire(g.nodes[cur], b);
      auto it = index.find(next);
      std::size_t target;
      if (it != index.end()) {
        target = it->second;
      } else {
        if (g.nodes.size() >= limits.max_nodes) {
          g.truncated = true;
          continue;
        }
        target = g.nodes.size();
        index.emplace(next, target);
        g.nodes.push_back(std::move(next));
        depth.push_back(depth[cur] + 1);
      }
      std::string label = net.transitions[b.transition].display_label();
      g.edges.push_back(ReachEdge{cur, target, std::move(b), std::move(label)});
    }
  }
  return g;
}

namespace {

LabelledGraph to_labelled(const ReachGraph& g) {
  LabelledGraph lg;
  lg.node_count = g.nodes.size();
  lg.root = 0;
  for (const auto& e : g.edges) lg.edges.push_back({e.from, e.label, e.to});
  return lg;
}

}  // namespace

EquivalenceResult equivalent(const ColouredNet& a, const ColouredNet& b, const ExploreLimits& limits) {
  ReachGraph ga = reachability_graph(a, limits);
  ReachGraph gb = reachability_graph(b, limits);
  if (ga.truncated || gb.truncated) {
    throw BoundTooSmallError("bound too small: exploration of '" +
                             (ga.truncated ? a.name : b.name) + "' was truncated");
  }
  LabelledGraph la = to_labelled(ga);
  LabelledGraph lb = to_labelled(gb);
  EquivalenceResult r;
  if (find_isomorphism(la, lb)) {
    r.equivalent = true;
    return r;
  }
  if (auto trace = distinguishing_trace(la, lb)) {
    r.witness = *trace;
    r.reason = "label sequence possible in only one net";
  } else {
    r.reason = "same label sequences but reachability graphs differ (" +
               std::to_string(ga.nodes.size()) + "/" + std::to_string(gb.nodes.size()) +
               " nodes, " + std::to_string(ga.edges.size()) + "/" +
               std::to_string(gb.edges.size()) + " edges)";
  }
  return r;
}

// ---------------------------------------------------------------------------
// Counter expansion

ColouredNet expand_counters(const ColouredNet& net) {
  std::vector<const Variable*> counters;
  for (const auto& v : net.variables) {
    if (v.kind != VarKind::Counter) continue;
    if (!v.bound) throw NetError("cannot expand: counter '" + v.name + "' has no bound");
    counters.push_back(&v);
  }
  if (counters.empty()) return net;

  ColouredNet out = net;
  out.variables.clear();
  for (const auto& v : net.variables) {
    if (v.kind != VarKind::Counter) out.variables.push_back(v);
  }
  std::string tick_set = "CounterValue";
  while (net.find_colour_set(tick_set)) tick_set += "_";
  out.colour_sets.push_back(ColourSet{tick_set, {"tick"}});

  auto place_name = [](const Variable& c, std::int64_t v) { return c.name + "=" + std::to_string(v); };
  for (const auto* c : counters) {
    std::string comp = c->scope;
    if (comp.empty() && !net.components.empty()) comp = net.components.front().name;
    for (std::int64_t v = 0; v <= *c->bound; ++v) {
      Place p{place_name(*c, v), tick_set, comp, std::nullopt, {}};
      if (v == c->initial) p.initial.emplace_back("tick", 1);
      out.places.push_back(std::move(p));
    }
  }

  out.transitions.clear();
  for (const auto& t : net.transitions) {
    std::set<std::string> refs;
    if (t.guard) collect_refs(*t.guard, refs);
    for (const auto& a : t.assignments) {
      refs.insert(a.variable);
      collect_refs(a.value, refs);
    }
    for (const auto* arcs : {&t.inputs, &t.outputs}) {
      for (const auto& arc : *arcs) {
        for (const auto& term : arc.terms) collect_refs(term.count, refs);
      }
    }
    std::vector<const Variable*> touched;
    for (const auto* c : counters) {
      if (refs.count(c->name)) touched.push_back(c);
    }
    if (touched.empty()) {
      out.transitions.push_back(t);
      continue;
    }

    std::vector<std::int64_t> vals(touched.size(), 0);
    while (true) {
      Transition copy = t;
      copy.label = t.display_label();
      copy.name = t.name + "[";
      bool feasible = true;
      auto subst = [&](Expr e) {
        for (std::size_t i = 0; i < touched.size(); ++i) e = substitute(e, touched[i]->name, vals[i]);
        return e;
      };
      if (copy.guard) {
        copy.guard = subst(*copy.guard);
        if (refs_of(*copy.guard).empty() && evaluate(*copy.guard, [](std::string_view) {
              return std::optional<std::int64_t>{};
            }) == 0) {
          feasible = false;
        }
      }
      for (auto* arcs : {&copy.inputs, &copy.outputs}) {
        for (auto& arc : *arcs) {
          for (auto& term : arc.terms) term.count = subst(term.count);
        }
      }
      std::vector<Assignment> kept;
      std::vector<std::int64_t> after = vals;
      for (const auto& a : t.assignments) {
        auto it = std::find_if(touched.begin(), touched.end(),
                               [&](const Variable* c) { return c->name == a.variable; });
        if (it == touched.end()) {
          kept.push_back(Assignment{a.variable, subst(a.value)});
          continue;
        }
        std::size_t ci = static_cast<std::size_t>(it - touched.begin());
        after[ci] = evaluate(subst(a.value), [](std::string_view) {
          return std::optional<std::int64_t>{};
        });
        if (after[ci] > *touched[ci]->bound || after[ci] < 0) feasible = false;
      }
      copy.assignments = std::move(kept);
      for (std::size_t i = 0; i < touched.size(); ++i) {
        if (i) copy.name += ",";
        copy.name += touched[i]->name + "=" + std::to_string(vals[i]);
        copy.inputs.push_back(Arc{place_name(*touched[i], vals[i]), {ArcTerm{Expr::constant(1), "tick"}}, std::nullopt});
        copy.outputs.push_back(Arc{place_name(*touched[i], after[i]), {ArcTerm{Expr::constant(1), "tick"}}, std::nullopt});
      }
      copy.name += "]";
      if (feasible) out.transitions.push_back(std::move(copy));

      std::size_t k = 0;
      for (; k < touched.size(); ++k) {
        if (++vals[k] <= *touched[k]->bound) break;
        vals[k] = 0;
      }
      if (k == touched.size()) break;
    }
  }
  // Sync roles named the removed counters; the arcs themselves stay.
  for (auto& t : out.transitions) {
    for (auto* arcs : {&t.inputs, &t.outputs}) {
      for (auto& arc : *arcs) arc.sync_role.reset();
    }
  }
  return out;
}

}  // namespace pmk
