#include "pmk/mode.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

namespace pmk {

bool operator==(const Mode& a, const Mode& b) {
  if (a.name != b.name || a.children != b.children || a.initial_child != b.initial_child ||
      a.on_entry != b.on_entry) {
    return false;
  }
  if (static_cast<bool>(a.refinement) != static_cast<bool>(b.refinement)) return false;
  return !a.refinement || *a.refinement == *b.refinement;
}

bool operator==(const ModeAutomaton& a, const ModeAutomaton& b) {
  return a.name_ == b.name_ && a.root_ == b.root_ && a.events_ == b.events_ &&
         a.transitions_ == b.transitions_ && a.globals_ == b.globals_;
}

namespace {

void collect_modes(const Mode& m, std::vector<const Mode*>& out) {
  out.push_back(&m);
  for (const auto& c : m.children) collect_modes(c, out);
}

bool find_path(const Mode& m, std::string_view target, std::vector<const Mode*>& path) {
  path.push_back(&m);
  if (m.name == target) return true;
  for (const auto& c : m.children) {
    if (find_path(c, target, path)) return true;
  }
  path.pop_back();
  return false;
}

void collect_leaves(const Mode& m, std::vector<std::string>& out) {
  if (m.is_leaf()) {
    out.push_back(m.name);
    return;
  }
  for (const auto& c : m.children) collect_leaves(c, out);
}

std::optional<std::int64_t> lookup(const std::map<std::string, std::int64_t>& globals,
                                   std::string_view name) {
  auto it = globals.find(std::string(name));
  if (it == globals.end()) return std::nullopt;
  return it->second;
}

bool guard_holds(const LeafTransition& t, const std::map<std::string, std::int64_t>& globals) {
  if (!t.guard) return true;
  return evaluate(*t.guard, [&](std::string_view n) { return lookup(globals, n); }) != 0;
}

void apply_effects(const std::vector<Assignment>& effects,
                   std::map<std::string, std::int64_t>& globals) {
  for (const auto& a : effects) {
    globals[a.variable] = evaluate(a.value, [&](std::string_view n) { return lookup(globals, n); });
  }
}

std::vector<const LeafTransition*> enabled_alternatives(const ModeAutomaton& automaton,
                                                        const ModeConfig& cfg,
                                                        std::string_view event) {
  std::vector<const LeafTransition*> out;
  for (const auto& t : automaton.leaf_transitions()) {
    if (t.source == cfg.active && t.event == event && guard_holds(t, cfg.globals)) {
      out.push_back(&t);
    }
  }
  return out;
}

ModeConfig apply(const ModeConfig& cfg, const LeafTransition& t) {
  ModeConfig next = cfg;
  if (t.exits_mode) next.pending.clear();
  next.active = t.target;
  apply_effects(t.entry_effects, next.globals);
  return next;
}

std::string config_key(const ModeConfig& c) {
  std::string key = c.active;
  for (const auto& [k, v] : c.globals) key += ";" + k + "=" + std::to_string(v);
  return key;
}

}  // namespace

ModeAutomaton::ModeAutomaton(std::string name, Mode root, std::vector<std::string> events,
                             std::vector<ModeTransition> transitions,
                             std::map<std::string, std::int64_t> globals)
    : name_(std::move(name)),
      root_(std::move(root)),
      events_(std::move(events)),
      transitions_(std::move(transitions)),
      globals_(std::move(globals)) {
  std::vector<const Mode*> modes;
  collect_modes(root_, modes);
  std::set<std::string> names;
  for (const Mode* m : modes) {
    if (!names.insert(m->name).second) throw ModeError("duplicate mode '" + m->name + "'");
    if (m->initial_child) {
      auto it = std::find_if(m->children.begin(), m->children.end(),
                             [&](const Mode& c) { return c.name == *m->initial_child; });
      if (it == m->children.end()) {
        throw ModeError("initial child '" + *m->initial_child + "' of '" + m->name +
                        "' is not a child");
      }
    }
    for (const auto& a : m->on_entry) {
      if (!globals_.count(a.variable)) {
        throw ModeError("mode '" + m->name + "' reassigns undeclared global '" + a.variable + "'");
      }
    }
  }
  std::set<std::string> alphabet(events_.begin(), events_.end());
  if (alphabet.size() != events_.size()) throw ModeError("duplicate event in alphabet");
  std::map<std::pair<std::string, std::string>, std::pair<double, int>> prob_sums;
  for (const auto& t : transitions_) {
    if (!names.count(t.source)) throw ModeError("unknown source mode '" + t.source + "'");
    if (!names.count(t.target)) throw ModeError("unknown target mode '" + t.target + "'");
    if (!alphabet.count(t.event)) throw ModeError("event '" + t.event + "' outside the alphabet");
    if (t.probability) {
      if (!(*t.probability > 0.0 && *t.probability <= 1.0)) {
        throw ModeError("probability outside (0, 1] on " + t.source + " --" + t.event + "-->");
      }
      auto& [sum, count] = prob_sums[{t.source, t.event}];
      sum += *t.probability;
      ++count;
    }
  }
  for (const auto& [key, sc] : prob_sums) {
    if (std::fabs(sc.first - 1.0) > 1e-9) {
      throw ModeError("probabilities of " + key.first + " --" + key.second + "--> sum to " +
                      std::to_string(sc.first));
    }
  }
  resolve();
}

bool ModeAutomaton::has_event(std::string_view e) const {
  return std::find(events_.begin(), events_.end(), e) != events_.end();
}

const Mode* ModeAutomaton::find_mode(std::string_view n) const {
  std::vector<const Mode*> modes;
  collect_modes(root_, modes);
  for (const Mode* m : modes) {
    if (m->name == n) return m;
  }
  return nullptr;
}

std::vector<std::string> ModeAutomaton::path_to(std::string_view n) const {
  std::vector<const Mode*> path;
  std::vector<std::string> out;
  if (!find_path(root_, n, path)) return out;
  for (const Mode* m : path) out.push_back(m->name);
  return out;
}

std::vector<std::string> ModeAutomaton::leaves() const {
  std::vector<std::string> out;
  collect_leaves(root_, out);
  return out;
}

std::string ModeAutomaton::entry_leaf(std::string_view mode) const {
  const Mode* m = find_mode(mode);
  if (!m) throw ModeError("unknown mode '" + std::string(mode) + "'");
  while (!m->is_leaf()) {
    if (!m->initial_child) throw ModeError("no initial child: composite mode '" + m->name + "'");
    const std::string& next = *m->initial_child;
    m = &*std::find_if(m->children.begin(), m->children.end(),
                       [&](const Mode& c) { return c.name == next; });
  }
  return m->name;
}

std::string ModeAutomaton::initial_leaf() const { return entry_leaf(root_.name); }

const std::vector<LeafTransition>& ModeAutomaton::leaf_transitions() const {
  if (resolve_error_) throw ModeError(*resolve_error_);
  return leaf_transitions_;
}

void ModeAutomaton::resolve() {
  leaf_transitions_.clear();
  try {
    for (const std::string& leaf : leaves()) {
      std::vector<std::string> src_path = path_to(leaf);
      for (const auto& event : events_) {
        // Innermost source with transitions on this event wins.
        for (auto it = src_path.rbegin(); it != src_path.rend(); ++it) {
          bool found = false;
          for (const auto& t : transitions_) {
            if (t.source != *it || t.event != event) continue;
            found = true;
            LeafTransition lt;
            lt.source = leaf;
            lt.event = event;
            lt.guard = t.guard;
            lt.probability = t.probability;
            lt.target = entry_leaf(t.target);
            lt.exits_mode = lt.target != leaf;
            std::set<std::string> on_src(src_path.begin(), src_path.end());
            for (const auto& m : path_to(lt.target)) {
              if (!lt.exits_mode || on_src.count(m)) continue;
              const Mode* mode = find_mode(m);
              lt.entry_effects.insert(lt.entry_effects.end(), mode->on_entry.begin(),
                                      mode->on_entry.end());
            }
            leaf_transitions_.push_back(std::move(lt));
          }
          if (found) break;
        }
      }
    }
  } catch (const ModeError& e) {
    resolve_error_ = e.what();
    leaf_transitions_.clear();
  }
}

ModeConfig initial_config(const ModeAutomaton& automaton) {
  ModeConfig cfg;
  cfg.active = automaton.initial_leaf();
  cfg.globals = automaton.globals();
  for (const auto& m : automaton.path_to(cfg.active)) {
    apply_effects(automaton.find_mode(m)->on_entry, cfg.globals);
  }
  return cfg;
}

std::size_t select_most_likely(const std::vector<const LeafTransition*>& alts) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < alts.size(); ++i) {
    double pi = alts[i]->probability.value_or(1.0);
    double pb = alts[best]->probability.value_or(1.0);
    if (pi > pb || (pi == pb && alts[i]->target < alts[best]->target)) best = i;
  }
  return best;
}

StepResult step(const ModeAutomaton& automaton, const ModeConfig& cfg, std::string_view event,
                const AlternativeSelector& selector) {
  if (!automaton.has_event(event)) throw ModeError("unknown event '" + std::string(event) + "'");
  StepResult r;
  r.config = cfg;
  auto alts = enabled_alternatives(automaton, cfg, event);
  if (alts.empty()) return r;
  std::size_t pick = alts.size() == 1 ? 0 : selector(alts);
  if (pick >= alts.size()) throw ModeError("selector returned an invalid alternative");
  const LeafTransition& t = *alts[pick];
  // Run to completion: in-flight operations finish before the mode is left.
  if (t.exits_mode) r.completed = cfg.pending;
  r.config = apply(cfg, t);
  r.taken = t;
  return r;
}

ModeAutomaton flatten(const ModeAutomaton& automaton) {
  std::vector<ModeTransition> flat;
  for (const auto& lt : automaton.leaf_transitions()) {
    flat.push_back(ModeTransition{lt.source, lt.event, lt.guard, lt.target, lt.probability});
  }
  return ModeAutomaton(automaton.name(), automaton.root(), automaton.events(), std::move(flat),
                       automaton.globals());
}

ConfigurationGraph configuration_graph(const ModeAutomaton& automaton) {
  ConfigurationGraph out;
  std::vector<ModeConfig> configs;
  std::map<std::string, std::size_t> index;
  ModeConfig init = initial_config(automaton);
  index[config_key(init)] = 0;
  configs.push_back(init);
  for (std::size_t cur = 0; cur < configs.size(); ++cur) {
    for (const auto& event : automaton.events()) {
      for (const auto* alt : enabled_alternatives(automaton, configs[cur], event)) {
        ModeConfig next = apply(configs[cur], *alt);
        auto [it, inserted] = index.emplace(config_key(next), configs.size());
        if (inserted) configs.push_back(next);
        out.graph.edges.push_back({cur, event, it->second});
      }
    }
  }
  out.graph.node_count = configs.size();
  out.graph.root = 0;
  std::map<std::string, int> seen_leaf;
  for (const auto& c : configs) ++seen_leaf[c.active];
  for (const auto& c : configs) {
    out.names.push_back(seen_leaf[c.active] > 1 ? config_key(c) : c.active);
  }
  return out;
}

std::string ProductAutomaton::state_name(std::size_t i) const {
  std::string out;
  for (const auto& c : states_.at(i)) {
    if (!out.empty()) out += "|";
    out += c.active;
  }
  return out;
}

ProductAutomaton parallel_product(const ModeAutomaton& a, const ModeAutomaton& b) {
  ProductAutomaton p;
  p.factors_ = {a, b};
  for (const auto& e : a.events()) p.alphabet_.insert(e);
  for (const auto& e : b.events()) {
    if (!p.alphabet_.insert(e).second) p.shared_.insert(e);
  }
  std::map<std::string, std::size_t> index;
  auto key = [](const std::vector<ModeConfig>& s) {
    return config_key(s[0]) + "||" + config_key(s[1]);
  };
  std::vector<ModeConfig> init{initial_config(a), initial_config(b)};
  index[key(init)] = 0;
  p.states_.push_back(init);

  for (std::size_t cur = 0; cur < p.states_.size(); ++cur) {
    for (const auto& event : p.alphabet_) {
      const auto state = p.states_[cur];
      bool in_a = a.has_event(event);
      bool in_b = b.has_event(event);
      std::vector<const LeafTransition*> alts_a, alts_b;
      if (in_a) alts_a = enabled_alternatives(a, state[0], event);
      if (in_b) alts_b = enabled_alternatives(b, state[1], event);
      // Shared events block unless every factor can move.
      if ((in_a && alts_a.empty()) || (in_b && alts_b.empty())) continue;
      if (!in_a) alts_a.push_back(nullptr);
      if (!in_b) alts_b.push_back(nullptr);
      for (const auto* ta : alts_a) {
        for (const auto* tb : alts_b) {
          std::vector<ModeConfig> next = state;
          double prob = 1.0;
          if (ta) {
            next[0] = apply(state[0], *ta);
            prob *= ta->probability.value_or(1.0);
          }
          if (tb) {
            next[1] = apply(state[1], *tb);
            prob *= tb->probability.value_or(1.0);
          }
          auto [it, inserted] = index.emplace(key(next), p.states_.size());
          if (inserted) p.states_.push_back(next);
          p.edges_.push_back({cur, event, it->second, prob});
        }
      }
    }
  }
  return p;
}

ConfigurationGraph configuration_graph(const ProductAutomaton& product) {
  ConfigurationGraph out;
  out.graph.node_count = product.states().size();
  out.graph.root = 0;
  for (const auto& e : product.edges()) out.graph.edges.push_back({e.from, e.event, e.to});
  for (std::size_t i = 0; i < product.states().size(); ++i) out.names.push_back(product.state_name(i));
  return out;
}

ModeEquivalence hierarchical_parallel_equivalent(const ModeAutomaton& h, const ProductAutomaton& p) {
  ConfigurationGraph gh = configuration_graph(h);
  ConfigurationGraph gp = configuration_graph(p);
  ModeEquivalence r;
  r.hierarchical_configurations = gh.graph.node_count;
  r.parallel_configurations = gp.graph.node_count;
  if (find_isomorphism(gh.graph, gp.graph)) {
    r.equivalent = true;
    return r;
  }
  auto walk = [](const ConfigurationGraph& g, const std::vector<std::string>& labels)
      -> std::optional<std::size_t> {
    std::size_t cur = g.graph.root;
    for (const auto& l : labels) {
      auto it = std::find_if(g.graph.edges.begin(), g.graph.edges.end(),
                             [&](const auto& e) { return e.from == cur && e.label == l; });
      if (it == g.graph.edges.end()) return std::nullopt;
      cur = it->to;
    }
    return cur;
  };
  if (auto trace = distinguishing_trace(gh.graph, gp.graph)) {
    r.witness_path = *trace;
    if (auto n = walk(gh, *trace)) {
      r.witness_configuration = gh.names[*n];
    } else if (auto m = walk(gp, *trace)) {
      r.witness_configuration = gp.names[*m];
    }
  } else {
    r.witness_configuration = gh.names[gh.graph.root];
  }
  return r;
}

ColouredNet refine(const ModeAutomaton& automaton, std::string_view mode) {
  const Mode* m = automaton.find_mode(mode);
  if (!m) throw ModeError("unknown mode '" + std::string(mode) + "'");
  if (!m->refinement) throw ModeError("unrefined mode '" + std::string(mode) + "'");
  std::map<std::string, std::int64_t> globals = automaton.globals();
  for (const auto& name : automaton.path_to(mode)) {
    apply_effects(automaton.find_mode(name)->on_entry, globals);
  }
  ColouredNet net = *m->refinement;
  for (auto& v : net.variables) {
    if (v.kind != VarKind::Global) continue;
    if (auto it = globals.find(v.name); it != globals.end()) v.initial = it->second;
  }
  return net;
}

}  // namespace pmk
