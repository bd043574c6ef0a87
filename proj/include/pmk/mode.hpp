#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "pmk/cpn.hpp"
#include "pmk/expr.hpp"
#include "pmk/graph.hpp"

namespace pmk {

class ModeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A node of the mode hierarchy. Leaves are the operating regimes; composite
/// modes enter their initial child.
struct Mode {
  std::string name;
  std::vector<Mode> children;
  std::optional<std::string> initial_child;
  std::shared_ptr<const ColouredNet> refinement;
  /// Global-parameter reassignments applied when the mode is entered.
  std::vector<Assignment> on_entry;

  bool is_leaf() const { return children.empty(); }

  friend bool operator==(const Mode& a, const Mode& b);
};

struct ModeTransition {
  std::string source;
  std::string event;
  std::optional<Expr> guard;
  std::string target;
  std::optional<double> probability;

  friend bool operator==(const ModeTransition&, const ModeTransition&) = default;
};

/// A transition resolved to leaves, with the entry effects of every mode it
/// enters (outermost first).
struct LeafTransition {
  std::string source;
  std::string event;
  std::optional<Expr> guard;
  std::string target;
  std::optional<double> probability;
  std::vector<Assignment> entry_effects;
  bool exits_mode = false;
};

class ModeAutomaton {
 public:
  /// Throws ModeError on duplicate mode names, unknown sources/targets,
  /// events outside the alphabet, entry assignments to undeclared globals, or
  /// alternative probabilities that do not sum to 1.
  ModeAutomaton(std::string name, Mode root, std::vector<std::string> events,
                std::vector<ModeTransition> transitions,
                std::map<std::string, std::int64_t> globals = {});

  const std::string& name() const { return name_; }
  const Mode& root() const { return root_; }
  const std::vector<std::string>& events() const { return events_; }
  const std::vector<ModeTransition>& transitions() const { return transitions_; }
  const std::map<std::string, std::int64_t>& globals() const { return globals_; }

  bool has_event(std::string_view e) const;
  const Mode* find_mode(std::string_view n) const;
  /// Names from the root down to `n`, inclusive.
  std::vector<std::string> path_to(std::string_view n) const;
  std::vector<std::string> leaves() const;

  /// Throws ModeError("no initial child ...") when a composite on the way has none.
  std::string initial_leaf() const;
  std::string entry_leaf(std::string_view mode) const;
  const std::vector<LeafTransition>& leaf_transitions() const;

  friend bool operator==(const ModeAutomaton&, const ModeAutomaton&);

 private:
  void resolve();

  std::string name_;
  Mode root_;
  std::vector<std::string> events_;
  std::vector<ModeTransition> transitions_;
  std::map<std::string, std::int64_t> globals_;
  std::vector<LeafTransition> leaf_transitions_;
  std::optional<std::string> resolve_error_;
};

struct ModeConfig {
  std::string active;
  /// In-flight operations that must complete before the mode is left.
  std::vector<std::string> pending;
  std::map<std::string, std::int64_t> globals;

  friend bool operator==(const ModeConfig&, const ModeConfig&) = default;
};

ModeConfig initial_config(const ModeAutomaton& automaton);

/// Chooses one of several enabled alternatives; returns an index into `alts`.
using AlternativeSelector = std::function<std::size_t(const std::vector<const LeafTransition*>& alts)>;

/// Highest probability first (missing counts as 1), ties by target name.
std::size_t select_most_likely(const std::vector<const LeafTransition*>& alts);

struct StepResult {
  ModeConfig config;
  /// Pending operations drained before the mode was left.
  std::vector<std::string> completed;
  std::optional<LeafTransition> taken;
};

StepResult step(const ModeAutomaton& automaton, const ModeConfig& cfg, std::string_view event,
                const AlternativeSelector& selector = select_most_likely);

/// Leaf-level automaton: same hierarchy, transitions between leaves only.
ModeAutomaton flatten(const ModeAutomaton& automaton);

/// Synchronised product of two automata: shared events move both factors in
/// lock-step, local events interleave.
class ProductAutomaton {
 public:
  struct Edge {
    std::size_t from;
    std::string event;
    std::size_t to;
    double probability;
  };

  const std::vector<ModeAutomaton>& factors() const { return factors_; }
  const std::set<std::string>& alphabet() const { return alphabet_; }
  const std::set<std::string>& shared() const { return shared_; }
  /// Reachable product configurations; states()[0] is the initial one.
  const std::vector<std::vector<ModeConfig>>& states() const { return states_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::string state_name(std::size_t i) const;

  friend ProductAutomaton parallel_product(const ModeAutomaton& a, const ModeAutomaton& b);

 private:
  std::vector<ModeAutomaton> factors_;
  std::set<std::string> alphabet_, shared_;
  std::vector<std::vector<ModeConfig>> states_;
  std::vector<Edge> edges_;
};

ProductAutomaton parallel_product(const ModeAutomaton& a, const ModeAutomaton& b);

/// Reachable configuration graph with event-labelled edges; `names` gives one
/// display name per node.
struct ConfigurationGraph {
  LabelledGraph graph;
  std::vector<std::string> names;
};

ConfigurationGraph configuration_graph(const ModeAutomaton& automaton);
ConfigurationGraph configuration_graph(const ProductAutomaton& product);

struct ModeEquivalence {
  bool equivalent = false;
  std::size_t hierarchical_configurations = 0;
  std::size_t parallel_configurations = 0;
  std::vector<std::string> witness_path;
  std::string witness_configuration;
};

ModeEquivalence hierarchical_parallel_equivalent(const ModeAutomaton& h, const ProductAutomaton& p);

/// The mode's refinement net with entry reassignments (from the root down to
/// the mode) applied to the net's global parameters.
ColouredNet refine(const ModeAutomaton& automaton, std::string_view mode);

}  // namespace pmk
