#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pmk/expr.hpp"

namespace pmk {

/// Finite ordered set of symbolic constants.
struct ColourSet {
  std::string name;
  std::vector<std::string> values;

  std::optional<std::size_t> index_of(std::string_view value) const;

  friend bool operator==(const ColourSet&, const ColourSet&) = default;
};

/// Fixed deployment site of a component; active components have none and run
/// wherever their operations are deployed.
enum class Site { GPP, DSP, Motors, Buffer, Flash };

std::string_view to_string(Site s);
std::optional<Site> site_from_string(std::string_view s);

struct Component {
  std::string name;
  std::optional<Site> site;

  friend bool operator==(const Component&, const Component&) = default;
};

struct Place {
  std::string name;
  std::string colour;
  std::string component;
  std::optional<std::int64_t> capacity;
  /// Initial tokens as (colour value, count).
  std::vector<std::pair<std::string, std::int64_t>> initial;

  friend bool operator==(const Place&, const Place&) = default;
};

enum class VarKind { Local, Global, Counter, Clock };

std::string_view to_string(VarKind k);

struct Variable {
  std::string name;
  VarKind kind = VarKind::Local;
  /// Owning component for locals and counters; empty means whole net.
  std::string scope;
  std::optional<std::int64_t> bound;
  std::int64_t initial = 0;

  friend bool operator==(const Variable&, const Variable&) = default;
};

/// One `count`symbol` term of an arc inscription. `symbol` is either a value
/// of the place's colour set or a binding variable.
struct ArcTerm {
  Expr count = Expr::constant(1);
  std::string symbol;

  friend bool operator==(const ArcTerm&, const ArcTerm&) = default;
};

struct Arc {
  std::string place;
  std::vector<ArcTerm> terms;
  /// Counter this arc synchronises; such arcs carry no data.
  std::optional<std::string> sync_role;

  friend bool operator==(const Arc&, const Arc&) = default;
};

struct Assignment {
  std::string variable;
  Expr value;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct Transition {
  std::string name;
  /// Label used for behavioural comparison; defaults to `name` when empty.
  std::string label;
  std::string component;
  std::optional<Expr> guard;
  std::vector<Arc> inputs;
  std::vector<Arc> outputs;
  std::vector<Assignment> assignments;
  std::optional<double> probability;
  /// Software operation executed by this transition (e.g. "IB").
  std::optional<std::string> operation;

  const std::string& display_label() const { return label.empty() ? name : label; }

  friend bool operator==(const Transition&, const Transition&) = default;
};

struct ColouredNet {
  std::string name;
  std::vector<ColourSet> colour_sets;
  std::vector<Component> components;
  std::vector<Variable> variables;
  std::vector<Place> places;
  std::vector<Transition> transitions;

  const ColourSet* find_colour_set(std::string_view n) const;
  const Place* find_place(std::string_view n) const;
  const Transition* find_transition(std::string_view n) const;
  const Variable* find_variable(std::string_view n) const;
  const Component* find_component(std::string_view n) const;

  std::optional<std::size_t> place_index(std::string_view n) const;
  std::optional<std::size_t> transition_index(std::string_view n) const;
  std::optional<std::size_t> variable_index(std::string_view n) const;

  friend bool operator==(const ColouredNet&, const ColouredNet&) = default;
};

class NetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotEnabledError : public NetError {
 public:
  using NetError::NetError;
};

class TimeInfeasibleError : public NetError {
 public:
  TimeInfeasibleError(std::string clock, std::int64_t lo, std::int64_t hi,
                      std::int64_t requested);

  const std::string& clock() const { return clock_; }
  std::int64_t low() const { return lo_; }
  std::int64_t high() const { return hi_; }
  std::int64_t requested() const { return requested_; }

 private:
  std::string clock_;
  std::int64_t lo_, hi_, requested_;
};

/// Complete net state. Token counts are indexed by place and then by colour
/// value index; the store is indexed by variable declaration order.
struct Marking {
  std::vector<std::vector<std::int64_t>> tokens;
  std::vector<std::int64_t> store;
  std::int64_t time = 0;

  friend bool operator==(const Marking&, const Marking&) = default;
};

struct MarkingHash {
  std::size_t operator()(const Marking& m) const noexcept;
};

/// Assignment of colour-value indices to a transition's free variables,
/// sorted by variable name.
struct Binding {
  std::size_t transition = 0;
  std::vector<std::pair<std::string, std::size_t>> values;

  friend bool operator==(const Binding&, const Binding&) = default;
  friend auto operator<=>(const Binding&, const Binding&) = default;
};

struct Violation {
  std::string kind;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// Violation kinds reported by validate_net.
inline constexpr std::string_view kGlobalWritten = "global written";
inline constexpr std::string_view kCounterCrossesComponent = "counter crosses component";
inline constexpr std::string_view kLocalCrossesComponent = "local crosses component";
inline constexpr std::string_view kMissingBound = "counter without bound";
inline constexpr std::string_view kOutOfScope = "out-of-scope reference";
inline constexpr std::string_view kNonMonotoneCounter = "counter update not increment";
inline constexpr std::string_view kClockAssigned = "clock assigned";
inline constexpr std::string_view kDangling = "dangling reference";
inline constexpr std::string_view kDuplicate = "duplicate identifier";
inline constexpr std::string_view kBadMarking = "bad initial marking";
inline constexpr std::string_view kBadProbability = "bad probability";

std::vector<Violation> validate_net(const ColouredNet& net);

/// Resolved, index-based view of a net used by the firing rule. Construction
/// throws NetError when the net has dangling references.
class NetSemantics {
 public:
  explicit NetSemantics(const ColouredNet& net);

  const ColouredNet& net() const { return *net_; }

  Marking initial_marking() const;
  /// Throws NetError when `m` does not fit the net's shape or invariants.
  void check_marking(const Marking& m) const;

  std::vector<Binding> enabled_bindings(const Marking& m) const;
  bool is_enabled(const Marking& m, const Binding& b) const;
  Marking fire(const Marking& m, const Binding& b) const;
  Marking advance_time(const Marking& m, std::int64_t delta) const;

  /// Current value of a store variable.
  std::int64_t value(const Marking& m, std::string_view variable) const;
  std::int64_t tokens(const Marking& m, std::string_view place,
                      std::string_view colour_value) const;
  std::int64_t total_tokens(const Marking& m, std::string_view place) const;

  /// Human-readable binding, e.g. `do IB<x=raw>`.
  std::string describe(const Binding& b) const;
  /// Canonical text: places sorted by name, tokens in colour order, store
  /// sorted by name.
  std::string encode(const Marking& m) const;

 private:
  struct ArcTermRef {
    Expr count;
    std::optional<std::size_t> constant;  // colour value index
    std::string variable;                  // set when not constant
  };
  struct ArcRef {
    std::size_t place;
    std::vector<ArcTermRef> terms;
  };
  struct AssignRef {
    std::size_t variable;
    Expr value;
  };
  struct TransitionRef {
    std::vector<ArcRef> inputs;
    std::vector<ArcRef> outputs;
    std::vector<AssignRef> assignments;
    // Free variables with their colour sets, sorted by name.
    std::vector<std::pair<std::string, std::size_t>> free_vars;
  };

  Resolver resolver(const Marking& m, const Binding& b) const;
  bool enabled_impl(const Marking& m, const Binding& b, std::string* why) const;
  std::vector<std::int64_t> arc_counts(const ArcRef& arc, const Marking& m, const Binding& b) const;

  std::shared_ptr<const ColouredNet> net_;
  std::vector<std::size_t> place_colour_;
  std::vector<TransitionRef> transitions_;
  std::unordered_map<std::string, std::size_t> var_index_;
  std::unordered_map<std::string, std::int64_t> colour_constants_;
};

// Free-function forms of the firing rule.
std::vector<Binding> enabled_bindings(const ColouredNet& net, const Marking& m);
Marking fire(const ColouredNet& net, const Marking& m, const Binding& b);
Marking advance_time(const ColouredNet& net, const Marking& m, std::int64_t delta);

struct ExploreLimits {
  std::size_t max_nodes = 100000;
  /// Maximum BFS depth from the initial marking.
  std::size_t max_depth = 100000;
};

struct ReachEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  Binding binding;
  std::string label;
};

struct ReachGraph {
  std::vector<Marking> nodes;
  std::vector<ReachEdge> edges;
  bool truncated = false;
  ExploreLimits limits;
};

ReachGraph reachability_graph(const ColouredNet& net, const ExploreLimits& limits = {});

class BoundTooSmallError : public NetError {
 public:
  using NetError::NetError;
};

struct EquivalenceResult {
  bool equivalent = false;
  /// Labels along a shortest distinguishing path when not equivalent.
  std::vector<std::string> witness;
  std::string reason;
};

/// Bounded behavioural equivalence: reachability graphs isomorphic with edges
/// labelled by transition label. Throws BoundTooSmallError on truncation.
EquivalenceResult equivalent(const ColouredNet& a, const ColouredNet& b,
                             const ExploreLimits& limits = {});

/// Unfolds every bounded counter into one place per value.
ColouredNet expand_counters(const ColouredNet& net);

}  // namespace pmk
