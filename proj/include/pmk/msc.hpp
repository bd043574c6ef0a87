#pragma once

#include <string>
#include <vector>

#include "pmk/budget.hpp"
#include "pmk/cpn.hpp"
#include "pmk/mode.hpp"

namespace pmk {

struct MscEvent {
  enum class Kind { Send, Receive, Action };
  Kind kind = Kind::Action;
  std::string lifeline;
  /// Peer lifeline for sends and receives.
  std::string peer;
  std::string label;
  /// Message number shared by a send and its receive.
  std::size_t message = 0;

  friend bool operator==(const MscEvent&, const MscEvent&) = default;
};

struct MscReference {
  std::string name;
  std::string msc;

  friend bool operator==(const MscReference&, const MscReference&) = default;
};

struct MscConnection {
  std::string from;
  std::string event;
  std::string to;

  friend bool operator==(const MscConnection&, const MscConnection&) = default;
};

struct Msc {
  std::string name;
  std::vector<std::string> lifelines;
  std::vector<MscEvent> events;
  /// High-level charts only: one reference per mode and the mode graph.
  std::vector<MscReference> references;
  std::vector<MscConnection> connections;
  std::string initial;
  std::vector<Msc> children;

  std::size_t message_count() const;

  friend bool operator==(const Msc&, const Msc&) = default;
};

/// Lifeline a transition executes on: its operation's target, else its
/// component's site, else GPP.
std::string transition_lifeline(const ColouredNet& net, const Transition& t,
                                const DeploymentAssignment& assignment);

std::vector<std::string> lifelines(const ColouredNet& net, const DeploymentAssignment& assignment);

/// Throws NotEnabledError at the first transition that cannot fire.
Msc trace_to_msc(const ColouredNet& net, const std::vector<std::string>& trace,
                 const DeploymentAssignment& assignment, const std::string& name = "trace");

/// Repeatedly fires the first enabled binding of a transition that has not
/// fired yet; one pass through the net.
std::vector<std::string> canonical_trace(const ColouredNet& net);

Msc modes_to_hmsc(const ModeAutomaton& automaton, const DeploymentAssignment& assignment);

std::string render_msc(const Msc& msc);

}  // namespace pmk
