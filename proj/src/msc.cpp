#include "pmk/msc.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>

#include "pmk/lexer.hpp"

namespace pmk {

namespace {

const std::vector<std::string> kLifelineOrder{"GPP", "DSP", "Motors", "Buffer", "Flash"};

std::optional<std::string> place_site(const ColouredNet& net, const std::string& place) {
  const Place* p = net.find_place(place);
  if (!p) return std::nullopt;
  const Component* c = net.find_component(p->component);
  if (!c || !c->site) return std::nullopt;
  return std::string(to_string(*c->site));
}

std::pair<std::string, std::string> endpoints(const ColouredNet& net, const Transition& t,
                                              const DeploymentAssignment& assignment) {
  std::string own = transition_lifeline(net, t, assignment);
  std::string src = own, dst = own;
  for (const auto& a : t.inputs) {
    if (auto s = place_site(net, a.place)) {
      src = *s;
      break;
    }
  }
  for (const auto& a : t.outputs) {
    if (auto s = place_site(net, a.place)) {
      dst = *s;
      break;
    }
  }
  return {src, dst};
}

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  return out + "'";
}

std::string ident(const std::string& s) { return is_plain_identifier(s) ? s : quote(s); }

}  // namespace

std::size_t Msc::message_count() const {
  return std::count_if(events.begin(), events.end(),
                       [](const MscEvent& e) { return e.kind == MscEvent::Kind::Send; });
}

std::string transition_lifeline(const ColouredNet& net, const Transition& t,
                                const DeploymentAssignment& assignment) {
  if (t.operation) {
    if (auto it = assignment.find(*t.operation); it != assignment.end()) {
      return std::string(to_string(it->second));
    }
  }
  if (const Component* c = net.find_component(t.component); c && c->site) {
    return std::string(to_string(*c->site));
  }
  return "GPP";
}

std::vector<std::string> lifelines(const ColouredNet& net, const DeploymentAssignment& assignment) {
  std::set<std::string> used;
  for (const auto& t : net.transitions) {
    auto [src, dst] = endpoints(net, t, assignment);
    used.insert(transition_lifeline(net, t, assignment));
    used.insert(src);
    used.insert(dst);
  }
  std::vector<std::string> out;
  for (const auto& l : kLifelineOrder) {
    if (used.count(l)) out.push_back(l);
  }
  return out;
}

Msc trace_to_msc(const ColouredNet& net, const std::vector<std::string>& trace,
                 const DeploymentAssignment& assignment, const std::string& name) {
  NetSemantics sem(net);
  Msc msc;
  msc.name = name;
  msc.lifelines = lifelines(net, assignment);
  Marking m = sem.initial_marking();
  std::size_t message = 0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    auto idx = net.transition_index(trace[i]);
    if (!idx) throw NetError("step " + std::to_string(i) + ": unknown transition '" + trace[i] + "'");
    std::optional<Binding> chosen;
    for (const auto& b : sem.enabled_bindings(m)) {
      if (b.transition == *idx) {
        chosen = b;
        break;
      }
    }
    if (!chosen) {
      throw NotEnabledError("step " + std::to_string(i) + ": '" + trace[i] + "' is not enabled");
    }
    m = sem.fire(m, *chosen);
    const Transition& t = net.transitions[*idx];
    auto [src, dst] = endpoints(net, t, assignment);
    if (src == dst) {
      msc.events.push_back(
          {MscEvent::Kind::Action, transition_lifeline(net, t, assignment), "", t.display_label(), 0});
    } else {
      ++message;
      msc.events.push_back({MscEvent::Kind::Send, src, dst, t.display_label(), message});
      msc.events.push_back({MscEvent::Kind::Receive, dst, src, t.display_label(), message});
    }
  }
  return msc;
}

std::vector<std::string> canonical_trace(const ColouredNet& net) {
  NetSemantics sem(net);
  Marking m = sem.initial_marking();
  std::vector<bool> fired(net.transitions.size(), false);
  std::vector<std::string> out;
  while (true) {
    std::optional<Binding> next;
    for (const auto& b : sem.enabled_bindings(m)) {
      if (!fired[b.transition]) {
        next = b;
        break;
      }
    }
    if (!next) return out;
    fired[next->transition] = true;
    out.push_back(net.transitions[next->transition].name);
    m = sem.fire(m, *next);
  }
}

Msc modes_to_hmsc(const ModeAutomaton& automaton, const DeploymentAssignment& assignment) {
  Msc top;
  top.name = automaton.name();
  top.initial = automaton.initial_leaf();
  for (const auto& leaf : automaton.leaves()) {
    const Mode* mode = automaton.find_mode(leaf);
    if (!mode->refinement) throw ModeError("unrefined mode '" + leaf + "'");
    ColouredNet net = refine(automaton, leaf);
    top.references.push_back({leaf, leaf});
    top.children.push_back(trace_to_msc(net, canonical_trace(net), assignment, leaf));
  }
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  for (const auto& t : automaton.leaf_transitions()) {
    if (seen.insert({t.source, t.event, t.target}).second) {
      top.connections.push_back({t.source, t.event, t.target});
    }
  }
  return top;
}

std::string render_msc(const Msc& msc) {
  std::ostringstream os;
  if (!msc.references.empty() || !msc.connections.empty()) {
    os << "hmsc " << ident(msc.name) << ";\n";
    if (!msc.initial.empty()) os << "  initial " << ident(msc.initial) << ";\n";
    for (const auto& r : msc.references) os << "  ref " << ident(r.name) << ": msc " << ident(r.msc) << ";\n";
    for (const auto& c : msc.connections) {
      os << "  connect " << ident(c.from) << " -> " << ident(c.to) << " on " << quote(c.event) << ";\n";
    }
    os << "endhmsc;\n";
  } else {
    os << "msc " << ident(msc.name) << ";\n";
    os << "  inst";
    for (std::size_t i = 0; i < msc.lifelines.size(); ++i) {
      os << (i ? ", " : " ") << msc.lifelines[i];
    }
    os << ";\n";
    for (const auto& e : msc.events) {
      os << "  " << e.lifeline << ": ";
      switch (e.kind) {
        case MscEvent::Kind::Action: os << "action " << quote(e.label); break;
        case MscEvent::Kind::Send: os << "out m" << e.message << "(" << quote(e.label) << ") to " << e.peer; break;
        case MscEvent::Kind::Receive: os << "in m" << e.message << "(" << quote(e.label) << ") from " << e.peer; break;
      }
      os << ";\n";
    }
    os << "endmsc;\n";
  }
  for (const auto& child : msc.children) os << "\n" << render_msc(child);
  return os.str();
}

}  // namespace pmk
