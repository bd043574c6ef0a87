#include "pmk/layout.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace pmk {

const DiagramNode* Diagram::find(std::string_view id) const {
  for (const auto& n : nodes) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

DiagramNode* Diagram::find(std::string_view id) {
  for (auto& n : nodes) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

void Diagram::reroute() {
  std::map<std::string, Point> pos;
  for (const auto& n : nodes) pos[n.id] = {n.lane, n.layer};
  for (auto& r : routes) r.points = {pos.at(r.from), pos.at(r.to)};
  for (auto& c : clusters) {
    for (auto& r : c.absorbed) r.points = {pos.at(r.from), pos.at(r.to)};
  }
}

namespace {

// -1 left, +1 right, 0 for colours that have no side.
int side_of(const Diagram& d, const std::string& colour) {
  if (colour.empty()) return 0;
  if (!d.colour_order.empty() && d.colour_order[0] == colour) return -1;
  if (d.colour_order.size() > 1 && d.colour_order[1] == colour) return 1;
  return 0;
}

// Lanes for one layer, given its nodes in the desired left-to-right order
// inside each side group.
void assign_lanes(Diagram& d, const std::vector<DiagramNode*>& layer_nodes) {
  std::vector<DiagramNode*> left, right, rest;
  for (auto* n : layer_nodes) {
    int s = side_of(d, n->colour);
    (s < 0 ? left : s > 0 ? right : rest).push_back(n);
  }
  std::int64_t k = static_cast<std::int64_t>(left.size());
  for (std::size_t i = 0; i < left.size(); ++i) left[i]->lane = -k + static_cast<std::int64_t>(i);
  for (std::size_t i = 0; i < right.size(); ++i) right[i]->lane = static_cast<std::int64_t>(i) + 1;
  std::int64_t next = static_cast<std::int64_t>(right.size()) + 1;
  for (std::size_t i = 0; i < rest.size(); ++i) rest[i]->lane = i == 0 ? 0 : next++;
}

std::map<std::int64_t, std::vector<DiagramNode*>> by_layer(Diagram& d) {
  std::map<std::int64_t, std::vector<DiagramNode*>> layers;
  for (auto& n : d.nodes) layers[n.layer].push_back(&n);
  for (auto& [_, ns] : layers) {
    std::stable_sort(ns.begin(), ns.end(),
                     [](const DiagramNode* a, const DiagramNode* b) { return a->lane < b->lane; });
  }
  return layers;
}

std::int64_t orient(const Point& p, const Point& q, const Point& r) {
  std::int64_t v = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
  return (v > 0) - (v < 0);
}

bool on_segment(const Point& p, const Segment& s) {
  return orient(s.a, s.b, p) == 0 && std::min(s.a.x, s.b.x) <= p.x && p.x <= std::max(s.a.x, s.b.x) &&
         std::min(s.a.y, s.b.y) <= p.y && p.y <= std::max(s.a.y, s.b.y);
}

bool is_endpoint(const Point& p, const Segment& s) { return p == s.a || p == s.b; }

bool crosses(const Segment& s, const Segment& t) {
  // Two routes between the same pair of nodes are drawn side by side.
  if ((s.a == t.a && s.b == t.b) || (s.a == t.b && s.b == t.a)) return false;
  bool s_point = s.a == s.b;
  bool t_point = t.a == t.b;
  if (s_point && t_point) return false;
  if (s_point) return on_segment(s.a, t) && !is_endpoint(s.a, t);
  if (t_point) return on_segment(t.a, s) && !is_endpoint(t.a, s);

  std::int64_t o1 = orient(s.a, s.b, t.a), o2 = orient(s.a, s.b, t.b);
  std::int64_t o3 = orient(t.a, t.b, s.a), o4 = orient(t.a, t.b, s.b);
  if (o1 == 0 && o2 == 0) {
    // Collinear: compare the overlap along the dominant axis.
    bool use_x = s.a.x != s.b.x;
    auto coord = [use_x](const Point& p) { return use_x ? p.x : p.y; };
    std::int64_t lo = std::max(std::min(coord(s.a), coord(s.b)), std::min(coord(t.a), coord(t.b)));
    std::int64_t hi = std::min(std::max(coord(s.a), coord(s.b)), std::max(coord(t.a), coord(t.b)));
    if (lo > hi) return false;
    if (lo < hi) return true;
    for (const Point& p : {s.a, s.b}) {
      if (coord(p) == lo) return !is_endpoint(p, t);
    }
    return true;
  }
  bool meet = false;
  if (o1 != o2 && o3 != o4) meet = true;
  else if (o1 == 0 && on_segment(t.a, s)) meet = true;
  else if (o2 == 0 && on_segment(t.b, s)) meet = true;
  else if (o3 == 0 && on_segment(s.a, t)) meet = true;
  else if (o4 == 0 && on_segment(s.b, t)) meet = true;
  if (!meet) return false;
  bool shared = s.a == t.a || s.a == t.b || s.b == t.a || s.b == t.b;
  return !shared;
}

std::vector<std::string> touched_counters(const Transition& t, const std::set<std::string>& counters) {
  std::set<std::string> refs;
  auto scan = [&](const Expr& e) {
    for (const auto& r : refs_of(e)) {
      if (counters.count(r)) refs.insert(r);
    }
  };
  if (t.guard) scan(*t.guard);
  for (const auto& a : t.assignments) {
    if (counters.count(a.variable)) refs.insert(a.variable);
    scan(a.value);
  }
  for (const auto* arcs : {&t.inputs, &t.outputs}) {
    for (const auto& arc : *arcs) {
      for (const auto& term : arc.terms) scan(term.count);
    }
  }
  return {refs.begin(), refs.end()};
}

}  // namespace

Diagram layered_layout(const ColouredNet& net, const std::map<std::string, std::string>& colours) {
  Diagram d;
  std::set<std::string> tags;
  for (const auto& [_, c] : colours) {
    if (!c.empty()) tags.insert(c);
  }
  d.colour_order.assign(tags.begin(), tags.end());

  std::vector<std::string> ids;
  std::map<std::string, std::size_t> index;
  for (const auto& p : net.places) {
    index[p.name] = ids.size();
    ids.push_back(p.name);
  }
  for (const auto& t : net.transitions) {
    index[t.name] = ids.size();
    ids.push_back(t.name);
  }
  std::size_t n = ids.size();
  std::vector<std::vector<std::size_t>> succ(n);
  for (const auto& t : net.transitions) {
    std::size_t ti = index.at(t.name);
    for (const auto& a : t.inputs) succ[index.at(a.place)].push_back(ti);
    for (const auto& a : t.outputs) succ[ti].push_back(index.at(a.place));
  }

  // Initially marked places start layer 0; remaining cycles are broken by
  // dropping the edges a DFS finds into its own stack.
  std::vector<int> state(n, 0);
  std::set<std::pair<std::size_t, std::size_t>> back;
  std::vector<bool> marked(n, false);
  for (const auto& p : net.places) marked[index.at(p.name)] = !p.initial.empty();
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v : succ[u]) {
      if (marked[v]) back.insert({u, v});
    }
  }
  std::function<void(std::size_t)> dfs = [&](std::size_t u) {
    state[u] = 1;
    for (std::size_t v : succ[u]) {
      if (back.count({u, v})) continue;
      if (state[v] == 1) back.insert({u, v});
      else if (state[v] == 0) dfs(v);
    }
    state[u] = 2;
  };
  for (const auto& p : net.places) {
    if (!p.initial.empty() && state[index.at(p.name)] == 0) dfs(index.at(p.name));
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (state[v] == 0) dfs(v);
  }

  std::vector<std::size_t> indegree(n, 0);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v : succ[u]) {
      if (!back.count({u, v})) ++indegree[v];
    }
  }
  std::vector<std::int64_t> layer(n, 0);
  std::vector<std::size_t> queue;
  for (std::size_t v = 0; v < n; ++v) {
    if (indegree[v] == 0) queue.push_back(v);
  }
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    std::size_t u = queue[qi];
    for (std::size_t v : succ[u]) {
      if (back.count({u, v})) continue;
      layer[v] = std::max(layer[v], layer[u] + 1);
      if (--indegree[v] == 0) queue.push_back(v);
    }
  }

  for (std::size_t v = 0; v < n; ++v) {
    DiagramNode node;
    node.id = ids[v];
    node.kind = v < net.places.size() ? NodeKind::Place : NodeKind::Transition;
    node.layer = layer[v];
    if (auto it = colours.find(ids[v]); it != colours.end()) node.colour = it->second;
    d.nodes.push_back(node);
  }
  std::map<std::int64_t, std::vector<DiagramNode*>> layers;
  for (auto& node : d.nodes) layers[node.layer].push_back(&node);
  for (auto& [_, ns] : layers) assign_lanes(d, ns);

  auto route_colour = [&](const std::string& a, const std::string& b) {
    const DiagramNode* na = d.find(a);
    const DiagramNode* nb = d.find(b);
    return na->colour == nb->colour ? na->colour : std::string();
  };
  for (const auto& t : net.transitions) {
    for (const auto& a : t.inputs) {
      d.routes.push_back({a.place, t.name, route_colour(a.place, t.name), a.sync_role, {}});
    }
    for (const auto& a : t.outputs) {
      d.routes.push_back({t.name, a.place, route_colour(t.name, a.place), a.sync_role, {}});
    }
  }
  d.reroute();
  return d;
}

std::vector<Segment> segments(const Diagram& d) {
  std::vector<Segment> out;
  for (const auto& r : d.routes) {
    for (std::size_t i = 0; i + 1 < r.points.size(); ++i) out.push_back({r.points[i], r.points[i + 1]});
  }
  return out;
}

std::int64_t count_crossings(const std::vector<Segment>& segs) {
  std::int64_t count = 0;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    for (std::size_t j = i + 1; j < segs.size(); ++j) {
      if (crosses(segs[i], segs[j])) ++count;
    }
  }
  return count;
}

std::int64_t count_crossings(const Diagram& d) { return count_crossings(segments(d)); }

std::map<std::string, std::int64_t> count_side_switches(const Diagram& d) {
  std::map<std::string, std::vector<const DiagramNode*>> paths;
  for (const auto& n : d.nodes) {
    if (!n.colour.empty()) paths[n.colour].push_back(&n);
  }
  std::map<std::string, std::int64_t> out;
  for (auto& [colour, ns] : paths) {
    std::stable_sort(ns.begin(), ns.end(), [](const DiagramNode* a, const DiagramNode* b) {
      return a->layer != b->layer ? a->layer < b->layer : a->lane < b->lane;
    });
    std::int64_t flips = 0;
    int prev = 0;
    for (const auto* n : ns) {
      int s = (n->lane > 0) - (n->lane < 0);
      if (s == 0) continue;
      if (prev != 0 && s != prev) ++flips;
      prev = s;
    }
    out[colour] = flips;
  }
  return out;
}

std::int64_t count_sync_arrows(const Diagram& d) {
  return std::count_if(d.routes.begin(), d.routes.end(),
                       [](const Route& r) { return r.sync_role.has_value(); });
}

ReadabilityReport readability(const Diagram& d, const LayoutWeights& w) {
  ReadabilityReport r;
  r.crossings = count_crossings(d);
  r.side_switches = count_side_switches(d);
  for (const auto& [_, k] : r.side_switches) r.side_switches_total += k;
  r.sync_arrows = count_sync_arrows(d);
  for (const auto& n : d.nodes) {
    if (!n.colour.empty() && n.lane == 0) r.unsided.push_back(n.id);
  }
  r.composite = w.crossing * static_cast<double>(r.crossings) +
                w.side_switch * static_cast<double>(r.side_switches_total) +
                w.sync_arrow * static_cast<double>(r.sync_arrows);
  return r;
}

Diagram group_counters(const ColouredNet& net, const Diagram& d) {
  std::set<std::string> counters;
  for (const auto& v : net.variables) {
    if (v.kind == VarKind::Counter) counters.insert(v.name);
  }
  if (counters.empty()) return d;

  std::vector<std::string> names(counters.begin(), counters.end());
  std::map<std::string, std::size_t> id;
  for (std::size_t i = 0; i < names.size(); ++i) id[names[i]] = i;
  std::vector<std::size_t> parent(names.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> root = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = root(parent[x]);
  };
  std::map<std::string, std::set<std::string>> members;
  for (const auto& t : net.transitions) {
    auto touched = touched_counters(t, counters);
    for (const auto& c : touched) members[c].insert(t.name);
    for (std::size_t i = 1; i < touched.size(); ++i) parent[root(id[touched[i]])] = root(id[touched[0]]);
  }
  // Counters sharing a member are drawn as one box.
  std::map<std::size_t, Cluster> groups;
  for (const auto& c : names) {
    if (!members.count(c)) continue;
    Cluster& g = groups[root(id[c])];
    g.counters.push_back(c);
    for (const auto& m : members[c]) {
      if (std::find(g.members.begin(), g.members.end(), m) == g.members.end()) g.members.push_back(m);
    }
  }
  Diagram out = d;
  for (auto& [_, g] : groups) {
    std::sort(g.members.begin(), g.members.end());
    for (const auto& c : g.counters) g.name += (g.name.empty() ? "" : "+") + c;
    std::vector<Route> kept;
    for (auto& r : out.routes) {
      bool mine = r.sync_role &&
                  std::find(g.counters.begin(), g.counters.end(), *r.sync_role) != g.counters.end();
      (mine ? g.absorbed : kept).push_back(r);
    }
    out.routes = std::move(kept);
    auto existing = std::find_if(out.clusters.begin(), out.clusters.end(),
                                 [&](const Cluster& c) { return c.name == g.name; });
    if (existing == out.clusters.end()) {
      out.clusters.push_back(std::move(g));
    } else {
      existing->absorbed.insert(existing->absorbed.end(), g.absorbed.begin(), g.absorbed.end());
    }
  }
  return out;
}

ColouredNet derived_net(const ColouredNet& net, const Diagram& d) {
  std::map<std::string, std::string> rename;
  for (const auto& c : d.clusters) {
    for (const auto& r : c.absorbed) {
      const std::string& place = net.find_place(r.from) ? r.from : r.to;
      if (!rename.count(place)) rename[place] = c.name + ":" + place;
    }
  }
  ColouredNet out = net;
  for (auto& p : out.places) {
    if (auto it = rename.find(p.name); it != rename.end()) p.name = it->second;
  }
  for (auto& t : out.transitions) {
    for (auto* arcs : {&t.inputs, &t.outputs}) {
      for (auto& a : *arcs) {
        if (auto it = rename.find(a.place); it != rename.end()) a.place = it->second;
      }
    }
  }
  return out;
}

Diagram swap_lanes_after(const Diagram& d, std::string_view after) {
  Diagram out = d;
  const DiagramNode* pivot = d.find(after);
  if (!pivot) return out;
  for (auto& n : out.nodes) {
    if (n.layer > pivot->layer) n.lane = -n.lane;
  }
  out.reroute();
  return out;
}

LayoutResult optimize_layout(const ColouredNet& net, const Diagram& d, const LayoutWeights& w,
                             const ExploreLimits& limits) {
  LayoutResult res;
  res.before = readability(d, w);
  Diagram cur = d;
  double score = res.before.composite;

  auto try_accept = [&](Diagram cand) {
    cand.reroute();
    double s = readability(cand, w).composite;
    if (s <= score && !(cand == cur)) {
      cur = std::move(cand);
      score = s;
      return true;
    }
    return false;
  };

  // Same-side repair: every coloured node back onto its colour's side.
  {
    Diagram cand = cur;
    for (auto& [_, ns] : by_layer(cand)) assign_lanes(cand, ns);
    try_accept(std::move(cand));
  }

  // Barycenter sweeps within each side group.
  for (int sweep = 0; sweep < 10; ++sweep) {
    Diagram cand = cur;
    bool down = sweep % 2 == 0;
    std::map<std::string, std::vector<std::string>> nbrs;
    for (const auto& r : cand.routes) {
      nbrs[r.from].push_back(r.to);
      nbrs[r.to].push_back(r.from);
    }
    auto layers = by_layer(cand);
    std::vector<std::int64_t> order;
    for (const auto& [l, _] : layers) order.push_back(l);
    if (!down) std::reverse(order.begin(), order.end());
    for (std::int64_t l : order) {
      auto& ns = layers[l];
      std::map<const DiagramNode*, double> bary;
      for (auto* node : ns) {
        double sum = 0;
        int k = 0;
        for (const auto& other : nbrs[node->id]) {
          const DiagramNode* o = cand.find(other);
          if (down ? o->layer < l : o->layer > l) {
            sum += static_cast<double>(o->lane);
            ++k;
          }
        }
        bary[node] = k ? sum / k : static_cast<double>(node->lane);
      }
      std::stable_sort(ns.begin(), ns.end(), [&](const DiagramNode* a, const DiagramNode* b) {
        return bary[a] < bary[b];
      });
      assign_lanes(cand, ns);
    }
    if (!try_accept(std::move(cand))) break;
  }

  Diagram grouped = group_counters(net, cur);
  if (!grouped.clusters.empty() || !(grouped == cur)) {
    try {
      auto eq = equivalent(net, derived_net(net, grouped), limits);
      res.equivalence_checked = true;
      if (!eq.equivalent) {
        res.diagnostic = "grouped net is not equivalent: " + eq.reason;
      } else {
        try_accept(std::move(grouped));
      }
    } catch (const NetError& e) {
      res.diagnostic = std::string("equivalence check failed: ") + e.what();
    }
  }

  if (res.diagnostic) {
    res.diagram = d;
    res.after = res.before;
    return res;
  }
  res.diagram = cur;
  res.after = readability(cur, w);
  return res;
}

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string render_dot(const Diagram& d) {
  std::ostringstream os;
  os << "digraph diagram {\n";
  os << "  node [fontname=\"Helvetica\"];\n";
  for (std::size_t i = 0; i < d.clusters.size(); ++i) {
    const Cluster& c = d.clusters[i];
    os << "  subgraph cluster_" << i << " {\n";
    os << "    label=" << quoted(c.name) << ";\n";
    os << "    style=rounded;\n";
    for (const auto& m : c.members) {
      os << "    " << quoted(m) << ";\n";
    }
    os << "  }\n";
  }
  for (const auto& n : d.nodes) {
    os << "  " << quoted(n.id) << " [shape=" << (n.kind == NodeKind::Place ? "ellipse" : "box")
       << ", pos=\"" << n.lane << "," << -n.layer << "!\"";
    if (!n.colour.empty()) os << ", color=" << quoted(n.colour);
    os << "];\n";
  }
  for (const auto& r : d.routes) {
    os << "  " << quoted(r.from) << " -> " << quoted(r.to);
    std::vector<std::string> attrs;
    if (!r.colour.empty()) attrs.push_back("color=" + quoted(r.colour));
    if (r.sync_role) attrs.push_back("style=dashed, label=" + quoted(*r.sync_role));
    if (!attrs.empty()) {
      os << " [";
      for (std::size_t i = 0; i < attrs.size(); ++i) os << (i ? ", " : "") << attrs[i];
      os << "]";
    }
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace pmk
