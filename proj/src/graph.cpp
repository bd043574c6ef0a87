#include "pmk/graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>

namespace pmk {

namespace {

using EdgeKey = std::tuple<std::size_t, int, std::size_t>;

struct Indexed {
  std::vector<std::vector<std::pair<int, std::size_t>>> out, in;
  std::map<EdgeKey, int> multiplicity;
};

Indexed index_graph(const LabelledGraph& g, std::unordered_map<std::string, int>& labels) {
  Indexed ix;
  ix.out.resize(g.node_count);
  ix.in.resize(g.node_count);
  for (const auto& e : g.edges) {
    auto [it, _] = labels.emplace(e.label, static_cast<int>(labels.size()));
    int l = it->second;
    ix.out[e.from].emplace_back(l, e.to);
    ix.in[e.to].emplace_back(l, e.from);
    ++ix.multiplicity[{e.from, l, e.to}];
  }
  return ix;
}

// Colour refinement over the disjoint union of both graphs. Returns one colour
// per node, a's nodes first.
std::vector<int> refine(const LabelledGraph& a, const Indexed& ia, const LabelledGraph& b,
                        const Indexed& ib) {
  std::size_t na = a.node_count;
  std::size_t n = na + b.node_count;
  std::vector<int> colour(n, 0);
  colour[a.root] = 1;
  colour[na + b.root] = 1;
  std::size_t classes = 2;

  while (true) {
    using Sig = std::pair<int, std::vector<std::tuple<int, int, int>>>;
    std::map<Sig, int> ids;
    std::vector<int> next(n);
    for (std::size_t v = 0; v < n; ++v) {
      bool in_a = v < na;
      std::size_t local = in_a ? v : v - na;
      const Indexed& ix = in_a ? ia : ib;
      std::size_t offset = in_a ? 0 : na;
      Sig sig;
      sig.first = colour[v];
      for (auto [l, w] : ix.out[local]) sig.second.emplace_back(0, l, colour[offset + w]);
      for (auto [l, w] : ix.in[local]) sig.second.emplace_back(1, l, colour[offset + w]);
      std::sort(sig.second.begin(), sig.second.end());
      auto [it, _] = ids.emplace(std::move(sig), static_cast<int>(ids.size()));
      next[v] = it->second;
    }
    colour = std::move(next);
    if (ids.size() == classes) break;
    classes = ids.size();
  }
  return colour;
}

std::vector<std::size_t> traversal_order(const LabelledGraph& g, const Indexed& ix) {
  std::vector<std::size_t> order;
  std::vector<bool> seen(g.node_count, false);
  auto visit_from = [&](std::size_t start) {
    std::deque<std::size_t> queue{start};
    seen[start] = true;
    while (!queue.empty()) {
      std::size_t u = queue.front();
      queue.pop_front();
      order.push_back(u);
      for (const auto* adj : {&ix.out[u], &ix.in[u]}) {
        for (auto [l, w] : *adj) {
          if (!seen[w]) {
            seen[w] = true;
            queue.push_back(w);
          }
        }
      }
    }
  };
  if (g.node_count > 0) visit_from(g.root);
  for (std::size_t v = 0; v < g.node_count; ++v) {
    if (!seen[v]) visit_from(v);
  }
  return order;
}

int count_of(const Indexed& ix, std::size_t u, int l, std::size_t w) {
  auto it = ix.multiplicity.find({u, l, w});
  return it == ix.multiplicity.end() ? 0 : it->second;
}

}  // namespace

std::optional<std::vector<std::size_t>> find_isomorphism(const LabelledGraph& a,
                                                         const LabelledGraph& b) {
  if (a.node_count != b.node_count || a.edges.size() != b.edges.size()) return std::nullopt;
  std::size_t n = a.node_count;
  if (n == 0) return std::vector<std::size_t>{};

  std::unordered_map<std::string, int> labels;
  Indexed ia = index_graph(a, labels);
  Indexed ib = index_graph(b, labels);
  std::vector<int> colour = refine(a, ia, b, ib);

  std::map<int, std::vector<std::size_t>> b_by_colour;
  std::map<int, long> histogram;
  for (std::size_t v = 0; v < n; ++v) ++histogram[colour[v]];
  for (std::size_t v = 0; v < n; ++v) {
    --histogram[colour[n + v]];
    b_by_colour[colour[n + v]].push_back(v);
  }
  for (const auto& [c, k] : histogram) {
    if (k != 0) return std::nullopt;
  }

  std::vector<std::size_t> order = traversal_order(a, ia);
  constexpr std::size_t kUnmapped = static_cast<std::size_t>(-1);
  std::vector<std::size_t> map_ab(n, kUnmapped);
  std::vector<bool> used(n, false);

  auto consistent = [&](std::size_t u, std::size_t v) {
    for (auto [l, w] : ia.out[u]) {
      std::size_t mw = (w == u) ? v : map_ab[w];
      if (mw == kUnmapped) continue;
      if (count_of(ia, u, l, w) != count_of(ib, v, l, mw)) return false;
    }
    for (auto [l, x] : ia.in[u]) {
      std::size_t mx = (x == u) ? v : map_ab[x];
      if (mx == kUnmapped) continue;
      if (count_of(ia, x, l, u) != count_of(ib, mx, l, v)) return false;
    }
    return true;
  };

  // Iterative backtracking; cursor[i] is the next candidate index for order[i].
  std::vector<std::size_t> cursor(n, 0);
  std::size_t depth = 0;
  while (true) {
    if (depth == n) return map_ab;
    std::size_t u = order[depth];
    const auto& cands = b_by_colour[colour[u]];
    bool placed = false;
    while (cursor[depth] < cands.size()) {
      std::size_t v = cands[cursor[depth]++];
      if (used[v]) continue;
      if (depth == 0 && v != b.root) continue;
      if (!consistent(u, v)) continue;
      map_ab[u] = v;
      used[v] = true;
      placed = true;
      break;
    }
    if (placed) {
      ++depth;
      if (depth < n) cursor[depth] = 0;
      continue;
    }
    if (depth == 0) return std::nullopt;
    --depth;
    std::size_t prev = order[depth];
    used[map_ab[prev]] = false;
    map_ab[prev] = kUnmapped;
  }
}

std::optional<std::vector<std::string>> distinguishing_trace(const LabelledGraph& a,
                                                             const LabelledGraph& b) {
  using NodeSet = std::vector<std::size_t>;
  using State = std::pair<NodeSet, NodeSet>;
  if (a.node_count == 0 || b.node_count == 0) {
    if (a.node_count == b.node_count) return std::nullopt;
    return std::vector<std::string>{};
  }
  std::vector<std::vector<const LabelledGraph::Edge*>> out_a(a.node_count), out_b(b.node_count);
  for (const auto& e : a.edges) out_a[e.from].push_back(&e);
  for (const auto& e : b.edges) out_b[e.from].push_back(&e);

  auto successors = [](const NodeSet& set, const auto& out) {
    std::map<std::string, std::set<std::size_t>> succ;
    for (auto v : set) {
      for (const auto* e : out[v]) succ[e->label].insert(e->to);
    }
    return succ;
  };

  std::map<State, std::pair<std::size_t, std::string>> parent;  // state -> (parent idx, label)
  std::vector<State> states;
  std::deque<std::size_t> queue;
  State start{{a.root}, {b.root}};
  states.push_back(start);
  parent[start] = {static_cast<std::size_t>(-1), ""};
  queue.push_back(0);

  auto trace_back = [&](std::size_t idx) {
    std::vector<std::string> labels;
    while (true) {
      const auto& [p, l] = parent.at(states[idx]);
      if (p == static_cast<std::size_t>(-1)) break;
      labels.push_back(l);
      idx = p;
    }
    std::reverse(labels.begin(), labels.end());
    return labels;
  };

  while (!queue.empty()) {
    std::size_t idx = queue.front();
    queue.pop_front();
    State cur = states[idx];
    auto sa = successors(cur.first, out_a);
    auto sb = successors(cur.second, out_b);
    std::set<std::string> all;
    for (const auto& [l, _] : sa) all.insert(l);
    for (const auto& [l, _] : sb) all.insert(l);
    for (const auto& l : all) {
      bool ina = sa.count(l) > 0;
      bool inb = sb.count(l) > 0;
      if (ina != inb) {
        auto labels = trace_back(idx);
        labels.push_back(l);
        return labels;
      }
      State nxt{NodeSet(sa[l].begin(), sa[l].end()), NodeSet(sb[l].begin(), sb[l].end())};
      if (parent.count(nxt)) continue;
      parent[nxt] = {idx, l};
      states.push_back(nxt);
      queue.push_back(states.size() - 1);
    }
  }
  return std::nullopt;
}

std::vector<std::string> path_to(const LabelledGraph& g, std::size_t target) {
  std::vector<std::pair<std::size_t, const LabelledGraph::Edge*>> parent(
      g.node_count, {static_cast<std::size_t>(-1), nullptr});
  std::vector<std::vector<const LabelledGraph::Edge*>> out(g.node_count);
  for (const auto& e : g.edges) out[e.from].push_back(&e);
  std::vector<bool> seen(g.node_count, false);
  std::deque<std::size_t> queue{g.root};
  seen[g.root] = true;
  while (!queue.empty()) {
    std::size_t u = queue.front();
    queue.pop_front();
    if (u == target) break;
    for (const auto* e : out[u]) {
      if (seen[e->to]) continue;
      seen[e->to] = true;
      parent[e->to] = {u, e};
      queue.push_back(e->to);
    }
  }
  std::vector<std::string> labels;
  if (!seen[target]) return labels;
  for (std::size_t v = target; v != g.root; v = parent[v].first) {
    labels.push_back(parent[v].second->label);
  }
  std::reverse(labels.begin(), labels.end());
  return labels;
}

}  // namespace pmk
