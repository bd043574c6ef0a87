#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace pmk {

/// Rooted, edge-labelled directed multigraph.
struct LabelledGraph {
  struct Edge {
    std::size_t from;
    std::string label;
    std::size_t to;
  };
  std::size_t node_count = 0;
  std::size_t root = 0;
  std::vector<Edge> edges;
};

/// Returns a root-preserving, label-preserving bijection a -> b, or nullopt.
std::optional<std::vector<std::size_t>> find_isomorphism(const LabelledGraph& a,
                                                         const LabelledGraph& b);

/// Shortest label sequence accepted from the root of exactly one of the two
/// graphs (every node accepting), or nullopt when their trace sets coincide.
std::optional<std::vector<std::string>> distinguishing_trace(const LabelledGraph& a,
                                                             const LabelledGraph& b);

/// Shortest path from the root to `target`, as edge labels.
std::vector<std::string> path_to(const LabelledGraph& g, std::size_t target);

}  // namespace pmk
