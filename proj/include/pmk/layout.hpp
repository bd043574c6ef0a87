#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pmk/cpn.hpp"

namespace pmk {

struct Point {
  std::int64_t x = 0;  // lane
  std::int64_t y = 0;  // layer

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

struct Segment {
  Point a, b;

  friend bool operator==(const Segment&, const Segment&) = default;
};

enum class NodeKind { Place, Transition };

struct DiagramNode {
  std::string id;
  NodeKind kind = NodeKind::Place;
  std::int64_t layer = 0;
  std::int64_t lane = 0;
  /// Path colour tag; empty when the node is on no coloured path.
  std::string colour;

  friend bool operator==(const DiagramNode&, const DiagramNode&) = default;
};

struct Route {
  std::string from;
  std::string to;
  std::string colour;
  std::optional<std::string> sync_role;
  /// Polyline through the node positions; consecutive points form segments.
  std::vector<Point> points;

  friend bool operator==(const Route&, const Route&) = default;
};

struct Cluster {
  std::string name;
  std::vector<std::string> counters;
  std::vector<std::string> members;
  /// Sync routes absorbed by the cluster (no longer drawn).
  std::vector<Route> absorbed;

  friend bool operator==(const Cluster&, const Cluster&) = default;
};

struct Diagram {
  std::vector<DiagramNode> nodes;
  std::vector<Route> routes;
  std::vector<Cluster> clusters;
  /// Colour tags, first drawn left (negative lanes), second right.
  std::vector<std::string> colour_order;

  const DiagramNode* find(std::string_view id) const;
  DiagramNode* find(std::string_view id);
  /// Recomputes route polylines from node positions.
  void reroute();

  friend bool operator==(const Diagram&, const Diagram&) = default;
};

struct LayoutWeights {
  double crossing = 1;
  double side_switch = 2;
  double sync_arrow = 1;
};

struct ReadabilityReport {
  std::int64_t crossings = 0;
  std::map<std::string, std::int64_t> side_switches;
  std::int64_t side_switches_total = 0;
  std::int64_t sync_arrows = 0;
  /// Coloured-path nodes sitting on lane 0, which has no side.
  std::vector<std::string> unsided;
  double composite = 0;
};

Diagram layered_layout(const ColouredNet& net, const std::map<std::string, std::string>& colours);

std::vector<Segment> segments(const Diagram& d);
std::int64_t count_crossings(const Diagram& d);
std::int64_t count_crossings(const std::vector<Segment>& segs);
std::map<std::string, std::int64_t> count_side_switches(const Diagram& d);
std::int64_t count_sync_arrows(const Diagram& d);

ReadabilityReport readability(const Diagram& d, const LayoutWeights& w = {});

/// Clusters the nodes touching each counter and stops drawing sync routes.
Diagram group_counters(const ColouredNet& net, const Diagram& d);

/// The net a grouped diagram depicts: sync places are renamed after their
/// counter cluster.
ColouredNet derived_net(const ColouredNet& net, const Diagram& d);

struct LayoutResult {
  Diagram diagram;
  ReadabilityReport before;
  ReadabilityReport after;
  bool equivalence_checked = false;
  std::optional<std::string> diagnostic;
};

LayoutResult optimize_layout(const ColouredNet& net, const Diagram& d, const LayoutWeights& w = {},
                             const ExploreLimits& limits = {});

std::string render_dot(const Diagram& d);

/// Swaps the two coloured sides for every node laid out below `after`.
Diagram swap_lanes_after(const Diagram& d, std::string_view after);

}  // namespace pmk
