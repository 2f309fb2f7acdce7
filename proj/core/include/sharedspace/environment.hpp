#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sharedspace/geometry.hpp"

namespace sharedspace {

struct GraphEdge {
  int a = 0;
  int b = 0;
  double weight = 0.0;  // Euclidean, meters
};

// Visibility graph over obstacle outline vertices. Immutable after
// construction; path queries add their origin/destination privately and
// never mutate the shared graph, so concurrent queries are safe.
struct VisibilityGraph {
  std::vector<Point2> nodes;
  std::vector<GraphEdge> edges;
  std::vector<std::vector<std::pair<int, double>>> adjacency;

  // Provenance of each node: (obstacle index, vertex index). Used by the
  // inner-vertex offsetting pass.
  std::vector<std::pair<int, int>> node_source;
};

struct PlannedPath {
  std::vector<Point2> waypoints;
  double total_length = 0.0;
  // Graph node index per waypoint, -1 for origin/destination.
  std::vector<int> node_ids;
};

struct UnreachableError : std::runtime_error {
  explicit UnreachableError(const std::string& what) : std::runtime_error(what) {}
};

// True iff the open segment (a, b) stays out of every obstacle interior and
// does not properly cross any boundary segment. Grazing contact at a vertex
// or along an edge counts as visible.
bool segment_clear(Point2 a, Point2 b, std::span<const ObstaclePolygon> obstacles);

// Validates every polygon (throws PolygonError with the offending id) and
// connects all mutually visible outline vertices. Polygon boundary edges are
// always included.
VisibilityGraph build_visibility_graph(std::span<const ObstaclePolygon> obstacles);

// Minimum-Euclidean-length path from origin to destination over the graph
// augmented with the two query points. A* with the straight-line heuristic;
// f-ties broken by lower g, then lower node index. Throws UnreachableError
// when no path exists, PolygonError when an endpoint is inside an obstacle.
PlannedPath plan_path(const VisibilityGraph& graph, Point2 origin, Point2 destination,
                      std::span<const ObstaclePolygon> obstacles);

// Moves every inner waypoint `clearance` meters outward along the exterior
// angle bisector of its source polygon vertex. If the move breaks mutual
// visibility of consecutive waypoints, the offset for that vertex is halved
// until visibility holds. Origin and destination never move.
PlannedPath offset_inner_vertices(const PlannedPath& path, const VisibilityGraph& graph,
                                  std::span<const ObstaclePolygon> obstacles,
                                  double clearance);

}  // namespace sharedspace
