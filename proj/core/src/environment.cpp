#include "sharedspace/environment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

namespace sharedspace {

namespace {

double path_length(const std::vector<Point2>& pts) {
  double len = 0.0;
  for (size_t i = 1; i < pts.size(); ++i) len += distance(pts[i - 1], pts[i]);
  return len;
}

}  // namespace

bool segment_clear(Point2 a, Point2 b, std::span<const ObstaclePolygon> obstacles) {
  for (const auto& obs : obstacles) {
    const size_t n = obs.vertices.size();
    for (size_t i = 0; i < n; ++i) {
      if (segments_properly_intersect(a, b, obs.vertices[i], obs.vertices[(i + 1) % n]))
        return false;
    }
    // Proper crossings are ruled out; the segment can still run through the
    // interior between grazed vertices. Sample interior points.
    const Point2 mid{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
    if (obs.contains_strict(mid)) return false;
    for (int k = 1; k < 8; ++k) {
      const double t = k / 8.0;
      const Point2 p{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
      if (obs.contains_strict(p)) return false;
    }
  }
  return true;
}

VisibilityGraph build_visibility_graph(std::span<const ObstaclePolygon> obstacles) {
  VisibilityGraph g;
  for (size_t oi = 0; oi < obstacles.size(); ++oi) {
    obstacles[oi].validate();
    for (size_t vi = 0; vi < obstacles[oi].vertices.size(); ++vi) {
      g.nodes.push_back(obstacles[oi].vertices[vi]);
      g.node_source.emplace_back(static_cast<int>(oi), static_cast<int>(vi));
    }
  }

  const int n = static_cast<int>(g.nodes.size());
  g.adjacency.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!segment_clear(g.nodes[i], g.nodes[j], obstacles)) continue;
      const double w = distance(g.nodes[i], g.nodes[j]);
      if (w <= 0.0) continue;
      g.edges.push_back({i, j, w});
      g.adjacency[i].emplace_back(j, w);
      g.adjacency[j].emplace_back(i, w);
    }
  }
  return g;
}

PlannedPath plan_path(const VisibilityGraph& graph, Point2 origin, Point2 destination,
                      std::span<const ObstaclePolygon> obstacles) {
  for (const auto& obs : obstacles) {
    if (obs.contains_strict(origin))
      throw PolygonError("path origin lies inside obstacle '" + obs.id + "'");
    if (obs.contains_strict(destination))
      throw PolygonError("path destination lies inside obstacle '" + obs.id + "'");
  }

  // Augment with the query endpoints; the shared graph is left untouched.
  const int n = static_cast<int>(graph.nodes.size());
  const int src = n, dst = n + 1;
  std::vector<Point2> nodes = graph.nodes;
  nodes.push_back(origin);
  nodes.push_back(destination);
  std::vector<std::vector<std::pair<int, double>>> adj = graph.adjacency;
  adj.resize(n + 2);
  for (int i = 0; i < n; ++i) {
    if (segment_clear(origin, nodes[i], obstacles)) {
      const double w = distance(origin, nodes[i]);
      adj[src].emplace_back(i, w);
      adj[i].emplace_back(src, w);
    }
    if (segment_clear(destination, nodes[i], obstacles)) {
      const double w = distance(destination, nodes[i]);
      adj[dst].emplace_back(i, w);
      adj[i].emplace_back(dst, w);
    }
  }
  if (segment_clear(origin, destination, obstacles)) {
    const double w = distance(origin, destination);
    adj[src].emplace_back(dst, w);
    adj[dst].emplace_back(src, w);
  }

  struct QueueEntry {
    double f, g;
    int node;
    bool operator>(const QueueEntry& o) const {
      return std::tie(f, g, node) > std::tie(o.f, o.g, o.node);
    }
  };

  const auto heuristic = [&](int i) { return distance(nodes[i], destination); };
  std::vector<double> g_cost(n + 2, std::numeric_limits<double>::infinity());
  std::vector<int> parent(n + 2, -1);
  std::vector<char> closed(n + 2, 0);
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> open;
  g_cost[src] = 0.0;
  open.push({heuristic(src), 0.0, src});

  while (!open.empty()) {
    const QueueEntry cur = open.top();
    open.pop();
    if (closed[cur.node]) continue;
    closed[cur.node] = 1;
    if (cur.node == dst) break;
    for (const auto& [nb, w] : adj[cur.node]) {
      if (closed[nb]) continue;
      const double cand = g_cost[cur.node] + w;
      if (cand < g_cost[nb] - 1e-15) {
        g_cost[nb] = cand;
        parent[nb] = cur.node;
        open.push({cand + heuristic(nb), cand, nb});
      }
    }
  }

  if (!closed[dst])
    throw UnreachableError("no path from origin to destination");

  std::vector<int> chain;
  for (int v = dst; v != -1; v = parent[v]) chain.push_back(v);
  std::reverse(chain.begin(), chain.end());

  PlannedPath path;
  for (int v : chain) {
    path.waypoints.push_back(nodes[v]);
    path.node_ids.push_back(v < n ? v : -1);
  }
  path.total_length = path_length(path.waypoints);
  return path;
}

namespace {

// Exterior angle bisector at vertex `vi` of the polygon: opposite of the
// normalized sum of the two edge directions leaving the corner. A straight
// corner degenerates to the outward edge normal.
Vec2 exterior_bisector(const ObstaclePolygon& obs, int vi, double probe) {
  const auto& poly = obs.vertices;
  const int nv = static_cast<int>(poly.size());
  const Point2 v = poly[vi];
  const Vec2 u1 = (poly[(vi + nv - 1) % nv] - v).normalized();
  const Vec2 u2 = (poly[(vi + 1) % nv] - v).normalized();
  const Vec2 interior = u1 + u2;
  Vec2 dir;
  if (interior.norm() < 1e-9) {
    const Vec2 edge = u2;
    dir = {edge.y, -edge.x};
  } else {
    dir = -interior.normalized();
  }
  if (obs.contains_strict(v + dir * probe)) dir = -dir;
  return dir;
}

}  // namespace

PlannedPath offset_inner_vertices(const PlannedPath& path, const VisibilityGraph& graph,
                                  std::span<const ObstaclePolygon> obstacles,
                                  double clearance) {
  if (clearance <= 0.0 || path.waypoints.size() < 3) return path;

  const size_t m = path.waypoints.size();
  std::vector<Vec2> dirs(m, Vec2{});
  std::vector<double> steps(m, 0.0);
  for (size_t i = 1; i + 1 < m; ++i) {
    const int node = i < path.node_ids.size() ? path.node_ids[i] : -1;
    if (node < 0 || node >= static_cast<int>(graph.node_source.size())) continue;
    const auto [oi, vi] = graph.node_source[node];
    dirs[i] = exterior_bisector(obstacles[oi], vi, std::min(clearance, 1e-3));
    steps[i] = clearance;
  }

  const auto place = [&](size_t i) { return path.waypoints[i] + dirs[i] * steps[i]; };
  const auto vertex_ok = [&](Point2 p) {
    return std::none_of(obstacles.begin(), obstacles.end(),
                        [&](const ObstaclePolygon& o) { return o.contains_strict(p); });
  };

  PlannedPath out = path;
  for (size_t i = 1; i + 1 < m; ++i) {
    while (steps[i] > 0.0 && !vertex_ok(place(i))) steps[i] *= 0.5;
    out.waypoints[i] = place(i);
  }

  // Repair pass: shrink the offsets of any vertex whose incident path
  // segments became blocked, by bisection. Terminates because step -> 0
  // restores the original (visible) chain.
  for (int round = 0; round < 60; ++round) {
    bool broken = false;
    for (size_t i = 1; i < m; ++i) {
      if (segment_clear(out.waypoints[i - 1], out.waypoints[i], obstacles)) continue;
      broken = true;
      for (size_t k : {i - 1, i}) {
        if (k == 0 || k + 1 == m || steps[k] <= 0.0) continue;
        steps[k] *= 0.5;
        if (steps[k] < 1e-9 * clearance) steps[k] = 0.0;
        out.waypoints[k] = place(k);
      }
    }
    if (!broken) break;
  }

  double len = 0.0;
  for (size_t i = 1; i < out.waypoints.size(); ++i)
    len += distance(out.waypoints[i - 1], out.waypoints[i]);
  out.total_length = len;
  return out;
}

}  // namespace sharedspace
