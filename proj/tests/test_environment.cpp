#include <doctest.h>

#include <limits>
#include <queue>
#include <random>
#include <set>

#include "sharedspace/environment.hpp"

using namespace sharedspace;

namespace {

// O(n^2 m) oracle: a pair of vertices is visible iff no obstacle boundary
// segment properly crosses it and no sampled interior point falls inside any
// obstacle. Mirrors the contract, independently of the graph builder.
int brute_force_visible_pairs(const std::vector<ObstaclePolygon>& obstacles) {
  std::vector<Point2> verts;
  for (const auto& o : obstacles)
    for (const auto& v : o.vertices) verts.push_back(v);
  int count = 0;
  for (size_t i = 0; i < verts.size(); ++i) {
    for (size_t j = i + 1; j < verts.size(); ++j) {
      bool visible = distance(verts[i], verts[j]) > 0.0;
      for (const auto& o : obstacles) {
        const size_t n = o.vertices.size();
        for (size_t k = 0; k < n && visible; ++k)
          if (segments_properly_intersect(verts[i], verts[j], o.vertices[k],
                                          o.vertices[(k + 1) % n]))
            visible = false;
        for (int s = 1; s < 64 && visible; ++s) {
          const double t = s / 64.0;
          const Point2 p{verts[i].x + t * (verts[j].x - verts[i].x),
                         verts[i].y + t * (verts[j].y - verts[i].y)};
          if (o.contains_strict(p)) visible = false;
        }
      }
      if (visible) ++count;
    }
  }
  return count;
}

// Plain Dijkstra over the same augmented graph, as the A* cost oracle.
double dijkstra_cost(const VisibilityGraph& graph, Point2 origin, Point2 destination,
                     const std::vector<ObstaclePolygon>& obstacles) {
  const int n = static_cast<int>(graph.nodes.size());
  std::vector<Point2> nodes = graph.nodes;
  nodes.push_back(origin);
  nodes.push_back(destination);
  auto adj = graph.adjacency;
  adj.resize(n + 2);
  for (int i = 0; i < n; ++i) {
    if (segment_clear(origin, nodes[i], obstacles)) {
      const double w = distance(origin, nodes[i]);
      adj[n].emplace_back(i, w);
      adj[i].emplace_back(n, w);
    }
    if (segment_clear(destination, nodes[i], obstacles)) {
      const double w = distance(destination, nodes[i]);
      adj[n + 1].emplace_back(i, w);
      adj[i].emplace_back(n + 1, w);
    }
  }
  if (segment_clear(origin, destination, obstacles)) {
    const double w = distance(origin, destination);
    adj[n].emplace_back(n + 1, w);
    adj[n + 1].emplace_back(n, w);
  }
  std::vector<double> dist(n + 2, std::numeric_limits<double>::infinity());
  dist[n] = 0.0;
  using QE = std::pair<double, int>;
  std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
  pq.push({0.0, n});
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u] + 1e-15) continue;
    for (const auto& [v, w] : adj[u]) {
      if (dist[u] + w < dist[v] - 1e-15) {
        dist[v] = dist[u] + w;
        pq.push({dist[v], v});
      }
    }
  }
  return dist[n + 1];
}

std::vector<ObstaclePolygon> random_obstacle_map(unsigned seed) {
  // Non-overlapping convex polygons placed on a jittered grid.
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> n_poly(1, 6);
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);
  std::uniform_int_distribution<int> n_vert(3, 6);
  std::uniform_real_distribution<double> radius(0.8, 2.2);

  std::vector<ObstaclePolygon> obstacles;
  const int count = n_poly(rng);
  for (int i = 0; i < count; ++i) {
    const double cx = 8.0 * (i % 3) + 6.0 + jitter(rng);
    const double cy = 8.0 * (i / 3) + 6.0 + jitter(rng);
    const int nv = n_vert(rng);
    const double r = radius(rng);
    ObstaclePolygon poly;
    poly.id = "p" + std::to_string(i);
    for (int k = 0; k < nv; ++k) {
      const double a = 2.0 * kPi * k / nv + 0.1 * jitter(rng);
      poly.vertices.push_back({cx + r * std::cos(a), cy + r * std::sin(a)});
    }
    obstacles.push_back(std::move(poly));
  }
  return obstacles;
}

}  // namespace

TEST_CASE("unit square: boundary edges only, no diagonals") {
  std::vector<ObstaclePolygon> obs{{"sq", {{0, 0}, {1, 0}, {1, 1}, {0, 1}}}};
  const VisibilityGraph g = build_visibility_graph(obs);
  CHECK(g.nodes.size() == 4);
  CHECK(g.edges.size() == 4);  // diagonals pass through the interior
}

TEST_CASE("zero obstacles: empty graph") {
  std::vector<ObstaclePolygon> obs;
  const VisibilityGraph g = build_visibility_graph(obs);
  CHECK(g.nodes.empty());
  CHECK(g.edges.empty());
}

TEST_CASE("two unit squares match the brute-force visibility oracle") {
  std::vector<ObstaclePolygon> obs{
      {"a", {{0, 0}, {1, 0}, {1, 1}, {0, 1}}},
      {"b", {{3, 0}, {4, 0}, {4, 1}, {3, 1}}},
  };
  const VisibilityGraph g = build_visibility_graph(obs);
  CHECK(static_cast<int>(g.edges.size()) == brute_force_visible_pairs(obs));
}

TEST_CASE("invalid polygon is rejected with its id") {
  std::vector<ObstaclePolygon> obs{{"bad", {{0, 0}, {1, 1}}}};
  CHECK_THROWS_WITH_AS(build_visibility_graph(obs),
                       "obstacle 'bad': needs at least 3 vertices", PolygonError);
}

TEST_CASE("plan_path in free space is a single segment") {
  std::vector<ObstaclePolygon> obs;
  const VisibilityGraph g = build_visibility_graph(obs);
  const PlannedPath p = plan_path(g, {0, 0}, {10, 0}, obs);
  CHECK(p.waypoints.size() == 2);
  CHECK(p.total_length == doctest::Approx(10.0));
}

TEST_CASE("plan_path routes around a blocking square, cost equals Dijkstra") {
  std::vector<ObstaclePolygon> obs{{"sq", {{4, -1}, {6, -1}, {6, 1}, {4, 1}}}};
  const VisibilityGraph g = build_visibility_graph(obs);
  const PlannedPath p = plan_path(g, {0, 0}, {10, 0}, obs);
  CHECK(p.waypoints.size() > 2);
  CHECK(p.total_length > 10.0);
  CHECK(p.total_length == doctest::Approx(dijkstra_cost(g, {0, 0}, {10, 0}, obs)));
}

TEST_CASE("destination inside an obstacle is unreachable") {
  std::vector<ObstaclePolygon> obs{{"sq", {{4, -1}, {6, -1}, {6, 1}, {4, 1}}}};
  const VisibilityGraph g = build_visibility_graph(obs);
  CHECK_THROWS_AS(plan_path(g, {0, 0}, {5, 0}, obs), PolygonError);
}

TEST_CASE("no route exists: explicit unreachable error") {
  // A closed box around the destination.
  std::vector<ObstaclePolygon> obs{
      {"w1", {{2, 2}, {8, 2}, {8, 3}, {2, 3}}},
      {"w2", {{2, 7}, {8, 7}, {8, 8}, {2, 8}}},
      {"w3", {{2, 3}, {3, 3}, {3, 7}, {2, 7}}},
      {"w4", {{7, 3}, {8, 3}, {8, 7}, {7, 7}}},
  };
  const VisibilityGraph g = build_visibility_graph(obs);
  CHECK_THROWS_AS(plan_path(g, {0, 0}, {5, 5}, obs), UnreachableError);
}

TEST_CASE("A* equals Dijkstra and stays collision-free on random maps") {
  for (unsigned seed = 0; seed < 25; ++seed) {
    const auto obs = random_obstacle_map(seed);
    const VisibilityGraph g = build_visibility_graph(obs);
    const Point2 origin{0.5, 0.5}, dest{22.0, 14.0};
    const PlannedPath p = plan_path(g, origin, dest, obs);
    const double oracle = dijkstra_cost(g, origin, dest, obs);
    CHECK(p.total_length == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(p.total_length >= distance(origin, dest) - 1e-9);

    for (size_t i = 1; i < p.waypoints.size(); ++i) {
      for (int s = 1; s < 100; ++s) {
        const double t = s / 100.0;
        const Point2 q{p.waypoints[i - 1].x + t * (p.waypoints[i].x - p.waypoints[i - 1].x),
                       p.waypoints[i - 1].y + t * (p.waypoints[i].y - p.waypoints[i - 1].y)};
        for (const auto& o : obs) CHECK_FALSE(o.contains_strict(q));
      }
    }
  }
}

TEST_CASE("every visibility edge stays outside obstacle interiors") {
  const auto obs = random_obstacle_map(7);
  const VisibilityGraph g = build_visibility_graph(obs);
  for (const GraphEdge& e : g.edges) {
    for (int s = 1; s < 100; ++s) {
      const double t = s / 100.0;
      const Point2 q{g.nodes[e.a].x + t * (g.nodes[e.b].x - g.nodes[e.a].x),
                     g.nodes[e.a].y + t * (g.nodes[e.b].y - g.nodes[e.a].y)};
      for (const auto& o : obs) CHECK_FALSE(o.contains_strict(q));
    }
  }
}

TEST_CASE("offset: clearance zero is the identity") {
  std::vector<ObstaclePolygon> obs{{"sq", {{4, -1}, {6, -1}, {6, 1}, {4, 1}}}};
  const VisibilityGraph g = build_visibility_graph(obs);
  const PlannedPath p = plan_path(g, {0, 0}, {10, 0}, obs);
  const PlannedPath q = offset_inner_vertices(p, g, obs, 0.0);
  REQUIRE(q.waypoints.size() == p.waypoints.size());
  for (size_t i = 0; i < p.waypoints.size(); ++i)
    CHECK(distance(p.waypoints[i], q.waypoints[i]) == doctest::Approx(0.0));
}

TEST_CASE("offset: corner vertex lands at the requested clearance") {
  std::vector<ObstaclePolygon> obs{{"sq", {{4, -1}, {6, -1}, {6, 1}, {4, 1}}}};
  const VisibilityGraph g = build_visibility_graph(obs);
  const PlannedPath p = plan_path(g, {0, 0}, {10, 0}, obs);
  REQUIRE(p.waypoints.size() > 2);
  const PlannedPath q = offset_inner_vertices(p, g, obs, 0.5);
  CHECK(distance(q.waypoints.front(), p.waypoints.front()) == doctest::Approx(0.0));
  CHECK(distance(q.waypoints.back(), p.waypoints.back()) == doctest::Approx(0.0));
  for (size_t i = 1; i + 1 < q.waypoints.size(); ++i) {
    // Point-to-polygon oracle: the moved corner must sit `clearance` away.
    CHECK(min_obstacle_distance(q.waypoints[i], obs) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(segment_clear(q.waypoints[i - 1], q.waypoints[i], obs));
    CHECK(segment_clear(q.waypoints[i], q.waypoints[i + 1], obs));
  }
}

TEST_CASE("offset: path without inner vertices is unchanged") {
  std::vector<ObstaclePolygon> obs;
  const VisibilityGraph g = build_visibility_graph(obs);
  const PlannedPath p = plan_path(g, {0, 0}, {10, 0}, obs);
  const PlannedPath q = offset_inner_vertices(p, g, obs, 0.5);
  CHECK(q.waypoints.size() == 2);
  CHECK(q.total_length == doctest::Approx(10.0));
}

TEST_CASE("offset keeps at least the clearance on random maps") {
  for (unsigned seed = 30; seed < 40; ++seed) {
    const auto obs = random_obstacle_map(seed);
    const VisibilityGraph g = build_visibility_graph(obs);
    const PlannedPath p = plan_path(g, {0.5, 0.5}, {22.0, 14.0}, obs);
    const double clearance = 0.4;
    const PlannedPath q = offset_inner_vertices(p, g, obs, clearance);
    for (size_t i = 1; i + 1 < q.waypoints.size(); ++i)
      CHECK(min_obstacle_distance(q.waypoints[i], obs) >= clearance - 1e-9);
  }
}

TEST_CASE("total length matches the waypoint chain") {
  std::vector<ObstaclePolygon> obs{{"sq", {{4, -1}, {6, -1}, {6, 1}, {4, 1}}}};
  const VisibilityGraph g = build_visibility_graph(obs);
  const PlannedPath p = plan_path(g, {0, 0}, {10, 0}, obs);
  double len = 0.0;
  for (size_t i = 1; i < p.waypoints.size(); ++i)
    len += distance(p.waypoints[i - 1], p.waypoints[i]);
  CHECK(p.total_length == doctest::Approx(len).epsilon(1e-9));
}
