#include "sharedspace/geometry.hpp"

#include <algorithm>
#include <limits>

namespace sharedspace {

double angle_deg(Vec2 from, Vec2 to) {
  const double a = std::atan2(from.cross(to), from.dot(to));
  double d = rad_to_deg(a);
  if (d < 0.0) d += 360.0;
  if (d >= 360.0) d -= 360.0;
  return d;
}

double angle_between_deg(Vec2 a, Vec2 b) {
  const double d = angle_deg(a, b);
  return d > 180.0 ? 360.0 - d : d;
}

int orientation(Point2 a, Point2 b, Point2 c) {
  const double v = (b - a).cross(c - a);
  const double scale = std::max({std::abs(a.x), std::abs(a.y), std::abs(b.x),
                                 std::abs(b.y), std::abs(c.x), std::abs(c.y), 1.0});
  const double eps = 1e-12 * scale * scale;
  if (v > eps) return 1;
  if (v < -eps) return -1;
  return 0;
}

bool point_on_segment(Point2 p, Point2 a, Point2 b, double eps) {
  if (orientation(a, b, p) != 0) return false;
  return p.x >= std::min(a.x, b.x) - eps && p.x <= std::max(a.x, b.x) + eps &&
         p.y >= std::min(a.y, b.y) - eps && p.y <= std::max(a.y, b.y) + eps;
}

bool segments_properly_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  return o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

bool segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && point_on_segment(q1, p1, p2)) return true;
  if (o2 == 0 && point_on_segment(q2, p1, p2)) return true;
  if (o3 == 0 && point_on_segment(p1, q1, q2)) return true;
  if (o4 == 0 && point_on_segment(p2, q1, q2)) return true;
  return false;
}

Point2 closest_point_on_segment(Point2 p, Point2 a, Point2 b) {
  const Vec2 ab = b - a;
  const double len_sq = ab.norm_sq();
  if (len_sq <= 0.0) return a;
  double t = (p - a).dot(ab) / len_sq;
  t = std::clamp(t, 0.0, 1.0);
  return a + ab * t;
}

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  return distance(p, closest_point_on_segment(p, a, b));
}

double ray_segment_intersection(Point2 origin, Vec2 dir, Point2 a, Point2 b) {
  const Vec2 seg = b - a;
  const double denom = dir.cross(seg);
  if (std::abs(denom) < 1e-15) return -1.0;
  const Vec2 diff = a - origin;
  const double t = diff.cross(seg) / denom;   // along the ray
  const double u = diff.cross(dir) / denom;   // along the segment
  if (t < 0.0 || u < -1e-12 || u > 1.0 + 1e-12) return -1.0;
  return t;
}

void ObstaclePolygon::validate() const {
  if (vertices.size() < 3)
    throw PolygonError("obstacle '" + id + "': needs at least 3 vertices");
  for (const Point2& v : vertices)
    if (!v.finite())
      throw PolygonError("obstacle '" + id + "': non-finite vertex");
  if (std::abs(signed_area()) < 1e-12)
    throw PolygonError("obstacle '" + id + "': zero area");

  const size_t n = vertices.size();
  for (size_t i = 0; i < n; ++i) {
    const Point2 a1 = vertices[i], a2 = vertices[(i + 1) % n];
    if (distance(a1, a2) < 1e-12)
      throw PolygonError("obstacle '" + id + "': repeated vertex");
    for (size_t j = i + 1; j < n; ++j) {
      // Adjacent edges share a vertex; only non-adjacent pairs may not touch.
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      const Point2 b1 = vertices[j], b2 = vertices[(j + 1) % n];
      if (adjacent) {
        if (segments_properly_intersect(a1, a2, b1, b2))
          throw PolygonError("obstacle '" + id + "': self-intersection");
      } else if (segments_intersect(a1, a2, b1, b2)) {
        throw PolygonError("obstacle '" + id + "': self-intersection");
      }
    }
  }
}

double ObstaclePolygon::signed_area() const {
  double s = 0.0;
  const size_t n = vertices.size();
  for (size_t i = 0; i < n; ++i) {
    const Point2 a = vertices[i], b = vertices[(i + 1) % n];
    s += a.x * b.y - b.x * a.y;
  }
  return 0.5 * s;
}

bool ObstaclePolygon::contains_strict(Point2 p) const {
  if (on_boundary(p)) return false;
  // Crossing-number test.
  bool inside = false;
  const size_t n = vertices.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2 a = vertices[i], b = vertices[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double xint = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
      if (p.x < xint) inside = !inside;
    }
  }
  return inside;
}

bool ObstaclePolygon::on_boundary(Point2 p, double eps) const {
  const size_t n = vertices.size();
  for (size_t i = 0; i < n; ++i)
    if (point_segment_distance(p, vertices[i], vertices[(i + 1) % n]) <= eps)
      return true;
  return false;
}

double ObstaclePolygon::boundary_distance(Point2 p) const {
  double best = std::numeric_limits<double>::infinity();
  const size_t n = vertices.size();
  for (size_t i = 0; i < n; ++i)
    best = std::min(best, point_segment_distance(p, vertices[i], vertices[(i + 1) % n]));
  return best;
}

Point2 ObstaclePolygon::nearest_boundary_point(Point2 p) const {
  double best = std::numeric_limits<double>::infinity();
  Point2 q = vertices.front();
  const size_t n = vertices.size();
  for (size_t i = 0; i < n; ++i) {
    const Point2 c = closest_point_on_segment(p, vertices[i], vertices[(i + 1) % n]);
    const double d = distance(p, c);
    if (d < best) {
      best = d;
      q = c;
    }
  }
  return q;
}

double min_obstacle_distance(Point2 p, std::span<const ObstaclePolygon> obstacles) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& obs : obstacles) best = std::min(best, obs.boundary_distance(p));
  return best;
}

}  // namespace sharedspace
