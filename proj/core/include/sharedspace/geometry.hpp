#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sharedspace {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }

  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  double norm_sq() const { return x * x + y * y; }
  bool finite() const { return std::isfinite(x) && std::isfinite(y); }

  // Unit vector; falls back to +x for the zero vector so callers stay
  // deterministic on degenerate input.
  Vec2 normalized() const {
    const double n = norm();
    if (n <= 0.0) return {1.0, 0.0};
    return {x / n, y / n};
  }

  Vec2 rotated(double radians) const {
    const double c = std::cos(radians), s = std::sin(radians);
    return {c * x - s * y, s * x + c * y};
  }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
  Vec2 operator-(Point2 o) const { return {x - o.x, y - o.y}; }
  Point2 operator+(Vec2 v) const { return {x + v.x, y + v.y}; }
  bool operator==(const Point2&) const = default;
};

inline double distance(Point2 a, Point2 b) { return (a - b).norm(); }

constexpr double kPi = 3.141592653589793238462643383279502884;

inline double deg_to_rad(double d) { return d * kPi / 180.0; }
inline double rad_to_deg(double r) { return r * 180.0 / kPi; }

// Full-circle angle from `from` to `to` in degrees, in [0, 360).
double angle_deg(Vec2 from, Vec2 to);

// Absolute angle between two vectors in degrees, in [0, 180].
double angle_between_deg(Vec2 a, Vec2 b);

// Orientation of the triple (a, b, c): >0 counter-clockwise, <0 clockwise,
// 0 collinear (with a small tolerance).
int orientation(Point2 a, Point2 b, Point2 c);

bool point_on_segment(Point2 p, Point2 a, Point2 b, double eps = 1e-12);

// True iff segments (p1,p2) and (q1,q2) cross at a point interior to both.
// Shared endpoints and touches at an endpoint do not count.
bool segments_properly_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2);

// True iff the segments intersect at all, including endpoint touches and
// collinear overlap.
bool segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2);

double point_segment_distance(Point2 p, Point2 a, Point2 b);
Point2 closest_point_on_segment(Point2 p, Point2 a, Point2 b);

// Parametric intersection of the ray origin+t*dir (t >= 0) with segment
// (a, b). Returns t, or a negative value when there is no hit.
double ray_segment_intersection(Point2 origin, Vec2 dir, Point2 a, Point2 b);

struct PolygonError : std::runtime_error {
  explicit PolygonError(const std::string& what) : std::runtime_error(what) {}
};

// Closed simple polygon given by its boundary vertices (no repeated closing
// vertex). Vertex order may be either winding.
struct ObstaclePolygon {
  std::string id;
  std::vector<Point2> vertices;

  // Throws PolygonError naming `id` if the polygon has fewer than three
  // vertices, self-intersects, or has zero area.
  void validate() const;

  double signed_area() const;
  bool contains_strict(Point2 p) const;        // interior only
  bool on_boundary(Point2 p, double eps = 1e-9) const;
  double boundary_distance(Point2 p) const;    // 0 on or inside boundary ring
  Point2 nearest_boundary_point(Point2 p) const;
};

double min_obstacle_distance(Point2 p, std::span<const ObstaclePolygon> obstacles);

}  // namespace sharedspace
