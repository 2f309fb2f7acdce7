#include "sharedspace/interaction.hpp"

#include <algorithm>
#include <cmath>

#include "sharedspace/dynamics.hpp"

namespace sharedspace {

namespace {

bool in_band(double theta, double lo_max, double hi_min) {
  // [0, lo_max] or [hi_min, 360): the forward cone around 0 degrees.
  return theta <= lo_max || theta >= hi_min;
}

bool in_open_band(double theta, double lo, double hi) { return theta > lo && theta < hi; }

Vec2 movement_direction(const RoadUser& u) {
  if (u.velocity.norm() > 1e-12) return u.velocity.normalized();
  return u.heading;
}

// Does beta's constant-velocity path cross alpha's heading ray within
// `reach` meters ahead of alpha?
bool crosses_heading_ray(const RoadUser& alpha, const RoadUser& beta, double reach,
                         double horizon) {
  if (beta.velocity.norm() < 1e-12) return false;
  const Point2 b0 = beta.position;
  const Point2 b1 = beta.position + beta.velocity * horizon;
  const double t = ray_segment_intersection(alpha.position, alpha.heading, b0, b1);
  return t >= 0.0 && t <= reach;
}

}  // namespace

std::vector<Conflict> detect_conflicts(std::span<const RoadUser> users, double horizon,
                                       double conflict_distance) {
  std::vector<Conflict> result;
  for (const RoadUser& alpha : users) {
    if (alpha.arrived) continue;
    for (const RoadUser& beta : users) {
      if (&alpha == &beta || beta.arrived) continue;
      if (fov_factor(alpha, beta.position) == 0.0) continue;

      const Vec2 rel_pos = beta.position - alpha.position;
      const Vec2 rel_vel = beta.velocity - alpha.velocity;
      const double vv = rel_vel.norm_sq();
      double t_star = 0.0;
      if (vv > 1e-15) t_star = std::clamp(-rel_pos.dot(rel_vel) / vv, 0.0, horizon);
      const double min_dist = (rel_pos + rel_vel * t_star).norm();
      if (min_dist >= conflict_distance + alpha.radius + beta.radius) continue;

      const Vec2 n = rel_pos.normalized();
      Conflict c;
      c.first = alpha.id;
      c.second = beta.id;
      c.distance = rel_pos.norm();
      c.theta_alpha = angle_deg(movement_direction(alpha), n);
      c.theta_beta = angle_deg(movement_direction(beta), n);
      c.time_to_closest_approach = t_star;
      c.min_predicted_distance = min_dist;
      result.push_back(std::move(c));
    }
  }
  return result;
}

InteractionClass classify(const Conflict& conflict, const RoadUser& alpha,
                          const RoadUser& beta, const ClassifierConfig& config) {
  const double ta = conflict.theta_alpha;
  const double tb = conflict.theta_beta;

  if (alpha.kind == UserKind::car && beta.kind == UserKind::pedestrian &&
      in_band(ta, 15.0, 345.0)) {
    const bool moving_in_front =
        crosses_heading_ray(alpha, beta, config.conflict_close_distance, config.horizon);
    const bool very_close = conflict.distance < config.conflict_close_distance;
    if (moving_in_front || very_close) return InteractionClass::ReactiveStopping;
  }

  if (alpha.kind == UserKind::car && beta.kind == UserKind::car &&
      in_band(ta, 10.0, 350.0) && in_band(tb, 5.0, 355.0))
    return InteractionClass::CarFollowing;

  const bool courtesy_allowed =
      alpha.kind == UserKind::car &&
      (beta.kind == UserKind::pedestrian ? config.courtesy_to_pedestrians
                                         : config.courtesy_to_cars);
  if (courtesy_allowed && in_band(ta, 20.0, 340.0) &&
      (in_open_band(tb, 70.0, 100.0) || in_open_band(tb, 260.0, 290.0)))
    return InteractionClass::Courtesy;

  if (conflict.min_predicted_distance <
      config.conflict_distance + alpha.radius + beta.radius)
    return InteractionClass::ComplexGame;
  return InteractionClass::None;
}

std::optional<Conflict> nearest_conflict(const RoadUser& user,
                                         std::span<const Conflict> conflicts) {
  const Conflict* best = nullptr;
  for (const Conflict& c : conflicts) {
    if (c.first != user.id) continue;
    if (best == nullptr ||
        std::tie(c.distance, c.time_to_closest_approach, c.second) <
            std::tie(best->distance, best->time_to_closest_approach, best->second))
      best = &c;
  }
  if (best == nullptr) return std::nullopt;
  return *best;
}

int count_active_interactions(const RoadUser& user, std::span<const Conflict> conflicts) {
  int n = 0;
  for (const Conflict& c : conflicts)
    if (c.first == user.id) ++n;
  return n;
}

}  // namespace sharedspace
