#include "sharedspace/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace sharedspace {

Vec2 driving_force(const RoadUser& user, Point2 target, double desired_speed) {
  const Vec2 to_target = target - user.position;
  const Vec2 desired_velocity = to_target.norm() > 1e-12
                                    ? to_target.normalized() * desired_speed
                                    : Vec2{0.0, 0.0};
  return (desired_velocity - user.velocity) / user.relaxation_time;
}

Vec2 driving_force(const RoadUser& user) {
  return driving_force(user, user.current_target(), user.desired_speed);
}

double fov_factor(const RoadUser& alpha, Point2 beta_position) {
  Vec2 look = alpha.heading;
  if (look.norm() < 1e-12) {
    if (alpha.velocity.norm() > 1e-12)
      look = alpha.velocity;
    else
      return 1.0;  // never moved: everything is visible
  }
  const Vec2 to_beta = beta_position - alpha.position;
  if (to_beta.norm() < 1e-12) return 1.0;
  return angle_between_deg(look, to_beta) <= alpha.fov_half_angle + 1e-9 ? 1.0 : 0.0;
}

Vec2 user_repulsion(const RoadUser& alpha, const RoadUser& beta, const ForceParams& params) {
  if (alpha.kind == UserKind::car && beta.kind != UserKind::car) return {0.0, 0.0};
  if ((alpha.mode.mode == MotionMode::following || alpha.mode.mode == MotionMode::courtesy) &&
      alpha.mode.counterpart == beta.id)
    return {0.0, 0.0};

  const double f = fov_factor(alpha, beta.position);
  if (f == 0.0) return {0.0, 0.0};

  const bool car_pair = alpha.kind == UserKind::car || beta.kind == UserKind::car;
  const double strength = car_pair ? params.v0_car : params.v0;
  const double range = car_pair ? params.sigma_car : params.sigma;

  const Vec2 away = alpha.position - beta.position;
  const double d = away.norm();
  const Vec2 n = d > 1e-12 ? away / d : Vec2{1.0, 0.0};
  return n * (strength * std::exp(-d / range) * f);
}

Vec2 obstacle_repulsion(const RoadUser& alpha, const ObstaclePolygon& obstacle,
                        const ForceParams& params) {
  if (obstacle.contains_strict(alpha.position))
    throw PolygonError("road user '" + alpha.id + "' is inside obstacle '" +
                       obstacle.id + "'");
  const Point2 nearest = obstacle.nearest_boundary_point(alpha.position);
  const Vec2 away = alpha.position - nearest;
  const double d = away.norm();
  const Vec2 n = d > 1e-12 ? away / d : Vec2{1.0, 0.0};
  return n * (params.u0 * std::exp(-d / params.range));
}

FollowOutcome car_following_force(const RoadUser& follower, const RoadUser& leader,
                                  const ForceParams& params) {
  const double gap = distance(follower.position, leader.position);
  if (gap >= params.d_min_vehicle) {
    const Vec2 leader_dir =
        leader.velocity.norm() > 1e-12 ? leader.velocity.normalized() : leader.heading;
    return SteerToward{follower.position + leader_dir * params.d_min_vehicle};
  }
  return SlowDown{follower.speed() / 2.0};
}

double courtesy_or_stopping_brake(double current_speed, double stop_epsilon) {
  const double half = current_speed / 2.0;
  return half < stop_epsilon ? 0.0 : half;
}

double courtesy_or_stopping_brake(const RoadUser& user, const ForceParams& params) {
  return courtesy_or_stopping_brake(user.speed(), params.stop_epsilon);
}

ActionDirectives execute_action(const RoadUser& user, GameAction action,
                                const RoadUser* counterpart,
                                std::optional<Vec2> counterpart_velocity_at_stop,
                                double stop_epsilon) {
  ActionDirectives d;
  switch (action) {
    case GameAction::Continue:
      d.desired_speed = user.kind == UserKind::car ? user.speed() : user.max_speed;
      return d;
    case GameAction::Decelerate:
      d.halving_brake = true;
      return d;
    case GameAction::Deviate: {
      if (user.kind != UserKind::pedestrian)
        throw ActionError("Deviate is a pedestrian-only action");
      if (counterpart == nullptr)
        throw ActionError("Deviate needs a counterpart");
      const bool moving = counterpart->speed() > stop_epsilon;
      const Vec2 v = moving ? counterpart->velocity
                            : counterpart_velocity_at_stop.value_or(
                                  counterpart->heading * counterpart->speed());
      const Vec2 back = moving ? v * 0.5 : v;
      d.steer_target = Point2{counterpart->position.x - back.x,
                              counterpart->position.y - back.y};
      return d;
    }
  }
  return d;
}

RoadUser integrate_step(const RoadUser& user, Vec2 net_accel, double dt,
                        double stop_epsilon, double car_turn_rate_deg) {
  if (!net_accel.finite() || !user.position.finite() || !user.velocity.finite() ||
      !std::isfinite(dt))
    throw IntegrationError("non-finite state while stepping user '" + user.id + "'");

  RoadUser next = user;
  Vec2 v = user.velocity + net_accel * dt;

  // Non-holonomic proxy: cars cannot swing their velocity direction faster
  // than the turn-rate cap.
  if (user.kind == UserKind::car && user.velocity.norm() > stop_epsilon &&
      v.norm() > 1e-12) {
    const double max_turn = deg_to_rad(car_turn_rate_deg) * dt;
    const double turn = std::atan2(user.velocity.cross(v), user.velocity.dot(v));
    if (std::abs(turn) > max_turn) {
      const double clamped = std::copysign(max_turn, turn);
      v = user.velocity.normalized().rotated(clamped) * v.norm();
    }
  }

  const double speed = v.norm();
  if (speed > user.max_speed) v = v * (user.max_speed / speed);

  next.velocity = v;
  next.position = user.position + v * dt;
  if (v.norm() > stop_epsilon) next.heading = v.normalized();

  if (!next.path.waypoints.empty() && next.next_waypoint_index < next.path.waypoints.size()) {
    const Point2 wp = next.path.waypoints[next.next_waypoint_index];
    const bool last = next.next_waypoint_index + 1 == next.path.waypoints.size();
    if (!last && distance(next.position, wp) <= kWaypointArrivalRadius)
      ++next.next_waypoint_index;
  }
  return next;
}

}  // namespace sharedspace
