#pragma once

#include <optional>
#include <span>
#include <variant>

#include "sharedspace/road_user.hpp"

namespace sharedspace {

// Relaxation toward the desired velocity: (v* - v) / tau, with v* pointing
// at `target` with magnitude `desired_speed`.
Vec2 driving_force(const RoadUser& user, Point2 target, double desired_speed);
Vec2 driving_force(const RoadUser& user);

// 1 when beta_position falls inside alpha's field of view (angle from the
// heading <= fov_half_angle, boundary inclusive), else 0. A user that never
// moved treats everything as visible.
double fov_factor(const RoadUser& alpha, Point2 beta_position);

// Exponential repulsion between road users, gated by the field of view and
// by kind: pedestrians are repelled by everyone, cars only by other cars.
// Zero while alpha is following or showing courtesy toward beta. Coincident
// positions fall back to +x at full strength.
Vec2 user_repulsion(const RoadUser& alpha, const RoadUser& beta, const ForceParams& params);

// Exponential repulsion from a static obstacle, directed from the nearest
// boundary point toward alpha. Throws PolygonError if alpha is inside.
Vec2 obstacle_repulsion(const RoadUser& alpha, const ObstaclePolygon& obstacle,
                        const ForceParams& params);

// Car-following directive: keep steering toward a point d_alpha ahead along
// the leader's movement direction while the gap allows, otherwise halve the
// speed to restore it.
struct SteerToward {
  Point2 target;
};
struct SlowDown {
  double target_speed;
};
using FollowOutcome = std::variant<SteerToward, SlowDown>;

FollowOutcome car_following_force(const RoadUser& follower, const RoadUser& leader,
                                  const ForceParams& params);

// Halving brake shared by courtesy and reactive stopping: half the current
// speed, snapping to zero once below stop_epsilon.
double courtesy_or_stopping_brake(double current_speed, double stop_epsilon);
double courtesy_or_stopping_brake(const RoadUser& user, const ForceParams& params);

// What a game action means for the executing layer.
struct ActionDirectives {
  std::optional<double> desired_speed;   // overrides the free-flow target speed
  std::optional<Point2> steer_target;    // overrides the waypoint target
  bool halving_brake = false;            // halve speed per cycle until stopped
};

struct ActionError : std::runtime_error {
  explicit ActionError(const std::string& what) : std::runtime_error(what) {}
};

// Resolves a game action into directives. Deviate is pedestrian-only and
// needs the counterpart; the intermediate goal is the point behind the car,
// x_beta - 0.5 v_beta while it moves, x_beta - v_beta_at_stop once stopped.
ActionDirectives execute_action(const RoadUser& user, GameAction action,
                                const RoadUser* counterpart,
                                std::optional<Vec2> counterpart_velocity_at_stop = {},
                                double stop_epsilon = 0.05);

struct IntegrationError : std::runtime_error {
  explicit IntegrationError(const std::string& what) : std::runtime_error(what) {}
};

// One semi-implicit Euler step: v <- clamp(v + a dt, max_speed), x <- x + v dt.
// Heading follows the velocity once above stop_epsilon; cars turn at most
// `car_turn_rate_deg` per second. Advances the waypoint within 0.3 m.
// Throws IntegrationError on non-finite input.
RoadUser integrate_step(const RoadUser& user, Vec2 net_accel, double dt,
                        double stop_epsilon = 0.05, double car_turn_rate_deg = 30.0);

constexpr double kWaypointArrivalRadius = 0.3;  // m

}  // namespace sharedspace
