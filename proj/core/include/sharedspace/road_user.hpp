#pragma once

#include <optional>
#include <string>

#include "sharedspace/environment.hpp"
#include "sharedspace/geometry.hpp"

namespace sharedspace {

enum class UserKind { pedestrian, car };

inline const char* to_string(UserKind k) {
  return k == UserKind::pedestrian ? "pedestrian" : "car";
}

enum class GameAction { Continue, Decelerate, Deviate };

inline const char* to_string(GameAction a) {
  switch (a) {
    case GameAction::Continue: return "Continue";
    case GameAction::Decelerate: return "Decelerate";
    case GameAction::Deviate: return "Deviate";
  }
  return "?";
}

enum class MotionMode { free_flow, stopping, following, courtesy, game_bound };

inline const char* to_string(MotionMode m) {
  switch (m) {
    case MotionMode::free_flow: return "free_flow";
    case MotionMode::stopping: return "stopping";
    case MotionMode::following: return "following";
    case MotionMode::courtesy: return "courtesy";
    case MotionMode::game_bound: return "game_bound";
  }
  return "?";
}

// Behavioral mode plus the data the executing layer needs. `counterpart` is
// the leader for following, the yielded-to user for stopping/courtesy, and
// the conflict counterpart a game decision is bound to.
struct ModeState {
  MotionMode mode = MotionMode::free_flow;
  std::string counterpart;
  GameAction action = GameAction::Continue;   // meaningful in game_bound only
  std::optional<Point2> deviate_target;       // locked at dispatch for Deviate
  std::optional<double> locked_speed;         // locked at dispatch for Continue (car)
  bool deviate_done = false;
};

struct RoadUser {
  std::string id;
  UserKind kind = UserKind::pedestrian;
  Point2 position;
  Vec2 velocity;
  double desired_speed = 1.4;  // free-flow target, m/s
  double max_speed = 2.0;
  Vec2 heading{1.0, 0.0};      // unit; retains last direction when stopped
  double radius = 0.3;
  PlannedPath path;
  size_t next_waypoint_index = 0;
  double fov_half_angle = 90.0;  // degrees; 180-degree field of view
  int give_way_count = 0;        // G, grows by one per completed give-way
  ModeState mode;
  double relaxation_time = 0.5;  // tau, seconds

  bool in_group = false;         // pedestrian group membership (scenario flag)
  bool arrived = false;
  int empty_conflict_streak = 0; // cycles with no conflict, for mode release
  bool yielding_episode = false; // true while a give-way is in progress

  double speed() const { return velocity.norm(); }

  // Current steering target: the deviate point while a Deviate decision is
  // being executed, otherwise the next path waypoint.
  Point2 current_target() const {
    if (mode.mode == MotionMode::game_bound && mode.action == GameAction::Deviate &&
        mode.deviate_target && !mode.deviate_done)
      return *mode.deviate_target;
    if (path.waypoints.empty()) return position;
    const size_t i = std::min(next_waypoint_index, path.waypoints.size() - 1);
    return path.waypoints[i];
  }

  Point2 destination() const {
    return path.waypoints.empty() ? position : path.waypoints.back();
  }
};

struct ForceParams {
  double v0 = 2.1;          // user-user interaction strength, m^2/s^2
  double sigma = 0.3;       // user-user range, m
  double v0_car = 20.0;     // strength when either party is a car
  double sigma_car = 1.5;   // range when either party is a car
  double u0 = 10.0;         // user-obstacle strength, m^2/s^2
  double range = 0.2;       // user-obstacle range R, m
  double d_min_vehicle = 5.0;        // minimum vehicle distance d_alpha, m
  double stop_epsilon = 0.05;        // full-stop threshold, m/s
  double conflict_close_distance = 3.0;  // "very close", m

  bool valid() const {
    return v0 > 0 && sigma > 0 && v0_car > 0 && sigma_car > 0 && u0 > 0 &&
           range > 0 && d_min_vehicle > 0 && stop_epsilon >= 0 &&
           conflict_close_distance > 0;
  }
};

}  // namespace sharedspace
