#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sharedspace/road_user.hpp"

namespace sharedspace {

// A detected approach-risk pair. Angles are measured from each user's
// movement direction to the unit vector pointing from alpha toward beta,
// full-circle in [0, 360).
struct Conflict {
  std::string first;   // alpha, the observing user
  std::string second;  // beta
  double distance = 0.0;                // current center distance, m
  double theta_alpha = 0.0;             // deg
  double theta_beta = 0.0;              // deg
  double time_to_closest_approach = 0.0;  // s, under constant velocity
  double min_predicted_distance = 0.0;    // m, over the horizon
};

enum class InteractionClass { ReactiveStopping, CarFollowing, Courtesy, ComplexGame, None };

inline const char* to_string(InteractionClass c) {
  switch (c) {
    case InteractionClass::ReactiveStopping: return "reactive_stopping";
    case InteractionClass::CarFollowing: return "car_following";
    case InteractionClass::Courtesy: return "courtesy";
    case InteractionClass::ComplexGame: return "complex_game";
    case InteractionClass::None: return "none";
  }
  return "?";
}

struct ClassifierConfig {
  double conflict_distance = 2.0;        // risk margin beyond the radii, m
  double conflict_close_distance = 3.0;  // "very close", m
  double horizon = 4.0;                  // constant-velocity look-ahead, s
  bool courtesy_to_pedestrians = true;
  bool courtesy_to_cars = true;
};

// Constant-velocity extrapolation over [0, horizon] for every ordered pair
// (alpha, beta) with beta inside alpha's field of view. A conflict is
// emitted when the minimum predicted center distance is below
// conflict_distance + both radii.
std::vector<Conflict> detect_conflicts(std::span<const RoadUser> users, double horizon,
                                       double conflict_distance);

// Priority-ordered taxonomy: reactive stopping, then car following, then
// courtesy, then game. Angle bands are inclusive at <=/>= bounds and
// exclusive at < bounds.
InteractionClass classify(const Conflict& conflict, const RoadUser& alpha,
                          const RoadUser& beta, const ClassifierConfig& config);

// The user's conflict with the smallest distance; ties go to the smaller
// time to closest approach, then the lexicographically lower counterpart id.
std::optional<Conflict> nearest_conflict(const RoadUser& user,
                                         std::span<const Conflict> conflicts);

int count_active_interactions(const RoadUser& user, std::span<const Conflict> conflicts);

}  // namespace sharedspace
