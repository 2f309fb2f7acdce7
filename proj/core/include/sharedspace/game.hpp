#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "sharedspace/road_user.hpp"

namespace sharedspace {

// Ordered action vocabulary of one player. Cars never deviate.
struct ActionSet {
  std::vector<GameAction> actions;

  static ActionSet for_kind(UserKind kind) {
    if (kind == UserKind::car)
      return {{GameAction::Continue, GameAction::Decelerate}};
    return {{GameAction::Continue, GameAction::Decelerate, GameAction::Deviate}};
  }
};

// Weight of one situational factor: the value it contributes when its
// governing boolean is true vs. false.
struct FactorWeight {
  double if_true = 0.0;
  double if_false = 0.0;
  double pick(bool x) const { return x ? if_true : if_false; }
};

// Base ordinal outcome of one (pedestrian action, car action) cell.
struct BaseCell {
  double pedestrian = 0.0;
  double car = 0.0;
};

struct PayoffConfig {
  // F1..F12, indexed 0..11.
  std::array<FactorWeight, 12> factor_weights{};
  // Rows: pedestrian Continue/Decelerate/Deviate; columns: car
  // Continue/Decelerate.
  std::array<std::array<BaseCell, 2>, 3> base_matrix{};
  int n_threshold = 2;       // N
  int m_threshold = 3;       // M
  double s_normal = 1.4;     // reference speed separating "slow", m/s

  static PayoffConfig defaults();

  // Enforces the ordinal structure: base values in [-100, 2], mutual
  // Continue-Continue the unique -100 minimum, best outcome 2 per player.
  void validate() const;
};

struct FactorVector {
  bool x1 = false;  // counterpart slower than s_normal
  bool x2 = false;  // active interactions below N
  bool x3 = false;  // give-way count below M
  bool x4 = false;  // actor is a car following another car
  bool x5 = false;  // actor is a pedestrian in a group
  bool x6 = false;  // actor is a car followed by another car
};

struct FactorContext {
  int active_interactions = 0;
  bool followed_by_car = false;
};

FactorVector evaluate_factors(const RoadUser& actor, const RoadUser& counterpart,
                              const FactorContext& ctx, const PayoffConfig& config);

struct CarPayoffs {
  double continue_ = 0.0;   // C_c = F1+F2+F3+F4+F5
  double decelerate = 0.0;  // C_d = F6+F7+F8+F9+F10
};
CarPayoffs payoff_car(const FactorVector& factors, const PayoffConfig& config);

struct PedestrianPayoffs {
  double continue_ = 0.0;   // P_c = F1+F9+F10
  double decelerate = 0.0;  // P_d = F6+F4+F5
  double deviate = 0.0;     // P_dev = F11+F12
};
PedestrianPayoffs payoff_pedestrian(const FactorVector& factors, const PayoffConfig& config);

// One-shot Stackelberg game: one leader, one or more followers sharing an
// action set and a payoff row.
struct GameSpec {
  std::string leader_id;
  std::vector<std::string> follower_ids;  // nearest follower first
  UserKind leader_kind = UserKind::car;
  UserKind follower_kind = UserKind::pedestrian;
  ActionSet leader_actions;
  ActionSet follower_actions;
  // leader_utility[l][f] and follower_utility[l][f], indexed by positions in
  // the action sets.
  std::vector<std::vector<double>> leader_utility;
  std::vector<std::vector<double>> follower_utility;
};

struct GameError : std::runtime_error {
  explicit GameError(const std::string& what) : std::runtime_error(what) {}
};

// Base ordinal value for `mine` when I play my_action against other_action.
// Car-car games read the car column twice; the pedestrian row restricted to
// Continue/Decelerate covers the opponent side.
double base_outcome(const PayoffConfig& config, UserKind mine, GameAction my_action,
                    UserKind other, GameAction other_action);

// Builds the bimatrix: base outcomes plus each side's factor-driven action
// payoffs. Leader factors are evaluated against the nearest follower with
// the follower count as the interaction load; the follower role is evaluated
// once, from the nearest follower's perspective.
GameSpec assemble_game(const RoadUser& leader, std::span<const RoadUser* const> followers,
                       bool leader_followed_by_car, const FactorContext& follower_ctx,
                       const PayoffConfig& config);

struct SPNEResult {
  GameAction leader_action = GameAction::Continue;
  GameAction follower_action = GameAction::Continue;
  double leader_utility = 0.0;
  double follower_utility = 0.0;
};

// Backward induction. Ties (follower or leader) are broken by the fixed
// safety-first order Decelerate, then Deviate, then Continue.
SPNEResult solve_spne(const GameSpec& game);

}  // namespace sharedspace
