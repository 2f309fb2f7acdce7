#include "sharedspace/game.hpp"

#include <algorithm>
#include <cmath>

namespace sharedspace {

namespace {

int action_row(GameAction a) {
  switch (a) {
    case GameAction::Continue: return 0;
    case GameAction::Decelerate: return 1;
    case GameAction::Deviate: return 2;
  }
  return 0;
}

// Safety-first preference used for tie-breaking.
int tie_rank(GameAction a) {
  switch (a) {
    case GameAction::Decelerate: return 0;
    case GameAction::Deviate: return 1;
    case GameAction::Continue: return 2;
  }
  return 3;
}

}  // namespace

PayoffConfig PayoffConfig::defaults() {
  PayoffConfig c;
  // Calibration-pending weights chosen to reproduce the bundled scenarios:
  // a car leader yields to slow crossing pedestrians, pedestrians walk past
  // a stopped car, and the give-way budget (x3) eventually flips a driver
  // back to continuing.
  c.factor_weights = {{
      {0.0, 1.0},    // F1  <- x1
      {0.0, 0.0},    // F2  <- x2
      {0.0, 1.0},    // F3  <- x3
      {0.0, 0.0},    // F4  <- x4
      {-1.0, 0.0},   // F5  <- x5
      {2.0, 0.0},    // F6  <- x1
      {1.0, 0.0},    // F7  <- x2
      {2.0, -1.0},   // F8  <- x3
      {-1.0, 0.0},   // F9  <- x4
      {1.0, 0.0},    // F10 <- x5
      {-1.0, 1.0},   // F11 <- x1
      {0.0, 0.0},    // F12 <- x6
  }};
  // Rows: pedestrian Continue/Decelerate/Deviate; cols: car Continue/Decelerate.
  c.base_matrix = {{
      {{{-100.0, -100.0}, {2.0, 0.0}}},  // ped Continue
      {{{0.0, 2.0}, {-1.0, -1.0}}},      // ped Decelerate
      {{{1.0, 2.0}, {1.0, 0.0}}},        // ped Deviate
  }};
  return c;
}

void PayoffConfig::validate() const {
  if (n_threshold < 1 || m_threshold < 1)
    throw GameError("payoff config: N and M must be >= 1");
  double ped_best = -1e9, car_best = -1e9;
  for (int r = 0; r < 3; ++r) {
    for (int col = 0; col < 2; ++col) {
      const BaseCell& cell = base_matrix[r][col];
      for (double v : {cell.pedestrian, cell.car}) {
        if (!(v >= -100.0 && v <= 2.0))
          throw GameError("payoff config: base values must lie in [-100, 2]");
      }
      const bool mutual_continue = r == 0 && col == 0;
      if (mutual_continue) {
        if (cell.pedestrian != -100.0 || cell.car != -100.0)
          throw GameError("payoff config: mutual Continue must be -100 for both");
      } else if (cell.pedestrian <= -100.0 || cell.car <= -100.0) {
        throw GameError("payoff config: -100 must be unique to mutual Continue");
      }
      ped_best = std::max(ped_best, cell.pedestrian);
      car_best = std::max(car_best, cell.car);
    }
  }
  if (ped_best != 2.0 || car_best != 2.0)
    throw GameError("payoff config: each player's best base outcome must be 2");
}

FactorVector evaluate_factors(const RoadUser& actor, const RoadUser& counterpart,
                              const FactorContext& ctx, const PayoffConfig& config) {
  FactorVector x;
  x.x1 = counterpart.speed() < config.s_normal;
  x.x2 = ctx.active_interactions < config.n_threshold;
  x.x3 = actor.give_way_count < config.m_threshold;
  x.x4 = actor.kind == UserKind::car && actor.mode.mode == MotionMode::following;
  x.x5 = actor.kind == UserKind::pedestrian && actor.in_group;
  x.x6 = actor.kind == UserKind::car && ctx.followed_by_car;
  return x;
}

CarPayoffs payoff_car(const FactorVector& f, const PayoffConfig& c) {
  const auto& w = c.factor_weights;
  CarPayoffs p;
  p.continue_ = w[0].pick(f.x1) + w[1].pick(f.x2) + w[2].pick(f.x3) + w[3].pick(f.x4) +
                w[4].pick(f.x5);
  p.decelerate = w[5].pick(f.x1) + w[6].pick(f.x2) + w[7].pick(f.x3) + w[8].pick(f.x4) +
                 w[9].pick(f.x5);
  return p;
}

PedestrianPayoffs payoff_pedestrian(const FactorVector& f, const PayoffConfig& c) {
  const auto& w = c.factor_weights;
  PedestrianPayoffs p;
  p.continue_ = w[0].pick(f.x1) + w[8].pick(f.x4) + w[9].pick(f.x5);
  p.decelerate = w[5].pick(f.x1) + w[3].pick(f.x4) + w[4].pick(f.x5);
  p.deviate = w[10].pick(f.x1) + w[11].pick(f.x6);
  return p;
}

double base_outcome(const PayoffConfig& config, UserKind mine, GameAction my_action,
                    UserKind other, GameAction other_action) {
  if (mine == UserKind::pedestrian) {
    // Against another pedestrian a deviating opponent reads as yielding.
    GameAction col = other_action;
    if (other == UserKind::pedestrian && col == GameAction::Deviate)
      col = GameAction::Decelerate;
    return config.base_matrix[action_row(my_action)][action_row(col)].pedestrian;
  }
  // Car: the opponent's Continue/Decelerate occupies the pedestrian row.
  GameAction row = other_action;
  if (row == GameAction::Deviate && other == UserKind::car) row = GameAction::Decelerate;
  return config.base_matrix[action_row(row)][action_row(my_action)].car;
}

namespace {

double action_component(UserKind kind, GameAction action, const FactorVector& factors,
                        const PayoffConfig& config) {
  if (kind == UserKind::car) {
    const CarPayoffs p = payoff_car(factors, config);
    return action == GameAction::Continue ? p.continue_ : p.decelerate;
  }
  const PedestrianPayoffs p = payoff_pedestrian(factors, config);
  switch (action) {
    case GameAction::Continue: return p.continue_;
    case GameAction::Decelerate: return p.decelerate;
    case GameAction::Deviate: return p.deviate;
  }
  return 0.0;
}

}  // namespace

GameSpec assemble_game(const RoadUser& leader, std::span<const RoadUser* const> followers,
                       bool leader_followed_by_car, const FactorContext& follower_ctx,
                       const PayoffConfig& config) {
  if (followers.empty()) throw GameError("game needs at least one follower");
  const RoadUser& nearest = *followers.front();
  for (const RoadUser* f : followers)
    if (f->kind != nearest.kind)
      throw GameError("followers of one game must share a kind");

  GameSpec game;
  game.leader_id = leader.id;
  for (const RoadUser* f : followers) game.follower_ids.push_back(f->id);
  game.leader_kind = leader.kind;
  game.follower_kind = nearest.kind;
  game.leader_actions = ActionSet::for_kind(leader.kind);
  game.follower_actions = ActionSet::for_kind(nearest.kind);

  const FactorContext leader_ctx{static_cast<int>(followers.size()),
                                 leader_followed_by_car};
  const FactorVector leader_factors = evaluate_factors(leader, nearest, leader_ctx, config);
  const FactorVector follower_factors =
      evaluate_factors(nearest, leader, follower_ctx, config);

  const size_t nl = game.leader_actions.actions.size();
  const size_t nf = game.follower_actions.actions.size();
  game.leader_utility.assign(nl, std::vector<double>(nf, 0.0));
  game.follower_utility.assign(nl, std::vector<double>(nf, 0.0));
  for (size_t li = 0; li < nl; ++li) {
    for (size_t fi = 0; fi < nf; ++fi) {
      const GameAction sl = game.leader_actions.actions[li];
      const GameAction sf = game.follower_actions.actions[fi];
      game.leader_utility[li][fi] =
          base_outcome(config, leader.kind, sl, nearest.kind, sf) +
          action_component(leader.kind, sl, leader_factors, config);
      game.follower_utility[li][fi] =
          base_outcome(config, nearest.kind, sf, leader.kind, sl) +
          action_component(nearest.kind, sf, follower_factors, config);
    }
  }
  return game;
}

SPNEResult solve_spne(const GameSpec& game) {
  const auto& la = game.leader_actions.actions;
  const auto& fa = game.follower_actions.actions;
  if (la.empty() || fa.empty()) throw GameError("empty action set");

  // Follower best response per leader action, then the leader's optimum.
  std::vector<size_t> best_response(la.size(), 0);
  for (size_t li = 0; li < la.size(); ++li) {
    size_t best = 0;
    for (size_t fi = 1; fi < fa.size(); ++fi) {
      const double u = game.follower_utility[li][fi];
      const double ub = game.follower_utility[li][best];
      if (u > ub || (u == ub && tie_rank(fa[fi]) < tie_rank(fa[best]))) best = fi;
    }
    best_response[li] = best;
  }

  size_t chosen = 0;
  for (size_t li = 1; li < la.size(); ++li) {
    const double u = game.leader_utility[li][best_response[li]];
    const double uc = game.leader_utility[chosen][best_response[chosen]];
    if (u > uc || (u == uc && tie_rank(la[li]) < tie_rank(la[chosen]))) chosen = li;
  }

  SPNEResult r;
  r.leader_action = la[chosen];
  r.follower_action = fa[best_response[chosen]];
  r.leader_utility = game.leader_utility[chosen][best_response[chosen]];
  r.follower_utility = game.follower_utility[chosen][best_response[chosen]];
  return r;
}

}  // namespace sharedspace
