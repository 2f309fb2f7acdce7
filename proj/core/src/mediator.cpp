#include "sharedspace/mediator.hpp"

#include <algorithm>

#include "sharedspace/dynamics.hpp"

namespace sharedspace {

namespace {

bool is_yielding(const RoadUser& u) {
  if (u.mode.mode == MotionMode::stopping || u.mode.mode == MotionMode::courtesy)
    return true;
  return u.mode.mode == MotionMode::game_bound && u.mode.action == GameAction::Decelerate;
}

// A game commitment clears once the counterpart left the field of view, the
// closest approach has passed (the pair is no longer approaching), or both
// sides have come to a stop.
bool game_bound_cleared(const RoadUser& user, const RoadUser& counterpart,
                        double stop_epsilon) {
  if (counterpart.arrived) return true;
  if (fov_factor(user, counterpart.position) == 0.0) return true;
  const Vec2 rel_pos = counterpart.position - user.position;
  const Vec2 rel_vel = counterpart.velocity - user.velocity;
  if (rel_pos.dot(rel_vel) >= 0.0 &&
      (user.speed() > stop_epsilon || counterpart.speed() > stop_epsilon))
    return true;
  if (user.speed() <= stop_epsilon && counterpart.speed() <= stop_epsilon) return true;
  return false;
}

}  // namespace

void HostAgent::dispatch_game_decision(RoadUser& user, GameAction action,
                                       const RoadUser& counterpart, double stop_epsilon) {
  ModeState m;
  m.mode = MotionMode::game_bound;
  m.action = action;
  m.counterpart = counterpart.id;
  switch (action) {
    case GameAction::Continue:
      if (user.kind == UserKind::car) {
        const double s = user.speed();
        m.locked_speed = s > stop_epsilon ? s : user.desired_speed;
      } else {
        m.locked_speed = user.max_speed;
      }
      break;
    case GameAction::Deviate: {
      const ActionDirectives d =
          execute_action(user, action, &counterpart, std::nullopt, stop_epsilon);
      m.deviate_target = d.steer_target;
      break;
    }
    case GameAction::Decelerate:
      break;
  }
  user.mode = m;
}

MediationCycleReport HostAgent::run_cycle(std::vector<RoadUser>& users,
                                          std::span<const Conflict> conflicts,
                                          long cycle_index) {
  MediationCycleReport report;
  report.cycle_index = cycle_index;

  std::map<std::string, RoadUser*> by_id;
  for (RoadUser& u : users) by_id[u.id] = &u;

  const double stop_eps = 0.05;

  // Which cars were following whom before this cycle rewrites modes (feeds
  // the x6 factor).
  std::map<std::string, bool> followed_by_car;
  for (const RoadUser& u : users)
    if (u.kind == UserKind::car && u.mode.mode == MotionMode::following)
      followed_by_car[u.mode.counterpart] = true;

  std::map<std::string, bool> was_yielding;
  for (const RoadUser& u : users) was_yielding[u.id] = u.yielding_episode;

  // Conflict bookkeeping and stale-mode release.
  for (RoadUser& u : users) {
    if (u.arrived) continue;
    const int n = count_active_interactions(u, conflicts);
    u.empty_conflict_streak = n == 0 ? u.empty_conflict_streak + 1 : 0;

    if (u.mode.mode == MotionMode::game_bound) {
      const auto it = by_id.find(u.mode.counterpart);
      const bool gone = it == by_id.end();
      if (gone || game_bound_cleared(u, *it->second, stop_eps) ||
          u.empty_conflict_streak >= config_.free_flow_release_cycles)
        u.mode = ModeState{};
    } else if (u.empty_conflict_streak >= config_.free_flow_release_cycles) {
      u.mode = ModeState{};
    }
  }

  // Simple interactions are re-derived every cycle from the car's nearest
  // conflict; the previous reflex does not persist on its own.
  struct GameSeed {
    RoadUser* car;
    Conflict conflict;
  };
  std::vector<GameSeed> seeds;

  std::vector<RoadUser*> cars;
  for (RoadUser& u : users)
    if (u.kind == UserKind::car && !u.arrived) cars.push_back(&u);
  std::sort(cars.begin(), cars.end(),
            [](const RoadUser* a, const RoadUser* b) { return a->id < b->id; });

  for (RoadUser* car : cars) {
    const auto nearest = nearest_conflict(*car, conflicts);
    const bool committed = car->mode.mode == MotionMode::game_bound;
    if (!committed &&
        (car->mode.mode == MotionMode::stopping ||
         car->mode.mode == MotionMode::following || car->mode.mode == MotionMode::courtesy))
      car->mode = ModeState{};

    if (!nearest) continue;
    report.nearest[car->id] = *nearest;
    const auto it = by_id.find(nearest->second);
    if (it == by_id.end() || it->second->arrived) continue;
    RoadUser& beta = *it->second;

    const InteractionClass cls = classify(*nearest, *car, beta, config_.classifier);
    report.classification[car->id] = cls;

    switch (cls) {
      case InteractionClass::ReactiveStopping:
        // Safety reflex preempts a standing game commitment.
        if (committed)
          report.overrides.push_back(car->id + ": game commitment overridden by reactive stopping");
        car->mode = ModeState{MotionMode::stopping, beta.id};
        report.locally_handled.push_back({car->id, beta.id, cls});
        break;
      case InteractionClass::CarFollowing:
        if (!committed) {
          car->mode = ModeState{MotionMode::following, beta.id};
          report.locally_handled.push_back({car->id, beta.id, cls});
        }
        break;
      case InteractionClass::Courtesy:
        if (!committed) {
          car->mode = ModeState{MotionMode::courtesy, beta.id};
          report.locally_handled.push_back({car->id, beta.id, cls});
        }
        break;
      case InteractionClass::ComplexGame:
        if (!committed) seeds.push_back({car, *nearest});
        break;
      case InteractionClass::None:
        break;
    }
  }

  // One game per remaining complex conflict cluster.
  std::map<std::string, bool> in_game_this_cycle;
  for (const GameSeed& seed : seeds) {
    RoadUser* car = seed.car;
    if (!config_.game_enabled) {
      report.deferred.push_back({seed.conflict.first, seed.conflict.second,
                                 "game layer disabled"});
      continue;
    }
    if (in_game_this_cycle[car->id]) continue;
    if (car->mode.mode == MotionMode::stopping) {
      report.deferred.push_back(
          {seed.conflict.first, seed.conflict.second, "participant handling reactive stop"});
      continue;
    }
    RoadUser& other = *by_id[seed.conflict.second];
    if (in_game_this_cycle[other.id] || other.mode.mode == MotionMode::game_bound) {
      report.deferred.push_back(
          {seed.conflict.first, seed.conflict.second, "counterpart already committed"});
      continue;
    }

    // The faster participant leads; ties prefer the car, then the lower id.
    RoadUser* leader = car;
    RoadUser* seed_follower = &other;
    const double sc = car->speed(), so = other.speed();
    if (so > sc ||
        (so == sc && (other.kind == UserKind::car && car->kind != UserKind::car)) ||
        (so == sc && other.kind == car->kind && other.id < car->id)) {
      leader = &other;
      seed_follower = car;
    }
    if (leader->mode.mode == MotionMode::game_bound ||
        leader->mode.mode == MotionMode::stopping) {
      report.deferred.push_back(
          {seed.conflict.first, seed.conflict.second, "leader already committed"});
      continue;
    }

    // Followers: every counterpart of the leader's complex conflicts that
    // matches the seed follower's kind and is still free this cycle.
    struct Candidate {
      RoadUser* user;
      double dist;
    };
    std::vector<Candidate> followers;
    for (const Conflict& c : conflicts) {
      if (c.first != leader->id) continue;
      const auto fit = by_id.find(c.second);
      if (fit == by_id.end() || fit->second->arrived) continue;
      RoadUser& cand = *fit->second;
      if (cand.kind != seed_follower->kind) continue;
      if (classify(c, *leader, cand, config_.classifier) != InteractionClass::ComplexGame)
        continue;
      if (in_game_this_cycle[cand.id] || cand.mode.mode == MotionMode::game_bound) continue;
      if (cand.mode.mode == MotionMode::stopping) {
        report.overrides.push_back(cand.id + ": reactive stopping wins over follower role");
        continue;
      }
      followers.push_back({&cand, c.distance});
    }
    if (followers.empty()) {
      report.deferred.push_back(
          {seed.conflict.first, seed.conflict.second, "no eligible followers"});
      continue;
    }
    std::sort(followers.begin(), followers.end(), [](const Candidate& a, const Candidate& b) {
      return std::tie(a.dist, a.user->id) < std::tie(b.dist, b.user->id);
    });

    std::vector<const RoadUser*> follower_ptrs;
    for (const Candidate& c : followers) follower_ptrs.push_back(c.user);

    const FactorContext follower_ctx{
        count_active_interactions(*followers.front().user, conflicts),
        followed_by_car[followers.front().user->id]};
    const GameSpec game =
        assemble_game(*leader, follower_ptrs, followed_by_car[leader->id], follower_ctx,
                      config_.payoffs);
    const SPNEResult result = solve_spne(game);

    dispatch_game_decision(*leader, result.leader_action, *followers.front().user, stop_eps);
    in_game_this_cycle[leader->id] = true;
    for (const Candidate& c : followers) {
      dispatch_game_decision(*c.user, result.follower_action, *leader, stop_eps);
      in_game_this_cycle[c.user->id] = true;
    }
    report.games.push_back({game, result});
  }

  // Give-way accounting: one increment per completed yield episode.
  for (RoadUser& u : users) {
    const bool now = is_yielding(u);
    if (was_yielding[u.id] && !now) ++u.give_way_count;
    u.yielding_episode = now;
  }

  return report;
}

}  // namespace sharedspace
