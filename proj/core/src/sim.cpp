#include "sharedspace/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include <json.hpp>

#include "sharedspace/dynamics.hpp"

namespace sharedspace {

using nlohmann::json;

std::string format_number(double v, int significant_digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, v);
  return buf;
}

namespace {

std::string mode_label(const RoadUser& u) {
  if (u.mode.mode == MotionMode::game_bound) {
    switch (u.mode.action) {
      case GameAction::Continue: return "game_continue";
      case GameAction::Decelerate: return "game_decelerate";
      case GameAction::Deviate: return "game_deviate";
    }
  }
  return to_string(u.mode.mode);
}

json conflict_to_json(const Conflict& c) {
  return json{{"other", c.second},
              {"d", c.distance},
              {"theta_a", c.theta_alpha},
              {"theta_b", c.theta_beta},
              {"ttca", c.time_to_closest_approach},
              {"min_dist", c.min_predicted_distance}};
}

json report_to_json(const MediationCycleReport& r, double t) {
  json j;
  j["cycle"] = r.cycle_index;
  j["t"] = t;
  if (!r.nearest.empty()) {
    json n;
    for (const auto& [id, c] : r.nearest) n[id] = conflict_to_json(c);
    j["nearest"] = n;
  }
  if (!r.classification.empty()) {
    json c;
    for (const auto& [id, cls] : r.classification) c[id] = to_string(cls);
    j["class"] = c;
  }
  if (!r.games.empty()) {
    json games = json::array();
    for (const auto& g : r.games) {
      games.push_back(json{{"leader", g.spec.leader_id},
                           {"followers", g.spec.follower_ids},
                           {"leader_action", to_string(g.result.leader_action)},
                           {"follower_action", to_string(g.result.follower_action)},
                           {"leader_utility", g.result.leader_utility},
                           {"follower_utility", g.result.follower_utility}});
    }
    j["games"] = games;
  }
  if (!r.locally_handled.empty()) {
    json local = json::array();
    for (const auto& l : r.locally_handled)
      local.push_back(json{{"user", l.user}, {"other", l.counterpart}, {"class", to_string(l.cls)}});
    j["local"] = local;
  }
  if (!r.deferred.empty()) {
    json d = json::array();
    for (const auto& x : r.deferred)
      d.push_back(json{{"first", x.first}, {"second", x.second}, {"reason", x.reason}});
    j["deferred"] = d;
  }
  if (!r.overrides.empty()) j["overrides"] = r.overrides;
  return j;
}

}  // namespace

std::string SimulationLog::cycle_records_text() const {
  std::string out;
  for (const auto& line : cycle_records) {
    out += line;
    out += '\n';
  }
  return out;
}

std::string SimulationLog::trajectories_csv() const {
  std::string out = "user_id,kind,t,x,y,speed,mode\n";
  for (const Trajectory& tr : trajectories) {
    for (const TrajectorySample& s : tr.samples) {
      out += tr.user_id;
      out += ',';
      out += to_string(tr.kind);
      out += ',';
      out += format_number(s.t);
      out += ',';
      out += format_number(s.position.x);
      out += ',';
      out += format_number(s.position.y);
      out += ',';
      out += format_number(s.speed);
      out += ',';
      out += s.mode;
      out += '\n';
    }
  }
  return out;
}

std::string SimulationLog::collisions_csv() const {
  std::string out = "t,first,second,distance\n";
  for (const CollisionEvent& c : collisions) {
    out += format_number(c.t);
    out += ',';
    out += c.first;
    out += ',';
    out += c.second;
    out += ',';
    out += format_number(c.distance);
    out += '\n';
  }
  return out;
}

std::string SimulationLog::to_text() const {
  std::string out = "scenario=" + scenario_name + " seed=" + std::to_string(seed) + "\n";
  out += cycle_records_text();
  out += trajectories_csv();
  out += collisions_csv();
  for (const auto& [id, g] : final_give_way)
    out += "giveway," + id + "," + std::to_string(g) + "\n";
  return out;
}

Simulator::Simulator(ScenarioSpec spec)
    : spec_(std::move(spec)), host_(spec_.mediator_config()) {
  const ValidationReport report = validate_scenario(spec_);
  if (!report.ok())
    throw SimError("scenario '" + spec_.name + "' is invalid:\n" + report.to_string());

  graph_ = build_visibility_graph(spec_.obstacles);
  pending_ = spec_.users;
  std::stable_sort(pending_.begin(), pending_.end(),
                   [](const UserSpec& a, const UserSpec& b) {
                     return a.entry_time < b.entry_time;
                   });

  // The single seeded stream feeds give-way draws only, in file order, so
  // entry timing cannot perturb them.
  std::mt19937_64 rng(spec_.seed);
  std::map<std::string, int> draws;
  for (const UserSpec& u : spec_.users)
    if (!u.give_way_count) draws[u.id] = static_cast<int>(rng() % 6);
  assigned_give_way_.reserve(pending_.size());
  for (const UserSpec& u : pending_)
    assigned_give_way_.push_back(u.give_way_count ? *u.give_way_count : draws[u.id]);
}

void Simulator::spawn_due(double t) {
  size_t i = 0;
  while (i < pending_.size()) {
    if (pending_[i].entry_time > t + 1e-9) break;
    const UserSpec& s = pending_[i];
    RoadUser u;
    u.id = s.id;
    u.kind = s.kind;
    u.position = s.origin;
    u.velocity = {0.0, 0.0};
    u.desired_speed = s.desired_speed;
    u.max_speed = s.max_speed;
    u.radius = s.radius.value_or(s.kind == UserKind::car ? 1.0 : 0.3);
    u.relaxation_time = s.relaxation_time;
    u.fov_half_angle = s.fov_half_angle;
    u.in_group = s.in_group;
    u.give_way_count = assigned_give_way_[i];

    const double clearance =
        s.kind == UserKind::car ? spec_.clearance_car : spec_.clearance_pedestrian;
    PlannedPath path = plan_path(graph_, s.origin, s.destination, spec_.obstacles);
    path = offset_inner_vertices(path, graph_, spec_.obstacles, clearance);
    u.path = std::move(path);
    u.next_waypoint_index = u.path.waypoints.size() > 1 ? 1 : 0;
    u.heading = (u.current_target() - u.position).normalized();

    Trajectory tr;
    tr.user_id = u.id;
    tr.kind = u.kind;
    tr.samples.push_back({t, u.position, 0.0, mode_label(u)});
    trajectories_.push_back(std::move(tr));

    users_.push_back(std::move(u));
    pending_.erase(pending_.begin() + static_cast<long>(i));
    assigned_give_way_.erase(assigned_give_way_.begin() + static_cast<long>(i));
  }
}

void Simulator::step(double t, long cycle_index, SimulationLog& log) {
  // Decisions first: detect on the pre-step state, mediate, commit modes.
  std::vector<Conflict> conflicts =
      detect_conflicts(users_, spec_.horizon, spec_.conflict_distance);
  const MediationCycleReport report = host_.run_cycle(users_, conflicts, cycle_index);
  log.cycle_records.push_back(report_to_json(report, t).dump());

  // All forces read this immutable snapshot (new modes, pre-step kinematics),
  // so the iteration order of the commit loop cannot matter.
  const std::vector<RoadUser> snapshot = users_;
  std::map<std::string, const RoadUser*> by_id;
  for (const RoadUser& u : snapshot) by_id[u.id] = &u;

  const double dt = spec_.dt;
  const ForceParams& fp = spec_.forces;

  for (RoadUser& live : users_) {
    if (live.arrived) continue;
    const RoadUser& self = *by_id[live.id];

    bool halving = false;
    Point2 target = self.current_target();
    double target_speed = self.desired_speed;
    const RoadUser* skip_repulsion_from = nullptr;

    switch (self.mode.mode) {
      case MotionMode::free_flow:
        break;
      case MotionMode::stopping:
      case MotionMode::courtesy:
        halving = true;
        break;
      case MotionMode::following: {
        const auto it = by_id.find(self.mode.counterpart);
        if (it != by_id.end() && !it->second->arrived) {
          const FollowOutcome out = car_following_force(self, *it->second, fp);
          if (std::holds_alternative<SteerToward>(out)) {
            target = std::get<SteerToward>(out).target;
            skip_repulsion_from = it->second;
          } else {
            halving = true;
          }
        }
        break;
      }
      case MotionMode::game_bound:
        switch (self.mode.action) {
          case GameAction::Decelerate:
            halving = true;
            break;
          case GameAction::Continue:
            if (self.mode.locked_speed) target_speed = *self.mode.locked_speed;
            break;
          case GameAction::Deviate: {
            const auto it = by_id.find(self.mode.counterpart);
            const bool counterpart_visible =
                it != by_id.end() && !it->second->arrived &&
                fov_factor(self, it->second->position) > 0.0;
            const bool reached = self.mode.deviate_target &&
                                 distance(self.position, *self.mode.deviate_target) <=
                                     kWaypointArrivalRadius;
            if (!self.mode.deviate_done && counterpart_visible && !reached &&
                self.mode.deviate_target) {
              target = *self.mode.deviate_target;
            } else if (!live.mode.deviate_done) {
              live.mode.deviate_done = true;  // resume the planned path
            }
            break;
          }
        }
        break;
    }

    if (halving) {
      // The halving brake is a direct speed directive, not a force: the
      // speed halves once per agent cycle and snaps to zero below the
      // stop threshold.
      const double new_speed = courtesy_or_stopping_brake(self.speed(), fp.stop_epsilon);
      live.velocity = self.heading * new_speed;
      live.position = self.position + live.velocity * dt;
    } else {
      Vec2 accel = driving_force(self, target, target_speed);
      for (const auto& obs : spec_.obstacles) accel += obstacle_repulsion(self, obs, fp);
      for (const RoadUser& other : snapshot) {
        if (other.id == self.id || other.arrived) continue;
        if (skip_repulsion_from && other.id == skip_repulsion_from->id) continue;
        accel += user_repulsion(self, other, fp);
      }
      const RoadUser next = integrate_step(self, accel, dt, fp.stop_epsilon,
                                           spec_.car_turn_rate_deg);
      live.velocity = next.velocity;
      live.position = next.position;
      live.heading = next.heading;
      live.next_waypoint_index = next.next_waypoint_index;
    }

    if (distance(live.position, live.destination()) <= spec_.arrival_radius)
      live.arrived = true;
  }

  // Record and scan for contacts on the committed state.
  const double t_next = t + dt;
  for (RoadUser& u : users_) {
    auto tr = std::find_if(trajectories_.begin(), trajectories_.end(),
                           [&](const Trajectory& x) { return x.user_id == u.id; });
    if (tr == trajectories_.end()) continue;
    if (!tr->samples.empty() && tr->samples.back().t >= t_next - 1e-9) continue;
    if (u.arrived && !tr->samples.empty() && tr->samples.back().mode == "arrived") continue;
    tr->samples.push_back({t_next, u.position, u.speed(),
                           u.arrived ? "arrived" : mode_label(u)});
  }
  for (size_t i = 0; i < users_.size(); ++i) {
    for (size_t j = i + 1; j < users_.size(); ++j) {
      const RoadUser& a = users_[i];
      const RoadUser& b = users_[j];
      if (a.arrived || b.arrived) continue;
      const double d = distance(a.position, b.position);
      if (d < a.radius + b.radius) log.collisions.push_back({t_next, a.id, b.id, d});
    }
  }
}

SimulationLog Simulator::run() {
  SimulationLog log;
  log.scenario_name = spec_.name;
  log.seed = spec_.seed;

  const long steps = std::lround(spec_.duration / spec_.dt);
  long k = 0;
  for (; k < steps; ++k) {
    const double t = static_cast<double>(k) * spec_.dt;
    spawn_due(t);
    const bool all_done =
        pending_.empty() &&
        std::all_of(users_.begin(), users_.end(), [](const RoadUser& u) { return u.arrived; });
    if (all_done && !users_.empty()) break;
    step(t, k, log);
  }
  log.end_time = static_cast<double>(k) * spec_.dt;
  log.all_arrived = pending_.empty() &&
                    std::all_of(users_.begin(), users_.end(),
                                [](const RoadUser& u) { return u.arrived; });
  log.trajectories = trajectories_;
  for (const RoadUser& u : users_) log.final_give_way.emplace_back(u.id, u.give_way_count);
  std::sort(log.final_give_way.begin(), log.final_give_way.end());
  return log;
}

bool replay_check(const ScenarioSpec& spec) {
  Simulator a(spec);
  Simulator b(spec);
  return a.run().to_text() == b.run().to_text();
}

}  // namespace sharedspace
