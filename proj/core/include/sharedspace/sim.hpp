#pragma once

#include <string>
#include <vector>

#include "sharedspace/mediator.hpp"
#include "sharedspace/scenario.hpp"

namespace sharedspace {

struct TrajectorySample {
  double t = 0.0;
  Point2 position;
  double speed = 0.0;
  std::string mode;
};

struct Trajectory {
  std::string user_id;
  UserKind kind = UserKind::pedestrian;
  std::vector<TrajectorySample> samples;
};

struct CollisionEvent {
  double t = 0.0;
  std::string first;
  std::string second;
  double distance = 0.0;
};

struct SimulationLog {
  std::string scenario_name;
  unsigned long long seed = 0;
  std::vector<std::string> cycle_records;  // line-delimited JSON, one per cycle
  std::vector<CollisionEvent> collisions;
  std::vector<Trajectory> trajectories;
  std::vector<std::pair<std::string, int>> final_give_way;  // (user, G)
  bool all_arrived = false;
  double end_time = 0.0;

  std::string cycle_records_text() const;
  std::string trajectories_csv() const;
  std::string collisions_csv() const;
  // Full deterministic serialization used by the replay check.
  std::string to_text() const;
};

struct SimError : std::runtime_error {
  explicit SimError(const std::string& what) : std::runtime_error(what) {}
};

// Owns the loop: spawning, per-step snapshotting, conflict detection,
// mediation, force assembly, integration, and recording. Construction
// validates the scenario and throws SimError with the full report on
// violations.
class Simulator {
 public:
  explicit Simulator(ScenarioSpec spec);

  SimulationLog run();

  // Active (spawned, not arrived) users; exposed for tests that drive the
  // loop manually.
  const std::vector<RoadUser>& users() const { return users_; }

 private:
  void spawn_due(double t);
  void step(double t, long cycle_index, SimulationLog& log);

  ScenarioSpec spec_;
  VisibilityGraph graph_;
  HostAgent host_;
  std::vector<RoadUser> users_;            // spawned users, in spawn order
  std::vector<UserSpec> pending_;          // not yet spawned, file order
  std::vector<int> assigned_give_way_;     // pre-drawn G per pending user
  std::vector<Trajectory> trajectories_;
};

// True iff two runs of the same scenario produce byte-identical logs.
bool replay_check(const ScenarioSpec& spec);

std::string format_number(double v, int significant_digits = 6);

}  // namespace sharedspace
