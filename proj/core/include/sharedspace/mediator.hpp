#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "sharedspace/game.hpp"
#include "sharedspace/interaction.hpp"

namespace sharedspace {

struct MediatorConfig {
  ClassifierConfig classifier;
  PayoffConfig payoffs;
  bool game_enabled = true;
  // A user whose conflict set stays empty this many cycles is released to
  // free flow no matter what it was bound to.
  int free_flow_release_cycles = 3;
};

struct PlayedGame {
  GameSpec spec;
  SPNEResult result;
};

struct LocalHandling {
  std::string user;
  std::string counterpart;
  InteractionClass cls = InteractionClass::None;
};

struct DeferredConflict {
  std::string first;
  std::string second;
  std::string reason;
};

struct MediationCycleReport {
  long cycle_index = 0;
  // Per-user nearest conflict counterparty and classification; users without
  // a conflict this cycle are absent.
  std::map<std::string, Conflict> nearest;
  std::map<std::string, InteractionClass> classification;
  std::vector<PlayedGame> games;
  std::vector<LocalHandling> locally_handled;
  std::vector<DeferredConflict> deferred;
  std::vector<std::string> overrides;  // human-readable override notes
};

// The host agent: collects each car's nearest conflict, routes simple
// interactions back to the car, and organizes one Stackelberg game per
// remaining complex conflict cluster. Mutates only the users' mode state
// and give-way counters; one call per simulation step.
class HostAgent {
 public:
  explicit HostAgent(MediatorConfig config) : config_(std::move(config)) {}

  MediationCycleReport run_cycle(std::vector<RoadUser>& users,
                                 std::span<const Conflict> conflicts, long cycle_index);

  // Binds a solved game action to a user until the triggering conflict
  // clears. Exposed for tests.
  static void dispatch_game_decision(RoadUser& user, GameAction action,
                                     const RoadUser& counterpart, double stop_epsilon);

  const MediatorConfig& config() const { return config_; }

 private:
  MediatorConfig config_;
};

}  // namespace sharedspace
