#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sharedspace/game.hpp"
#include "sharedspace/mediator.hpp"
#include "sharedspace/road_user.hpp"

namespace sharedspace {

struct UserSpec {
  std::string id;
  UserKind kind = UserKind::pedestrian;
  Point2 origin;
  Point2 destination;
  double entry_time = 0.0;
  double desired_speed = 1.4;
  double max_speed = 2.0;
  std::optional<double> radius;       // defaults by kind
  std::optional<int> give_way_count;  // fixed when present, else seeded draw
  double relaxation_time = 0.5;
  double fov_half_angle = 90.0;
  bool in_group = false;
  int source_line = 0;
};

// A full scenario: environment, population, timing, and the force/payoff
// configuration. Parsed from the sectioned key/value scenario format.
struct ScenarioSpec {
  std::string name = "unnamed";
  double dt = 0.1;
  double duration = 60.0;
  unsigned long long seed = 0;
  bool game_enabled = true;
  double horizon = 4.0;             // conflict look-ahead, s
  double conflict_distance = 2.0;   // risk margin beyond radii, m
  bool courtesy_to_pedestrians = true;
  bool courtesy_to_cars = true;
  double clearance_pedestrian = 0.5;  // path offset from obstacles, m
  double clearance_car = 1.0;
  double arrival_radius = 0.5;        // m
  double car_turn_rate_deg = 30.0;    // deg/s

  std::vector<ObstaclePolygon> obstacles;
  std::vector<UserSpec> users;
  ForceParams forces;
  PayoffConfig payoffs = PayoffConfig::defaults();

  MediatorConfig mediator_config() const {
    MediatorConfig m;
    m.classifier.conflict_distance = conflict_distance;
    m.classifier.conflict_close_distance = forces.conflict_close_distance;
    m.classifier.horizon = horizon;
    m.classifier.courtesy_to_pedestrians = courtesy_to_pedestrians;
    m.classifier.courtesy_to_cars = courtesy_to_cars;
    m.payoffs = payoffs;
    m.game_enabled = game_enabled;
    return m;
  }
};

struct ScenarioParseError : std::runtime_error {
  ScenarioParseError(const std::string& where, int line, const std::string& what)
      : std::runtime_error(where + ":" + std::to_string(line) + ": " + what),
        line_number(line) {}
  int line_number;
};

// Every semantic violation found, one line each, with source line numbers
// where known.
struct ValidationReport {
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
  std::string to_string() const;
};

ScenarioSpec parse_scenario_text(const std::string& text, const std::string& source_name);
ScenarioSpec load_scenario_file(const std::string& path);
ValidationReport validate_scenario(const ScenarioSpec& spec);

// Applies one "section.key = value" override (e.g. "forces.v0", "meta.dt",
// "payoffs.m") using the same parsers as the file format.
void apply_override(ScenarioSpec& spec, const std::string& dotted_key,
                    const std::string& value);

// The effective configuration in scenario-file syntax, for reproducibility.
std::string dump_config_text(const ScenarioSpec& spec);

}  // namespace sharedspace
