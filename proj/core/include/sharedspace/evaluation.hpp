#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sharedspace/sim.hpp"

namespace sharedspace {

struct EvalError : std::runtime_error {
  explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

// Trajectory value (position, speed) linearly interpolated at time t.
// t must lie within the sample support.
TrajectorySample interpolate(const Trajectory& tr, double t);

// Resamples onto a uniform grid anchored at t0 with the given interval,
// covering [t0, t1].
Trajectory resample(const Trajectory& tr, double interval, double t0, double t1);

// Mean Euclidean distance between the two trajectories over the overlap of
// their time supports, both resampled to `interval`. Throws EvalError when
// the overlap is empty.
double trajectory_distance(const Trajectory& sim, const Trajectory& ref, double interval);

// Mean absolute speed difference over the same alignment.
double speed_difference(const Trajectory& sim, const Trajectory& ref, double interval);

struct AggregateStats {
  double mean = 0.0;
  double stdev = 0.0;  // population form (divide by n)
};

// Mean and standard deviation of speed over all samples of all users of the
// kind. With per_user_means, each user contributes its mean speed once
// instead. Throws EvalError on an empty sample set.
AggregateStats aggregate_stats(std::span<const Trajectory> trajectories, UserKind kind,
                               bool per_user_means = false);

struct ScenarioMetrics {
  std::string scenario;
  // Averaged among the scenario's users of each kind; NaN when absent.
  double avg_trajectory_distance_car = 0.0;
  double avg_trajectory_distance_ped = 0.0;
  double avg_speed_diff_car = 0.0;
  double avg_speed_diff_ped = 0.0;
};

struct MetricsReport {
  std::vector<ScenarioMetrics> scenarios;
  std::optional<AggregateStats> sim_car, sim_ped, ref_car, ref_ped;
  double resample_interval = 0.5;
};

// Pairs users by id between the two sets and fills one ScenarioMetrics.
ScenarioMetrics compare_trajectory_sets(const std::string& scenario,
                                        std::span<const Trajectory> sim,
                                        std::span<const Trajectory> ref, double interval);

// Writes metrics.csv, per_scenario.csv, and per-scenario SVG overlay and
// speed plots into out_dir. Throws EvalError when the directory is not
// writable.
void emit_report(const MetricsReport& report, const std::string& out_dir);
void emit_plots(const std::string& scenario, std::span<const Trajectory> sim,
                std::span<const Trajectory> ref, const std::string& out_dir);

// Trajectory CSV round-trip (the simulator's output format doubles as the
// reference-data format).
std::vector<Trajectory> parse_trajectories_csv(const std::string& text);
std::vector<Trajectory> load_trajectories_csv(const std::string& path);

}  // namespace sharedspace
