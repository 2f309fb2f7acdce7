// Command-line front end: run scenarios, check replay determinism, dump the
// effective configuration, compare trajectory sets, and sweep parameters.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sharedspace/evaluation.hpp"
#include "sharedspace/scenario.hpp"
#include "sharedspace/sim.hpp"

namespace fs = std::filesystem;
using namespace sharedspace;

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

void write_outputs(const SimulationLog& log, const fs::path& dir) {
  fs::create_directories(dir);
  write_file(dir / "trajectories.csv", log.trajectories_csv());
  write_file(dir / "log.jsonl", log.cycle_records_text());
  write_file(dir / "collisions.csv", log.collisions_csv());
}

ScenarioSpec load_with_overrides(const std::string& path, std::optional<long long> seed,
                                 std::optional<double> dt, bool no_game) {
  ScenarioSpec spec = load_scenario_file(path);
  if (seed) spec.seed = static_cast<unsigned long long>(*seed);
  if (dt) spec.dt = *dt;
  if (no_game) spec.game_enabled = false;
  return spec;
}

int cmd_run(const std::string& path, std::optional<long long> seed,
            std::optional<double> dt, bool no_game, const std::string& out_dir) {
  const ScenarioSpec spec = load_with_overrides(path, seed, dt, no_game);
  Simulator sim(spec);
  const SimulationLog log = sim.run();
  write_outputs(log, out_dir);
  std::cout << "scenario " << log.scenario_name << ": " << log.trajectories.size()
            << " users, " << log.cycle_records.size() << " cycles, "
            << log.collisions.size() << " collision events, "
            << (log.all_arrived ? "all arrived" : "duration reached") << ", t_end="
            << format_number(log.end_time) << " s\n";
  std::cout << "outputs in " << out_dir << "\n";
  return 0;
}

int cmd_replay_check(const std::string& path) {
  const ScenarioSpec spec = load_scenario_file(path);
  const bool ok = replay_check(spec);
  std::cout << "replay-check " << spec.name << ": " << (ok ? "OK" : "MISMATCH") << "\n";
  return ok ? 0 : 1;
}

int cmd_compare(const std::string& sim_dir, const std::string& ref_dir,
                const std::string& out_dir, double resample_interval, bool per_user_means) {
  MetricsReport report;
  report.resample_interval = resample_interval;
  std::vector<Trajectory> all_sim, all_ref;

  std::vector<fs::path> sim_files;
  for (const auto& e : fs::directory_iterator(sim_dir))
    if (e.path().extension() == ".csv") sim_files.push_back(e.path());
  std::sort(sim_files.begin(), sim_files.end());

  for (const fs::path& sf : sim_files) {
    const fs::path rf = fs::path(ref_dir) / sf.filename();
    if (!fs::exists(rf)) {
      std::cerr << "warning: no reference for " << sf.filename().string() << "\n";
      continue;
    }
    const auto sim_trajs = load_trajectories_csv(sf.string());
    const auto ref_trajs = load_trajectories_csv(rf.string());
    const std::string name = sf.stem().string();
    report.scenarios.push_back(
        compare_trajectory_sets(name, sim_trajs, ref_trajs, resample_interval));
    emit_plots(name, sim_trajs, ref_trajs, out_dir);
    all_sim.insert(all_sim.end(), sim_trajs.begin(), sim_trajs.end());
    all_ref.insert(all_ref.end(), ref_trajs.begin(), ref_trajs.end());
  }

  const auto try_stats = [&](std::span<const Trajectory> t, UserKind k) {
    try {
      return std::optional<AggregateStats>(aggregate_stats(t, k, per_user_means));
    } catch (const EvalError&) {
      return std::optional<AggregateStats>{};
    }
  };
  report.sim_car = try_stats(all_sim, UserKind::car);
  report.sim_ped = try_stats(all_sim, UserKind::pedestrian);
  report.ref_car = try_stats(all_ref, UserKind::car);
  report.ref_ped = try_stats(all_ref, UserKind::pedestrian);

  emit_report(report, out_dir);
  std::cout << "compared " << report.scenarios.size() << " scenario(s); report in "
            << out_dir << "\n";
  return 0;
}

int cmd_sweep(const std::string& path, const std::string& param,
              const std::vector<std::string>& values, const std::string& out_dir) {
  std::string summary = "value,collisions,all_arrived,end_time\n";
  for (const std::string& v : values) {
    ScenarioSpec spec = load_scenario_file(path);
    apply_override(spec, param, v);
    Simulator sim(spec);
    const SimulationLog log = sim.run();
    const fs::path dir = fs::path(out_dir) / (param + "=" + v);
    write_outputs(log, dir);
    summary += v + "," + std::to_string(log.collisions.size()) + "," +
               (log.all_arrived ? "true" : "false") + "," + format_number(log.end_time) +
               "\n";
    std::cout << param << "=" << v << ": " << log.collisions.size()
              << " collision events, t_end=" << format_number(log.end_time) << "\n";
  }
  fs::create_directories(out_dir);
  write_file(fs::path(out_dir) / "sweep_summary.csv", summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shared-space traffic simulator"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = "out";
  std::optional<long long> seed;
  std::optional<double> dt;
  bool no_game = false;

  auto* run = app.add_subcommand("run", "simulate a scenario file");
  run->add_option("scenario", scenario_path, "scenario file")->required();
  run->add_option("--seed", seed, "override the scenario seed");
  run->add_option("--dt", dt, "override the time step, s");
  run->add_option("--out", out_dir, "output directory");
  run->add_flag("--no-game", no_game, "disable the game-theoretic layer");

  auto* replay = app.add_subcommand("replay-check", "verify bit-identical replay");
  replay->add_option("scenario", scenario_path, "scenario file")->required();

  auto* dump = app.add_subcommand("dump-config", "print the effective default config");

  std::string sim_dir, ref_dir, cmp_out = "report";
  double resample_interval = 0.5;
  bool per_user_means = false;
  auto* compare = app.add_subcommand("compare", "compare simulated vs reference trajectories");
  compare->add_option("--sim", sim_dir, "directory of simulated trajectory CSVs")->required();
  compare->add_option("--ref", ref_dir, "directory of reference trajectory CSVs")->required();
  compare->add_option("--out", cmp_out, "report directory");
  compare->add_option("--resample", resample_interval, "comparison interval, s");
  compare->add_flag("--per-user-means", per_user_means,
                    "aggregate over per-user mean speeds instead of samples");

  std::string sweep_param;
  std::vector<std::string> sweep_values;
  auto* sweep = app.add_subcommand("sweep", "run a scenario across parameter values");
  sweep->add_option("scenario", scenario_path, "scenario file")->required();
  sweep->add_option("--param", sweep_param, "dotted config key, e.g. forces.v0")->required();
  sweep->add_option("--values", sweep_values, "values to sweep")->required()->delimiter(',');
  sweep->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(scenario_path, seed, dt, no_game, out_dir);
    if (replay->parsed()) return cmd_replay_check(scenario_path);
    if (dump->parsed()) {
      std::cout << dump_config_text(ScenarioSpec{});
      return 0;
    }
    if (compare->parsed())
      return cmd_compare(sim_dir, ref_dir, cmp_out, resample_interval, per_user_means);
    if (sweep->parsed()) return cmd_sweep(scenario_path, sweep_param, sweep_values, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
