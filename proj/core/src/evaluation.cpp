#include "sharedspace/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace sharedspace {

namespace fs = std::filesystem;

TrajectorySample interpolate(const Trajectory& tr, double t) {
  if (tr.samples.empty()) throw EvalError("empty trajectory '" + tr.user_id + "'");
  const auto& s = tr.samples;
  if (t < s.front().t - 1e-9 || t > s.back().t + 1e-9)
    throw EvalError("time " + std::to_string(t) + " outside support of '" + tr.user_id + "'");
  if (t <= s.front().t) return s.front();
  if (t >= s.back().t) return s.back();
  const auto it = std::lower_bound(
      s.begin(), s.end(), t,
      [](const TrajectorySample& a, double value) { return a.t < value; });
  const TrajectorySample& hi = *it;
  const TrajectorySample& lo = *(it - 1);
  const double span = hi.t - lo.t;
  const double w = span > 0.0 ? (t - lo.t) / span : 0.0;
  TrajectorySample out;
  out.t = t;
  out.position = {lo.position.x + w * (hi.position.x - lo.position.x),
                  lo.position.y + w * (hi.position.y - lo.position.y)};
  out.speed = lo.speed + w * (hi.speed - lo.speed);
  out.mode = w < 0.5 ? lo.mode : hi.mode;
  return out;
}

Trajectory resample(const Trajectory& tr, double interval, double t0, double t1) {
  if (interval <= 0.0) throw EvalError("resample interval must be > 0");
  Trajectory out;
  out.user_id = tr.user_id;
  out.kind = tr.kind;
  for (long i = 0;; ++i) {
    const double t = t0 + static_cast<double>(i) * interval;
    if (t > t1 + 1e-9) break;
    out.samples.push_back(interpolate(tr, std::min(t, t1)));
  }
  return out;
}

namespace {

struct AlignedPair {
  Trajectory sim;
  Trajectory ref;
};

AlignedPair align(const Trajectory& sim, const Trajectory& ref, double interval) {
  if (sim.samples.empty() || ref.samples.empty())
    throw EvalError("cannot align an empty trajectory");
  const double t0 = std::max(sim.samples.front().t, ref.samples.front().t);
  const double t1 = std::min(sim.samples.back().t, ref.samples.back().t);
  if (t1 < t0 - 1e-9)
    throw EvalError("no overlapping time support between '" + sim.user_id + "' and '" +
                    ref.user_id + "'");
  return {resample(sim, interval, t0, t1), resample(ref, interval, t0, t1)};
}

}  // namespace

double trajectory_distance(const Trajectory& sim, const Trajectory& ref, double interval) {
  const AlignedPair p = align(sim, ref, interval);
  double sum = 0.0;
  for (size_t i = 0; i < p.sim.samples.size(); ++i)
    sum += distance(p.sim.samples[i].position, p.ref.samples[i].position);
  return sum / static_cast<double>(p.sim.samples.size());
}

double speed_difference(const Trajectory& sim, const Trajectory& ref, double interval) {
  const AlignedPair p = align(sim, ref, interval);
  double sum = 0.0;
  for (size_t i = 0; i < p.sim.samples.size(); ++i)
    sum += std::abs(p.sim.samples[i].speed - p.ref.samples[i].speed);
  return sum / static_cast<double>(p.sim.samples.size());
}

AggregateStats aggregate_stats(std::span<const Trajectory> trajectories, UserKind kind,
                               bool per_user_means) {
  std::vector<double> values;
  for (const Trajectory& tr : trajectories) {
    if (tr.kind != kind || tr.samples.empty()) continue;
    if (per_user_means) {
      double sum = 0.0;
      for (const auto& s : tr.samples) sum += s.speed;
      values.push_back(sum / static_cast<double>(tr.samples.size()));
    } else {
      for (const auto& s : tr.samples) values.push_back(s.speed);
    }
  }
  if (values.empty()) throw EvalError("no speed samples for the requested kind");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(values.size());
  return {mean, std::sqrt(var)};
}

ScenarioMetrics compare_trajectory_sets(const std::string& scenario,
                                        std::span<const Trajectory> sim,
                                        std::span<const Trajectory> ref, double interval) {
  ScenarioMetrics m;
  m.scenario = scenario;
  double dist_car = 0.0, dist_ped = 0.0, speed_car = 0.0, speed_ped = 0.0;
  int n_car = 0, n_ped = 0;
  for (const Trajectory& s : sim) {
    const auto it = std::find_if(ref.begin(), ref.end(), [&](const Trajectory& r) {
      return r.user_id == s.user_id;
    });
    if (it == ref.end()) continue;
    const double d = trajectory_distance(s, *it, interval);
    const double sd = speed_difference(s, *it, interval);
    if (s.kind == UserKind::car) {
      dist_car += d;
      speed_car += sd;
      ++n_car;
    } else {
      dist_ped += d;
      speed_ped += sd;
      ++n_ped;
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  m.avg_trajectory_distance_car = n_car ? dist_car / n_car : nan;
  m.avg_speed_diff_car = n_car ? speed_car / n_car : nan;
  m.avg_trajectory_distance_ped = n_ped ? dist_ped / n_ped : nan;
  m.avg_speed_diff_ped = n_ped ? speed_ped / n_ped : nan;
  return m;
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw EvalError("cannot write " + path.string());
  out << content;
  if (!out) throw EvalError("write failed for " + path.string());
}

std::string stats_row(const char* label, const std::optional<AggregateStats>& s) {
  std::string out = label;
  if (s) {
    out += "," + format_number(s->mean) + "," + format_number(s->stdev);
  } else {
    out += ",,";
  }
  return out + "\n";
}

struct Bounds {
  double min_x = 1e30, min_y = 1e30, max_x = -1e30, max_y = -1e30;
  void include(double x, double y) {
    min_x = std::min(min_x, x);
    min_y = std::min(min_y, y);
    max_x = std::max(max_x, x);
    max_y = std::max(max_y, y);
  }
};

// Minimal SVG polyline plot; y grows upward.
class SvgPlot {
 public:
  SvgPlot(Bounds b, int width, int height) : b_(b), w_(width), h_(height) {
    const double pad_x = 0.05 * std::max(b_.max_x - b_.min_x, 1e-6);
    const double pad_y = 0.05 * std::max(b_.max_y - b_.min_y, 1e-6);
    b_.min_x -= pad_x;
    b_.max_x += pad_x;
    b_.min_y -= pad_y;
    b_.max_y += pad_y;
    body_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_ << "\" height=\""
          << h_ << "\" viewBox=\"0 0 " << w_ << " " << h_ << "\">\n"
          << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  }

  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                bool dashed) {
    if (pts.empty()) return;
    body_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
    if (dashed) body_ << " stroke-dasharray=\"5,4\"";
    body_ << " points=\"";
    for (const auto& [x, y] : pts) body_ << sx(x) << "," << sy(y) << " ";
    body_ << "\"/>\n";
  }

  void label(const std::string& text, int x, int y, const std::string& color) {
    body_ << "<text x=\"" << x << "\" y=\"" << y << "\" fill=\"" << color
          << "\" font-size=\"12\" font-family=\"sans-serif\">" << text << "</text>\n";
  }

  std::string finish() {
    body_ << "</svg>\n";
    return body_.str();
  }

 private:
  double sx(double x) const {
    return (x - b_.min_x) / (b_.max_x - b_.min_x) * (w_ - 20) + 10;
  }
  double sy(double y) const {
    return h_ - ((y - b_.min_y) / (b_.max_y - b_.min_y) * (h_ - 20) + 10);
  }
  Bounds b_;
  int w_, h_;
  std::ostringstream body_;
};

}  // namespace

void emit_plots(const std::string& scenario, std::span<const Trajectory> sim,
                std::span<const Trajectory> ref, const std::string& out_dir) {
  fs::create_directories(out_dir);

  Bounds xy;
  for (const auto& set : {sim, ref})
    for (const Trajectory& tr : set)
      for (const auto& s : tr.samples) xy.include(s.position.x, s.position.y);
  if (xy.min_x > xy.max_x) xy.include(0, 0);

  SvgPlot overlay(xy, 800, 500);
  for (const Trajectory& tr : ref) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& s : tr.samples) pts.emplace_back(s.position.x, s.position.y);
    overlay.polyline(pts, tr.kind == UserKind::car ? "#d62728" : "#1f77b4", true);
  }
  for (const Trajectory& tr : sim) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& s : tr.samples) pts.emplace_back(s.position.x, s.position.y);
    overlay.polyline(pts, tr.kind == UserKind::car ? "#d62728" : "#1f77b4", false);
  }
  overlay.label(scenario + " trajectories (solid: simulated, dashed: reference)", 12, 16,
                "#333");
  overlay.label("cars red, pedestrians blue", 12, 30, "#333");
  write_file(fs::path(out_dir) / (scenario + "_trajectories.svg"), overlay.finish());

  Bounds tv;
  for (const auto& set : {sim, ref})
    for (const Trajectory& tr : set)
      for (const auto& s : tr.samples) tv.include(s.t, s.speed);
  if (tv.min_x > tv.max_x) tv.include(0, 0);

  SvgPlot speeds(tv, 800, 300);
  for (const Trajectory& tr : ref) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& s : tr.samples) pts.emplace_back(s.t, s.speed);
    speeds.polyline(pts, tr.kind == UserKind::car ? "#d62728" : "#1f77b4", true);
  }
  for (const Trajectory& tr : sim) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& s : tr.samples) pts.emplace_back(s.t, s.speed);
    speeds.polyline(pts, tr.kind == UserKind::car ? "#d62728" : "#1f77b4", false);
  }
  speeds.label(scenario + " speed traces (solid: simulated, dashed: reference)", 12, 16,
               "#333");
  write_file(fs::path(out_dir) / (scenario + "_speeds.svg"), speeds.finish());
}

void emit_report(const MetricsReport& report, const std::string& out_dir) {
  fs::create_directories(out_dir);

  // Population standard deviation (divide by n); resample interval recorded
  // for reproducibility.
  std::string metrics =
      "# aggregate speed statistics, std is population form, resample_interval=" +
      format_number(report.resample_interval) + "\n";
  metrics += "source_kind,mean_speed,std_speed\n";
  metrics += stats_row("simulated_car", report.sim_car);
  metrics += stats_row("simulated_pedestrian", report.sim_ped);
  metrics += stats_row("real_car", report.ref_car);
  metrics += stats_row("real_pedestrian", report.ref_ped);
  write_file(fs::path(out_dir) / "metrics.csv", metrics);

  std::string per =
      "scenario,avg_trajectory_distance_car,avg_trajectory_distance_ped,"
      "avg_speed_diff_car,avg_speed_diff_ped\n";
  for (const ScenarioMetrics& m : report.scenarios) {
    per += m.scenario + "," + format_number(m.avg_trajectory_distance_car) + "," +
           format_number(m.avg_trajectory_distance_ped) + "," +
           format_number(m.avg_speed_diff_car) + "," + format_number(m.avg_speed_diff_ped) +
           "\n";
  }
  write_file(fs::path(out_dir) / "per_scenario.csv", per);
}

std::vector<Trajectory> parse_trajectories_csv(const std::string& text) {
  std::vector<Trajectory> out;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      first = false;
      if (line.rfind("user_id", 0) == 0) continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() < 7) throw EvalError("bad trajectory row: " + line);

    auto it = std::find_if(out.begin(), out.end(),
                           [&](const Trajectory& t) { return t.user_id == cells[0]; });
    if (it == out.end()) {
      Trajectory tr;
      tr.user_id = cells[0];
      tr.kind = cells[1] == "car" ? UserKind::car : UserKind::pedestrian;
      out.push_back(std::move(tr));
      it = out.end() - 1;
    }
    TrajectorySample s;
    s.t = std::stod(cells[2]);
    s.position = {std::stod(cells[3]), std::stod(cells[4])};
    s.speed = std::stod(cells[5]);
    s.mode = cells[6];
    it->samples.push_back(std::move(s));
  }
  return out;
}

std::vector<Trajectory> load_trajectories_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw EvalError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_trajectories_csv(ss.str());
}

}  // namespace sharedspace
