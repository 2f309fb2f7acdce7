#include "sharedspace/scenario.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace sharedspace {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream iss(s);
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& tok, const std::string& src, int line,
                    const std::string& what) {
  try {
    size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ScenarioParseError(src, line, "expected a number for " + what + ", got '" + tok + "'");
  }
}

long long parse_int(const std::string& tok, const std::string& src, int line,
                    const std::string& what) {
  try {
    size_t pos = 0;
    const long long v = std::stoll(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ScenarioParseError(src, line, "expected an integer for " + what + ", got '" + tok + "'");
  }
}

bool parse_bool(const std::string& tok, const std::string& src, int line,
                const std::string& what) {
  if (tok == "true" || tok == "1" || tok == "yes") return true;
  if (tok == "false" || tok == "0" || tok == "no") return false;
  throw ScenarioParseError(src, line, "expected true/false for " + what + ", got '" + tok + "'");
}

Point2 parse_point(const std::string& tok, const std::string& src, int line,
                   const std::string& what) {
  const size_t comma = tok.find(',');
  if (comma == std::string::npos)
    throw ScenarioParseError(src, line, "expected x,y for " + what + ", got '" + tok + "'");
  return {parse_double(tok.substr(0, comma), src, line, what),
          parse_double(tok.substr(comma + 1), src, line, what)};
}

UserSpec parse_user_line(const std::string& id, const std::string& value,
                         const std::string& src, int line) {
  const auto toks = split_ws(value);
  if (toks.size() < 6)
    throw ScenarioParseError(
        src, line, "user needs: kind origin dest entry_time desired_speed max_speed");
  UserSpec u;
  u.id = id;
  u.source_line = line;
  if (toks[0] == "pedestrian")
    u.kind = UserKind::pedestrian;
  else if (toks[0] == "car")
    u.kind = UserKind::car;
  else
    throw ScenarioParseError(src, line, "unknown user kind '" + toks[0] + "'");
  u.origin = parse_point(toks[1], src, line, "origin");
  u.destination = parse_point(toks[2], src, line, "destination");
  u.entry_time = parse_double(toks[3], src, line, "entry_time");
  u.desired_speed = parse_double(toks[4], src, line, "desired_speed");
  u.max_speed = parse_double(toks[5], src, line, "max_speed");
  for (size_t i = 6; i < toks.size(); ++i) {
    const size_t eq = toks[i].find('=');
    if (eq == std::string::npos)
      throw ScenarioParseError(src, line, "expected key=value, got '" + toks[i] + "'");
    const std::string key = toks[i].substr(0, eq);
    const std::string val = toks[i].substr(eq + 1);
    if (key == "radius")
      u.radius = parse_double(val, src, line, "radius");
    else if (key == "giveway")
      u.give_way_count = static_cast<int>(parse_int(val, src, line, "giveway"));
    else if (key == "tau")
      u.relaxation_time = parse_double(val, src, line, "tau");
    else if (key == "fov")
      u.fov_half_angle = parse_double(val, src, line, "fov");
    else if (key == "group")
      u.in_group = parse_bool(val, src, line, "group");
    else
      throw ScenarioParseError(src, line, "unknown user attribute '" + key + "'");
  }
  return u;
}

void apply_meta(ScenarioSpec& s, const std::string& key, const std::string& value,
                const std::string& src, int line) {
  if (key == "name")
    s.name = value;
  else if (key == "dt")
    s.dt = parse_double(value, src, line, key);
  else if (key == "duration")
    s.duration = parse_double(value, src, line, key);
  else if (key == "seed")
    s.seed = static_cast<unsigned long long>(parse_int(value, src, line, key));
  else if (key == "game_enabled")
    s.game_enabled = parse_bool(value, src, line, key);
  else if (key == "horizon")
    s.horizon = parse_double(value, src, line, key);
  else if (key == "conflict_distance")
    s.conflict_distance = parse_double(value, src, line, key);
  else if (key == "courtesy_to_pedestrians")
    s.courtesy_to_pedestrians = parse_bool(value, src, line, key);
  else if (key == "courtesy_to_cars")
    s.courtesy_to_cars = parse_bool(value, src, line, key);
  else if (key == "clearance_pedestrian")
    s.clearance_pedestrian = parse_double(value, src, line, key);
  else if (key == "clearance_car")
    s.clearance_car = parse_double(value, src, line, key);
  else if (key == "arrival_radius")
    s.arrival_radius = parse_double(value, src, line, key);
  else if (key == "car_turn_rate")
    s.car_turn_rate_deg = parse_double(value, src, line, key);
  else
    throw ScenarioParseError(src, line, "unknown meta key '" + key + "'");
}

void apply_force(ForceParams& f, const std::string& key, const std::string& value,
                 const std::string& src, int line) {
  const double v = parse_double(value, src, line, key);
  if (key == "v0")
    f.v0 = v;
  else if (key == "sigma")
    f.sigma = v;
  else if (key == "v0_car")
    f.v0_car = v;
  else if (key == "sigma_car")
    f.sigma_car = v;
  else if (key == "u0")
    f.u0 = v;
  else if (key == "range")
    f.range = v;
  else if (key == "d_min_vehicle")
    f.d_min_vehicle = v;
  else if (key == "stop_epsilon")
    f.stop_epsilon = v;
  else if (key == "conflict_close_distance")
    f.conflict_close_distance = v;
  else
    throw ScenarioParseError(src, line, "unknown forces key '" + key + "'");
}

int base_row(const std::string& name, const std::string& src, int line) {
  if (name == "continue") return 0;
  if (name == "decelerate") return 1;
  if (name == "deviate") return 2;
  throw ScenarioParseError(src, line, "unknown pedestrian action '" + name + "'");
}

void apply_payoff(PayoffConfig& p, const std::string& key, const std::string& value,
                  const std::string& src, int line) {
  if (key == "n") {
    p.n_threshold = static_cast<int>(parse_int(value, src, line, key));
    return;
  }
  if (key == "m") {
    p.m_threshold = static_cast<int>(parse_int(value, src, line, key));
    return;
  }
  if (key == "s_normal") {
    p.s_normal = parse_double(value, src, line, key);
    return;
  }
  const auto toks = split_ws(value);
  if (key.size() >= 2 && key[0] == 'f' &&
      key.find_first_not_of("0123456789", 1) == std::string::npos) {
    const int idx = static_cast<int>(parse_int(key.substr(1), src, line, key));
    if (idx < 1 || idx > 12)
      throw ScenarioParseError(src, line, "factor index out of range in '" + key + "'");
    if (toks.size() != 2)
      throw ScenarioParseError(src, line, key + " needs two values: if_true if_false");
    p.factor_weights[idx - 1] = {parse_double(toks[0], src, line, key),
                                 parse_double(toks[1], src, line, key)};
    return;
  }
  if (key.rfind("base_", 0) == 0) {
    const std::string rest = key.substr(5);
    const size_t us = rest.find('_');
    if (us == std::string::npos)
      throw ScenarioParseError(src, line, "base key must be base_<ped>_<car>");
    const int row = base_row(rest.substr(0, us), src, line);
    const std::string car_name = rest.substr(us + 1);
    int col = 0;
    if (car_name == "continue")
      col = 0;
    else if (car_name == "decelerate")
      col = 1;
    else
      throw ScenarioParseError(src, line, "unknown car action '" + car_name + "'");
    if (toks.size() != 2)
      throw ScenarioParseError(src, line, key + " needs two values: ped car");
    p.base_matrix[row][col] = {parse_double(toks[0], src, line, key),
                               parse_double(toks[1], src, line, key)};
    return;
  }
  throw ScenarioParseError(src, line, "unknown payoffs key '" + key + "'");
}

}  // namespace

ScenarioSpec parse_scenario_text(const std::string& text, const std::string& source_name) {
  ScenarioSpec spec;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ScenarioParseError(source_name, line_no, "unterminated section header");
      section = line.substr(1, line.size() - 2);
      if (section != "meta" && section != "obstacles" && section != "users" &&
          section != "forces" && section != "payoffs")
        throw ScenarioParseError(source_name, line_no, "unknown section [" + section + "]");
      continue;
    }

    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ScenarioParseError(source_name, line_no, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ScenarioParseError(source_name, line_no, "empty key");
    if (section.empty())
      throw ScenarioParseError(source_name, line_no, "key outside any section");

    if (section == "meta") {
      apply_meta(spec, key, value, source_name, line_no);
    } else if (section == "obstacles") {
      ObstaclePolygon poly;
      poly.id = key;
      for (const std::string& tok : split_ws(value))
        poly.vertices.push_back(parse_point(tok, source_name, line_no, "obstacle vertex"));
      spec.obstacles.push_back(std::move(poly));
    } else if (section == "users") {
      spec.users.push_back(parse_user_line(key, value, source_name, line_no));
    } else if (section == "forces") {
      apply_force(spec.forces, key, value, source_name, line_no);
    } else if (section == "payoffs") {
      apply_payoff(spec.payoffs, key, value, source_name, line_no);
    }
  }
  return spec;
}

ScenarioSpec load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str(), path);
}

void apply_override(ScenarioSpec& spec, const std::string& dotted_key,
                    const std::string& value) {
  const size_t dot = dotted_key.find('.');
  if (dot == std::string::npos)
    throw ScenarioParseError("<override>", 0, "expected section.key, got '" + dotted_key + "'");
  const std::string section = dotted_key.substr(0, dot);
  const std::string key = dotted_key.substr(dot + 1);
  if (section == "meta")
    apply_meta(spec, key, value, "<override>", 0);
  else if (section == "forces")
    apply_force(spec.forces, key, value, "<override>", 0);
  else if (section == "payoffs")
    apply_payoff(spec.payoffs, key, value, "<override>", 0);
  else
    throw ScenarioParseError("<override>", 0, "cannot override section '" + section + "'");
}

std::string ValidationReport::to_string() const {
  std::string out;
  for (const auto& p : problems) {
    out += p;
    out += '\n';
  }
  return out;
}

ValidationReport validate_scenario(const ScenarioSpec& spec) {
  ValidationReport r;
  const auto add = [&](int line, const std::string& msg) {
    if (line > 0)
      r.problems.push_back("line " + std::to_string(line) + ": " + msg);
    else
      r.problems.push_back(msg);
  };

  if (spec.dt <= 0.0) add(0, "meta: dt must be > 0");
  if (spec.duration <= 0.0) add(0, "meta: duration must be > 0");
  if (spec.horizon <= 0.0) add(0, "meta: horizon must be > 0");
  if (!spec.forces.valid()) add(0, "forces: all parameters must be positive");

  try {
    spec.payoffs.validate();
  } catch (const GameError& e) {
    add(0, e.what());
  }

  for (const auto& obs : spec.obstacles) {
    try {
      obs.validate();
    } catch (const PolygonError& e) {
      add(0, e.what());
    }
  }

  std::map<std::string, int> seen;
  for (const UserSpec& u : spec.users) {
    if (seen.count(u.id))
      add(u.source_line, "duplicate user id '" + u.id + "'");
    seen[u.id] = 1;
    if (u.entry_time < 0.0) add(u.source_line, u.id + ": entry_time must be >= 0");
    if (u.desired_speed <= 0.0) add(u.source_line, u.id + ": desired_speed must be > 0");
    if (u.max_speed < u.desired_speed)
      add(u.source_line, u.id + ": max_speed must be >= desired_speed");
    if (u.give_way_count && *u.give_way_count < 0)
      add(u.source_line, u.id + ": giveway must be >= 0");
    if (!u.origin.finite() || !u.destination.finite())
      add(u.source_line, u.id + ": non-finite origin/destination");
    for (const auto& obs : spec.obstacles) {
      if (obs.vertices.size() < 3) continue;
      if (obs.contains_strict(u.origin))
        add(u.source_line, u.id + ": origin inside obstacle '" + obs.id + "'");
      if (obs.contains_strict(u.destination))
        add(u.source_line, u.id + ": destination inside obstacle '" + obs.id + "'");
    }
  }
  return r;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

std::string dump_config_text(const ScenarioSpec& s) {
  std::ostringstream out;
  out << "[meta]\n";
  out << "dt = " << fmt(s.dt) << "\n";
  out << "duration = " << fmt(s.duration) << "\n";
  out << "seed = " << s.seed << "\n";
  out << "game_enabled = " << (s.game_enabled ? "true" : "false") << "\n";
  out << "horizon = " << fmt(s.horizon) << "\n";
  out << "conflict_distance = " << fmt(s.conflict_distance) << "\n";
  out << "courtesy_to_pedestrians = " << (s.courtesy_to_pedestrians ? "true" : "false")
      << "\n";
  out << "courtesy_to_cars = " << (s.courtesy_to_cars ? "true" : "false") << "\n";
  out << "clearance_pedestrian = " << fmt(s.clearance_pedestrian) << "\n";
  out << "clearance_car = " << fmt(s.clearance_car) << "\n";
  out << "arrival_radius = " << fmt(s.arrival_radius) << "\n";
  out << "car_turn_rate = " << fmt(s.car_turn_rate_deg) << "\n";
  out << "\n[forces]\n";
  out << "v0 = " << fmt(s.forces.v0) << "\n";
  out << "sigma = " << fmt(s.forces.sigma) << "\n";
  out << "v0_car = " << fmt(s.forces.v0_car) << "\n";
  out << "sigma_car = " << fmt(s.forces.sigma_car) << "\n";
  out << "u0 = " << fmt(s.forces.u0) << "\n";
  out << "range = " << fmt(s.forces.range) << "\n";
  out << "d_min_vehicle = " << fmt(s.forces.d_min_vehicle) << "\n";
  out << "stop_epsilon = " << fmt(s.forces.stop_epsilon) << "\n";
  out << "conflict_close_distance = " << fmt(s.forces.conflict_close_distance) << "\n";
  out << "\n[payoffs]\n";
  out << "n = " << s.payoffs.n_threshold << "\n";
  out << "m = " << s.payoffs.m_threshold << "\n";
  out << "s_normal = " << fmt(s.payoffs.s_normal) << "\n";
  for (int i = 0; i < 12; ++i) {
    out << "f" << (i + 1) << " = " << fmt(s.payoffs.factor_weights[i].if_true) << " "
        << fmt(s.payoffs.factor_weights[i].if_false) << "\n";
  }
  static const char* rows[] = {"continue", "decelerate", "deviate"};
  static const char* cols[] = {"continue", "decelerate"};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 2; ++c)
      out << "base_" << rows[r] << "_" << cols[c] << " = "
          << fmt(s.payoffs.base_matrix[r][c].pedestrian) << " "
          << fmt(s.payoffs.base_matrix[r][c].car) << "\n";
  return out.str();
}

}  // namespace sharedspace
