#include <doctest.h>

#include "sharedspace/scenario.hpp"

using namespace sharedspace;

namespace {

const char* kValid = R"(# a small scenario
[meta]
name = demo
dt = 0.1
duration = 30
seed = 11

[obstacles]
wall = 0,8 40,8 40,9 0,9

[users]
car1 = car 0,0 40,0 0 5 14 radius=1.0
ped1 = pedestrian 20,-4 20,6 1.5 1.2 2.0 group=1 giveway=2

[forces]
v0 = 2.5
sigma = 0.4

[payoffs]
n = 2
m = 3
f1 = 0.5 1.5
base_deviate_decelerate = 1 0
)";

}  // namespace

TEST_CASE("a valid scenario parses with overrides applied") {
  const ScenarioSpec s = parse_scenario_text(kValid, "demo.scn");
  CHECK(s.name == "demo");
  CHECK(s.dt == doctest::Approx(0.1));
  CHECK(s.seed == 11);
  REQUIRE(s.obstacles.size() == 1);
  CHECK(s.obstacles[0].id == "wall");
  CHECK(s.obstacles[0].vertices.size() == 4);
  REQUIRE(s.users.size() == 2);
  CHECK(s.users[0].kind == UserKind::car);
  CHECK(s.users[0].radius == doctest::Approx(1.0));
  CHECK(s.users[1].in_group);
  CHECK(s.users[1].give_way_count == 2);
  CHECK(s.forces.v0 == doctest::Approx(2.5));
  CHECK(s.forces.sigma == doctest::Approx(0.4));
  CHECK(s.forces.u0 == doctest::Approx(10.0));  // untouched default
  CHECK(s.payoffs.factor_weights[0].if_true == doctest::Approx(0.5));
  CHECK(validate_scenario(s).ok());
}

TEST_CASE("parse errors carry the line number") {
  SUBCASE("unknown section") {
    try {
      parse_scenario_text("[meta]\nname = x\n[nope]\n", "f.scn");
      FAIL("expected throw");
    } catch (const ScenarioParseError& e) {
      CHECK(e.line_number == 3);
      CHECK(std::string(e.what()).find("f.scn:3") != std::string::npos);
    }
  }
  SUBCASE("malformed number") {
    try {
      parse_scenario_text("[meta]\ndt = fast\n", "f.scn");
      FAIL("expected throw");
    } catch (const ScenarioParseError& e) {
      CHECK(e.line_number == 2);
    }
  }
  SUBCASE("key outside a section") {
    CHECK_THROWS_AS(parse_scenario_text("dt = 0.1\n", "f.scn"), ScenarioParseError);
  }
  SUBCASE("user line with missing fields") {
    try {
      parse_scenario_text("[users]\nc = car 0,0 1,1\n", "f.scn");
      FAIL("expected throw");
    } catch (const ScenarioParseError& e) {
      CHECK(e.line_number == 2);
    }
  }
  SUBCASE("unknown keys are rejected, not ignored") {
    CHECK_THROWS_AS(parse_scenario_text("[forces]\nv9 = 1\n", "f.scn"), ScenarioParseError);
    CHECK_THROWS_AS(parse_scenario_text("[meta]\ncolor = red\n", "f.scn"),
                    ScenarioParseError);
  }
}

TEST_CASE("validation lists every violation with source lines") {
  const char* bad = R"([meta]
name = bad
dt = 0.1
duration = 30

[obstacles]
block = 10,-2 14,-2 14,2 10,2

[users]
u1 = pedestrian 12,0 30,0 0 1.2 2.0
u2 = pedestrian 0,0 12,0 -1 1.2 2.0
u2 = pedestrian 0,0 30,0 0 1.2 1.0
)";
  const ScenarioSpec s = parse_scenario_text(bad, "bad.scn");
  const ValidationReport r = validate_scenario(s);
  REQUIRE_FALSE(r.ok());
  // origin inside obstacle, negative entry time, duplicate id, max < desired
  CHECK(r.problems.size() >= 4);
  bool origin_line = false, entry_line = false;
  for (const auto& p : r.problems) {
    if (p.find("line 10") != std::string::npos && p.find("origin inside") != std::string::npos)
      origin_line = true;
    if (p.find("line 11") != std::string::npos && p.find("entry_time") != std::string::npos)
      entry_line = true;
  }
  CHECK(origin_line);
  CHECK(entry_line);
}

TEST_CASE("dump-config round-trips through the parser") {
  ScenarioSpec defaults;
  const std::string text = dump_config_text(defaults);
  const ScenarioSpec parsed = parse_scenario_text(text, "dump");
  CHECK(parsed.forces.v0 == doctest::Approx(defaults.forces.v0));
  CHECK(parsed.forces.stop_epsilon == doctest::Approx(defaults.forces.stop_epsilon));
  CHECK(parsed.payoffs.n_threshold == defaults.payoffs.n_threshold);
  for (int i = 0; i < 12; ++i) {
    CHECK(parsed.payoffs.factor_weights[i].if_true ==
          doctest::Approx(defaults.payoffs.factor_weights[i].if_true));
    CHECK(parsed.payoffs.factor_weights[i].if_false ==
          doctest::Approx(defaults.payoffs.factor_weights[i].if_false));
  }
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 2; ++c) {
      CHECK(parsed.payoffs.base_matrix[r][c].pedestrian ==
            doctest::Approx(defaults.payoffs.base_matrix[r][c].pedestrian));
      CHECK(parsed.payoffs.base_matrix[r][c].car ==
            doctest::Approx(defaults.payoffs.base_matrix[r][c].car));
    }
  CHECK(parsed.game_enabled == defaults.game_enabled);
}

TEST_CASE("config overrides route through the same parsers") {
  ScenarioSpec s = parse_scenario_text(kValid, "demo.scn");
  apply_override(s, "forces.v0", "9.75");
  CHECK(s.forces.v0 == doctest::Approx(9.75));
  apply_override(s, "payoffs.m", "7");
  CHECK(s.payoffs.m_threshold == 7);
  apply_override(s, "meta.dt", "0.05");
  CHECK(s.dt == doctest::Approx(0.05));
  CHECK_THROWS_AS(apply_override(s, "nosuch.key", "1"), ScenarioParseError);
  CHECK_THROWS_AS(apply_override(s, "plainkey", "1"), ScenarioParseError);
}
