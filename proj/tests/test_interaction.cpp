#include <doctest.h>

#include <cmath>
#include <random>

#include "sharedspace/interaction.hpp"

using namespace sharedspace;

namespace {

RoadUser make_user(const std::string& id, UserKind kind, Point2 pos, Vec2 vel) {
  RoadUser u;
  u.id = id;
  u.kind = kind;
  u.position = pos;
  u.velocity = vel;
  u.heading = vel.norm() > 1e-12 ? vel.normalized() : Vec2{1.0, 0.0};
  u.radius = kind == UserKind::car ? 1.0 : 0.3;
  return u;
}

// 1 ms-step numeric minimization of the pair distance under constant
// velocities, independent of the closed-form detector.
std::pair<double, double> dense_min_distance(const RoadUser& a, const RoadUser& b,
                                             double horizon) {
  double best = 1e18, best_t = 0.0;
  for (double t = 0.0; t <= horizon + 1e-12; t += 0.001) {
    const Point2 pa = a.position + a.velocity * t;
    const Point2 pb = b.position + b.velocity * t;
    const double d = distance(pa, pb);
    if (d < best) {
      best = d;
      best_t = t;
    }
  }
  return {best, best_t};
}

Conflict make_conflict(const RoadUser& a, const RoadUser& b) {
  const auto cs = detect_conflicts(std::vector<RoadUser>{a, b}, 4.0, 1e9);
  for (const Conflict& c : cs)
    if (c.first == a.id) return c;
  REQUIRE(false);
  return {};
}

}  // namespace

TEST_CASE("users moving apart produce no conflict") {
  const auto a = make_user("a", UserKind::pedestrian, {0, 0}, {-1, 0});
  const auto b = make_user("b", UserKind::pedestrian, {2, 0}, {1, 0});
  // Each is behind the other's back already, and they separate.
  const auto cs = detect_conflicts(std::vector<RoadUser>{a, b}, 4.0, 1.0);
  CHECK(cs.empty());
}

TEST_CASE("head-on approach: closest-approach time from kinematics") {
  const auto a = make_user("a", UserKind::car, {0, 0}, {1, 0});
  const auto b = make_user("b", UserKind::car, {4, 0}, {-1, 0});
  const auto cs = detect_conflicts(std::vector<RoadUser>{a, b}, 4.0, 1.0);
  REQUIRE(cs.size() == 2);  // symmetric risk, both see each other
  CHECK(cs[0].time_to_closest_approach == doctest::Approx(2.0));
  CHECK(cs[0].min_predicted_distance == doctest::Approx(0.0));
  CHECK(cs[0].distance == doctest::Approx(4.0));
  CHECK(cs[0].min_predicted_distance == doctest::Approx(cs[1].min_predicted_distance));
}

TEST_CASE("perpendicular crossing matches the dense-sampling oracle") {
  const auto a = make_user("a", UserKind::car, {0, 0}, {2, 0});
  const auto b = make_user("b", UserKind::pedestrian, {5, -3}, {0, 1.2});
  const auto cs = detect_conflicts(std::vector<RoadUser>{a, b}, 4.0, 2.0);
  REQUIRE(!cs.empty());
  const auto [oracle_d, oracle_t] = dense_min_distance(a, b, 4.0);
  const Conflict& c = cs.front();
  CHECK(c.min_predicted_distance == doctest::Approx(oracle_d).epsilon(1e-3));
  CHECK(c.time_to_closest_approach == doctest::Approx(oracle_t).epsilon(1e-2));
}

TEST_CASE("detector agrees with the oracle on random pairs") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> pos(-10.0, 10.0);
  std::uniform_real_distribution<double> vel(-3.0, 3.0);
  const double conflict_distance = 1.5;
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    auto a = make_user("a", UserKind::pedestrian, {pos(rng), pos(rng)}, {vel(rng), vel(rng)});
    auto b = make_user("b", UserKind::pedestrian, {pos(rng), pos(rng)}, {vel(rng), vel(rng)});
    a.fov_half_angle = 180.0;  // isolate the distance logic from view gating
    b.fov_half_angle = 180.0;
    const auto cs = detect_conflicts(std::vector<RoadUser>{a, b}, 4.0, conflict_distance);
    const auto [oracle_d, oracle_t] = dense_min_distance(a, b, 4.0);
    const double threshold = conflict_distance + a.radius + b.radius;
    if (std::abs(oracle_d - threshold) < 0.01) continue;  // margin band excluded
    ++checked;
    const bool expects = oracle_d < threshold;
    const bool has = !cs.empty();
    CHECK(expects == has);
  }
  CHECK(checked > 900);
}

TEST_CASE("classification taxonomy") {
  ClassifierConfig config;

  SUBCASE("pedestrian crossing right in front of a car: reactive stopping") {
    const auto car = make_user("car", UserKind::car, {0, 0}, {5, 0});
    const auto ped = make_user("ped", UserKind::pedestrian, {2, -0.1}, {0, 1.2});
    const Conflict c = make_conflict(car, ped);
    CHECK(c.theta_alpha <= 15.0);
    CHECK(classify(c, car, ped, config) == InteractionClass::ReactiveStopping);
  }
  SUBCASE("very close pedestrian ahead triggers reactive stopping even if static") {
    const auto car = make_user("car", UserKind::car, {0, 0}, {5, 0});
    const auto ped = make_user("ped", UserKind::pedestrian, {2.5, 0.0}, {0, 0});
    const Conflict c = make_conflict(car, ped);
    CHECK(classify(c, car, ped, config) == InteractionClass::ReactiveStopping);
  }
  SUBCASE("two cars aligned: following") {
    const auto follower = make_user("f", UserKind::car, {0, 0.2}, {4, 0.2});
    const auto leader = make_user("l", UserKind::car, {8, 0}, {4, 0.1});
    const Conflict c = make_conflict(follower, leader);
    CHECK(c.theta_alpha <= 10.0);
    CHECK(classify(c, follower, leader, config) == InteractionClass::CarFollowing);
  }
  SUBCASE("crossing car ahead at ~85 degrees: courtesy") {
    const auto car = make_user("car", UserKind::car, {0, 0}, {4, 0});
    const auto crossing = make_user("x", UserKind::car, {8, -1.4}, {0.35, 4});
    const Conflict c = make_conflict(car, crossing);
    REQUIRE((c.theta_alpha <= 20.0 || c.theta_alpha >= 340.0));
    REQUIRE((c.theta_beta > 260.0 && c.theta_beta < 290.0));
    CHECK(classify(c, car, crossing, config) == InteractionClass::Courtesy);
  }
  SUBCASE("theta_alpha = 12 degrees: courtesy-eligible but not following-eligible") {
    const auto car = make_user("car", UserKind::car, {0, 0}, {4, 0});
    const double rad = deg_to_rad(12.0);
    const Point2 bp{8 * std::cos(rad), 8 * std::sin(rad)};
    // Counterpart moves perpendicular to the line of sight.
    const Vec2 perp = Vec2{-std::sin(rad), std::cos(rad)} * 4.0;
    const auto other = make_user("x", UserKind::car, bp, perp);
    const Conflict c = make_conflict(car, other);
    CHECK(c.theta_alpha == doctest::Approx(12.0).epsilon(1e-6));
    CHECK(c.theta_beta == doctest::Approx(90.0).epsilon(1e-6));
    CHECK(classify(c, car, other, config) == InteractionClass::Courtesy);
  }
  SUBCASE("reactive stopping never fires for pedestrian alpha or car beta") {
    const auto ped = make_user("ped", UserKind::pedestrian, {0, 0}, {1.4, 0});
    const auto car = make_user("car", UserKind::car, {2, 0}, {0, 0});
    const Conflict c1 = make_conflict(ped, car);
    CHECK(classify(c1, ped, car, config) != InteractionClass::ReactiveStopping);

    const auto car_a = make_user("a", UserKind::car, {0, 0}, {5, 0});
    const auto car_b = make_user("b", UserKind::car, {2.4, 0}, {0.0, 0.1});
    const Conflict c2 = make_conflict(car_a, car_b);
    CHECK(classify(c2, car_a, car_b, config) != InteractionClass::ReactiveStopping);
  }
  SUBCASE("diagonal approach falls through to the game") {
    const auto car = make_user("car", UserKind::car, {0, 0}, {4, 0});
    const auto ped = make_user("ped", UserKind::pedestrian, {6, -4}, {-0.6, 1.0});
    const Conflict c = make_conflict(car, ped);
    REQUIRE((c.theta_alpha > 20.0 && c.theta_alpha < 340.0));
    CHECK(classify(c, car, ped, config) == InteractionClass::ComplexGame);
  }
  SUBCASE("classification is deterministic") {
    const auto car = make_user("car", UserKind::car, {0, 0}, {4, 0});
    const auto ped = make_user("ped", UserKind::pedestrian, {6, -4}, {-0.6, 1.0});
    const Conflict c = make_conflict(car, ped);
    const auto first = classify(c, car, ped, config);
    for (int i = 0; i < 10; ++i) CHECK(classify(c, car, ped, config) == first);
  }
  SUBCASE("courtesy can be gated off per counterpart kind") {
    config.courtesy_to_cars = false;
    const auto car = make_user("car", UserKind::car, {0, 0}, {4, 0});
    const auto crossing = make_user("x", UserKind::car, {8, -1.4}, {0.35, 4});
    const Conflict c = make_conflict(car, crossing);
    CHECK(classify(c, car, crossing, config) == InteractionClass::ComplexGame);
  }
}

TEST_CASE("nearest conflict selection and tie rules") {
  const auto u = make_user("u", UserKind::car, {0, 0}, {1, 0});

  SUBCASE("no conflicts: none") {
    CHECK_FALSE(nearest_conflict(u, std::vector<Conflict>{}).has_value());
  }
  SUBCASE("3 m beats 7 m") {
    std::vector<Conflict> cs(2);
    cs[0] = {"u", "far", 7.0, 0, 0, 1.0, 0.5};
    cs[1] = {"u", "near", 3.0, 0, 0, 1.0, 0.5};
    CHECK(nearest_conflict(u, cs)->second == "near");
  }
  SUBCASE("distance tie: smaller time to closest approach") {
    std::vector<Conflict> cs(2);
    cs[0] = {"u", "slow", 5.0, 0, 0, 2.0, 0.5};
    cs[1] = {"u", "fast", 5.0, 0, 0, 1.0, 0.5};
    CHECK(nearest_conflict(u, cs)->second == "fast");
  }
  SUBCASE("full tie: lower counterpart id") {
    std::vector<Conflict> cs(2);
    cs[0] = {"u", "zeta", 5.0, 0, 0, 1.0, 0.5};
    cs[1] = {"u", "alpha", 5.0, 0, 0, 1.0, 0.5};
    CHECK(nearest_conflict(u, cs)->second == "alpha");
  }
}

TEST_CASE("active interaction count") {
  const auto u = make_user("u", UserKind::car, {0, 0}, {1, 0});
  std::vector<Conflict> cs(3);
  cs[0] = {"u", "a", 1, 0, 0, 0, 0};
  cs[1] = {"u", "b", 2, 0, 0, 0, 0};
  cs[2] = {"x", "u", 3, 0, 0, 0, 0};  // someone else's view of us
  CHECK(count_active_interactions(u, std::vector<Conflict>{}) == 0);
  CHECK(count_active_interactions(u, cs) == 2);
}
