// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "soccerdqn/error.hpp"
#include "soccerdqn/rng.hpp"
#include "support.hpp"

using namespace sdqn;
using sdqn::test::Commands;
using sdqn::test::quiet_world;

TEST_CASE("straight drive with equal wheels") {
  Config cfg;
  WorldState w = quiet_world(cfg);
  const std::size_t s = slot_of(Team::kHome, Role::kForward1);
  w.robots[s].pos = {0.0, 1.0};
  Commands c{};
  c[s] = {1.0, 1.0};
  const WorldState n = step(w, c, cfg);
  CHECK(n.robots[s].pos.x == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(n.robots[s].pos.y == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(n.robots[s].heading == 0.0);
}

TEST_CASE("opposite wheels rotate in place") {
  Config cfg;
  WorldState w = quiet_world(cfg);
  const std::size_t s = slot_of(Team::kHome, Role::kForward1);
  w.robots[s].pos = {0.0, 1.0};
  const double v = 0.6;
  Commands c{};
  c[s] = {-v, v};  // right wheel forward turns counter-clockwise
  const WorldState n = step(w, c, cfg);
  CHECK(n.robots[s].pos.x == doctest::Approx(0.0));
  CHECK(n.robots[s].pos.y == doctest::Approx(1.0));
  CHECK(n.robots[s].heading == doctest::Approx(cfg.field.dt * 2.0 * v / cfg.physics.axle_width));
  c[s] = {v, -v};
  CHECK(step(w, c, cfg).robots[s].heading ==
        doctest::Approx(-cfg.field.dt * 2.0 * v / cfg.physics.axle_width));
}

TEST_CASE("zero commands leave the world unchanged apart from clocks") {
  Config cfg;
  const WorldState w = quiet_world(cfg);
  const WorldState n = step(w, Commands{}, cfg);
  CHECK(n.frame == w.frame + 1);
  CHECK(n.time == doctest::Approx(cfg.field.dt));
  for (std::size_t s = 0; s < kRobotCount; ++s) {
    CHECK(n.robots[s].pos == w.robots[s].pos);
    CHECK(n.robots[s].heading == w.robots[s].heading);
  }
  CHECK(n.ball.pos == w.ball.pos);
  CHECK(n.ball.vel == w.ball.vel);
}

TEST_CASE("wrong command count is a contract violation") {
  Config cfg;
  const WorldState w = quiet_world(cfg);
  std::array<WheelCommand, 9> nine{};
  try {
    (void)step(w, nine, cfg);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kContractViolation);
  }
}

TEST_CASE("ball history shifts and friction only slows the ball") {
  Config cfg;
  WorldState w = quiet_world(cfg);
  w.ball.vel = {2.0, 0.5};
  Vec2 p0 = w.ball.pos;
  WorldState a = step(w, Commands{}, cfg);
  WorldState b = step(a, Commands{}, cfg);
  CHECK(b.ball.history[0] == b.ball.pos);
  CHECK(b.ball.history[1] == a.ball.pos);
  CHECK(b.ball.history[2] == p0);
  double prev = w.ball.vel.norm();
  WorldState cur = w;
  for (int i = 0; i < 40; ++i) {
    cur = step(cur, Commands{}, cfg);
    const double speed = cur.ball.vel.norm();
    CHECK(speed <= prev);
    prev = speed;
  }
}

TEST_CASE("deadlock timer grows by dt below the threshold and resets above") {
  Config cfg;
  WorldState w = quiet_world(cfg);
  WorldState n = step(w, Commands{}, cfg);
  CHECK(n.deadlock_timer == doctest::Approx(cfg.field.dt));
  // Kept rolling at 1 m/s, the ball clears the threshold within the window.
  for (int i = 0; i < 5; ++i) {
    n.ball.vel = {1.0, 0.0};
    n = step(n, Commands{}, cfg);
  }
  CHECK(n.deadlock_timer == 0.0);
}

namespace {

// Ball released at `p` rolling along +x at `v` m/s, left to friction.
WorldState roll(const Config& cfg, Vec2 p, double v, int frames) {
  WorldState w = quiet_world(cfg);
  w.ball.pos = p;
  w.ball.vel = {v, 0.0};
  w.ball.reset_history();
  for (int i = 0; i < frames; ++i) w = step(w, Commands{}, cfg);
  return w;
}

}  // namespace

TEST_CASE("deadlock fires at exactly 4 s below 0.4 m/s") {
  Config cfg;
  const Vec2 corner{3.0, cfg.field.half_width() - 0.3};
  const int frames_4s = static_cast<int>(std::lround(4.0 / cfg.field.dt));
  CHECK_FALSE(detect_deadlock(roll(cfg, corner, 0.39, frames_4s - 2), cfg).has_value());  // 3.9 s
  CHECK_FALSE(detect_deadlock(roll(cfg, corner, 0.39, frames_4s - 1), cfg).has_value());
  const auto end = roll(cfg, corner, 0.39, frames_4s);
  const auto kind = detect_deadlock(end, cfg);
  REQUIRE(kind.has_value());
  CHECK(*kind == DeadlockKind::kCorner);
  CHECK(end.deadlock_timer == doctest::Approx(4.0));
}

TEST_CASE("a ball kept above 0.4 m/s never deadlocks") {
  Config cfg;
  WorldState w = quiet_world(cfg);
  w.ball.pos = {-1.5, 0.5};
  w.ball.reset_history();
  for (int i = 0; i < 100; ++i) {
    w.ball.vel = {0.45, 0.0};
    w = step(w, Commands{}, cfg);
    CHECK_FALSE(detect_deadlock(w, cfg).has_value());
  }
}

TEST_CASE("a ball jostled in place deadlocks despite its velocity") {
  Config cfg;
  WorldState w = quiet_world(cfg);
  w.ball.pos = {-3.5, -1.8};
  w.ball.reset_history();
  const int frames_4s = static_cast<int>(std::lround(4.0 / cfg.field.dt));
  // Back and forth by 3.5 cm every frame, as when trapped between robots.
  for (int i = 0; i < frames_4s; ++i) {
    w.ball.vel = {0.0, i % 2 == 0 ? 0.7 : -0.7};
    w = step(w, Commands{}, cfg);
  }
  CHECK(w.ball.vel.norm() > 0.4);
  const auto kind = detect_deadlock(w, cfg);
  REQUIRE(kind.has_value());
  CHECK(*kind == DeadlockKind::kCorner);
}

TEST_CASE("deadlock kind follows the area holding the ball") {
  Config cfg;
  WorldState w = quiet_world(cfg);
  w.deadlock_timer = 4.0;
  w.ball.pos = {3.3, 0.2};
  CHECK(detect_deadlock(w, cfg) == DeadlockKind::kPenaltyArea);
  w.ball.pos = {-3.3, -0.2};
  CHECK(detect_deadlock(w, cfg) == DeadlockKind::kPenaltyArea);
  w.ball.pos = {0.5, 0.5};
  CHECK(detect_deadlock(w, cfg) == DeadlockKind::kOther);
  w.ball.pos = {-3.5, -2.0};
  CHECK(detect_deadlock(w, cfg) == DeadlockKind::kCorner);
  w.phase.kind = PhaseKind::kKickoff;
  CHECK_FALSE(detect_deadlock(w, cfg).has_value());
}

TEST_CASE("penalty-area deadlock branches on the ball owner") {
  Config cfg;
  WorldState w = quiet_world(cfg);
  w.ball.pos = {3.3, 0.2};  // away penalty area
  w.owner = Owner::kHome;
  WorldState n = apply_deadlock(w, DeadlockKind::kPenaltyArea, cfg);
  CHECK(n.phase.kind == PhaseKind::kPenaltyKick);
  CHECK(n.phase.team == Team::kHome);

  w.ball.pos = {-3.3, 0.2};  // home penalty area, own ball
  n = apply_deadlock(w, DeadlockKind::kPenaltyArea, cfg);
  CHECK(n.phase.kind == PhaseKind::kGoalKick);
  CHECK(n.phase.team == Team::kHome);

  w.owner = Owner::kAway;  // away attacks the home area
  n = apply_deadlock(w, DeadlockKind::kPenaltyArea, cfg);
  CHECK(n.phase.kind == PhaseKind::kPenaltyKick);
  CHECK(n.phase.team == Team::kAway);
}

TEST_CASE("corner deadlock awards a corner kick to the owner") {
  Config cfg;
  WorldState w = quiet_world(cfg);
  w.ball.pos = {3.6, 2.0};
  w.owner = Owner::kAway;
  const WorldState n = apply_deadlock(w, DeadlockKind::kCorner, cfg);
  CHECK(n.phase.kind == PhaseKind::kCornerKick);
  CHECK(n.phase.team == Team::kAway);
  CHECK(cfg.field.in_corner_region(n.ball.pos));
  CHECK(n.deadlock_timer == 0.0);
}

TEST_CASE("other deadlock relocates the ball to the nearest point") {
  Config cfg;
  WorldState w = quiet_world(cfg);
  w.ball.pos = {0.1, 0.1};
  const WorldState n = apply_deadlock(w, DeadlockKind::kOther, cfg);
  CHECK(n.ball.pos == Vec2{1.5, 1.0});
  CHECK(n.phase.kind == PhaseKind::kRelocation);

  // Oracle: brute-force nearest point over random positions.
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    w.ball.pos = {rng.uniform(-3.9, 3.9), rng.uniform(-2.3, 2.3)};
    const Vec2 got = apply_deadlock(w, DeadlockKind::kOther, cfg).ball.pos;
    for (const Vec2 p : cfg.field.relocation_points) {
      CHECK(distance(got, w.ball.pos) <= distance(p, w.ball.pos));
    }
  }
}

TEST_CASE("relocation pause then play resumes") {
  Config cfg;
  WorldState w = quiet_world(cfg);
  w = apply_deadlock(w, DeadlockKind::kOther, cfg);
  const std::size_t s = slot_of(Team::kHome, Role::kForward1);
  Commands c{};
  c[s] = {1.0, 1.0};
  const Vec2 start = w.robots[s].pos;
  const int pause = static_cast<int>(std::lround(cfg.physics.relocation_pause / cfg.field.dt));
  for (int i = 0; i < pause - 1; ++i) w = step(w, c, cfg);
  CHECK(w.phase.kind == PhaseKind::kRelocation);
  CHECK(w.robots[s].pos == start);
  w = step(w, c, cfg);
  CHECK(w.phase.kind == PhaseKind::kDefault);
}

TEST_CASE("fall removal at 3 s and return at 5 s") {
  Config cfg;
  WorldState w = quiet_world(cfg);
  const std::size_t s = slot_of(Team::kAway, Role::kDefender1);
  inject_fall(w, s);
  const int fall_frames = static_cast<int>(std::lround(cfg.field.fall_timeout / cfg.field.dt));
  for (int i = 0; i < fall_frames - 2; ++i) w = handle_falls(step(w, Commands{}, cfg), cfg);
  w = handle_falls(step(w, Commands{}, cfg), cfg);  // 2.95 s
  CHECK(w.robots[s].active);
  CHECK(w.robots[s].fallen_for == doctest::Approx(2.95));
  w = handle_falls(step(w, Commands{}, cfg), cfg);  // 3.0 s
  CHECK_FALSE(w.robots[s].active);
  CHECK(w.robots[s].inactive_for == 0.0);
  CHECK_FALSE(cfg.field.bounds().contains(w.robots[s].pos));

  const int back_frames = static_cast<int>(std::lround(cfg.field.inactive_duration / cfg.field.dt));
  for (int i = 0; i < back_frames - 1; ++i) w = handle_falls(step(w, Commands{}, cfg), cfg);
  CHECK_FALSE(w.robots[s].active);
  w = handle_falls(step(w, Commands{}, cfg), cfg);
  CHECK(w.robots[s].active);
  const auto home = formation_slot(cfg.field, Team::kAway, Role::kDefender1, false);
  CHECK(w.robots[s].pos == home.pos);
  CHECK(w.robots[s].heading == doctest::Approx(home.heading));
}

TEST_CASE("fallen for 2.9 s is left alone") {
  Config cfg;
  WorldState w = quiet_world(cfg);
  inject_fall(w, 3);
  w.robots[3].fallen_for = 2.9;
  const WorldState n = handle_falls(w, cfg);
  CHECK(n.robots[3].active);
  CHECK(n.robots[3].fallen);
  CHECK(n.robots[3].pos == w.robots[3].pos);
}

TEST_CASE("goal detection inside and outside the mouth") {
  Config cfg;
  WorldState w = quiet_world(cfg);
  const double eps = 1e-3;
  w.ball.pos = {cfg.field.half_length() + eps, 0.0};
  auto g = check_goal(w, cfg);
  REQUIRE(g.scorer.has_value());
  CHECK(*g.scorer == Team::kHome);
  CHECK(g.world.score == std::array<int, 2>{1, 0});
  CHECK(g.world.phase.kind == PhaseKind::kKickoff);
  CHECK(g.world.phase.team == Team::kAway);
  CHECK(g.world.ball.pos == Vec2{0.0, 0.0});

  w.ball.pos = {-cfg.field.half_length() - eps, 0.1};
  g = check_goal(w, cfg);
  REQUIRE(g.scorer.has_value());
  CHECK(*g.scorer == Team::kAway);

  w.ball.pos = {cfg.field.half_length() + eps, 0.5 * cfg.field.goal_width + 0.1};
  CHECK_FALSE(check_goal(w, cfg).scorer.has_value());
  w.ball.pos = {0.0, 0.0};
  CHECK_FALSE(check_goal(w, cfg).scorer.has_value());
}

TEST_CASE("a ball driven through the mouth scores under advance") {
  Config cfg;
  WorldState w = quiet_world(cfg);
  w.ball.pos = {3.5, 0.0};
  w.ball.vel = {3.0, 0.0};
  w.ball.reset_history();
  std::optional<Team> scored;
  for (int i = 0; i < 20 && !scored; ++i) scored = advance(w, Commands{}, cfg).goal;
  REQUIRE(scored.has_value());
  CHECK(*scored == Team::kHome);
  CHECK(w.score[0] == 1);
}

TEST_CASE("kickoff lets only the kicking F2 move") {
  Config cfg;
  WorldState w = initial_world(cfg, Team::kAway);
  Commands c{};
  c.fill({1.0, 1.0});
  // Keep the kicker clear of the ball for one frame by turning it.
  const std::size_t kicker = slot_of(Team::kAway, Role::kForward2);
  c[kicker] = {0.5, 1.0};
  const WorldState n = step(w, c, cfg);
  for (std::size_t s = 0; s < kRobotCount; ++s) {
    if (s == kicker) {
      CHECK_FALSE(n.robots[s].pos == w.robots[s].pos);
    } else {
      CHECK(n.robots[s].pos == w.robots[s].pos);
      CHECK(n.robots[s].heading == w.robots[s].heading);
    }
  }
}

TEST_CASE("set piece times out into the default phase") {
  Config cfg;
  WorldState w = initial_world(cfg, Team::kHome);
  const int frames = static_cast<int>(std::lround(cfg.physics.set_piece_timeout / cfg.field.dt));
  for (int i = 0; i < frames - 1; ++i) w = step(w, Commands{}, cfg);
  CHECK(w.phase.kind == PhaseKind::kKickoff);
  w = step(w, Commands{}, cfg);
  CHECK(w.phase.kind == PhaseKind::kDefault);
}

TEST_CASE("penalty area counts") {
  Config cfg;
  WorldState w = quiet_world(cfg);
  const Rect home_area = cfg.field.penalty_area(Team::kHome);
  auto put = [&](Team t, Role r, Vec2 p, std::int64_t entered) {
    auto& robot = w.robot(t, r);
    robot.pos = p;
    robot.area_entered_frame = entered;
  };
  put(Team::kHome, Role::kGoalkeeper, {-3.7, 0.0}, 1);
  put(Team::kHome, Role::kDefender1, {-3.3, 0.8}, 2);
  put(Team::kHome, Role::kDefender2, {-3.3, -0.8}, 3);
  auto f = enforce_penalty_area_counts(w, cfg);
  CHECK(f.events.empty());

  put(Team::kHome, Role::kForward1, {-3.0, 0.3}, 9);
  f = enforce_penalty_area_counts(w, cfg);
  REQUIRE(f.events.size() == 1);
  CHECK(f.events[0].slot == slot_of(Team::kHome, Role::kForward1));
  CHECK_FALSE(f.events[0].attacking);
  CHECK_FALSE(home_area.contains(f.world.robot(Team::kHome, Role::kForward1).pos));

  WorldState a = quiet_world(cfg);
  a.robot(Team::kHome, Role::kForward1).pos = {3.3, 0.5};
  a.robot(Team::kHome, Role::kForward2).pos = {3.3, -0.5};
  CHECK(enforce_penalty_area_counts(a, cfg).events.empty());
  a.robot(Team::kHome, Role::kDefender1).pos = {3.0, 0.0};
  const auto fa = enforce_penalty_area_counts(a, cfg);
  REQUIRE(fa.events.size() == 1);
  CHECK(fa.events[0].attacking);
}

TEST_CASE("random play stays contained and is deterministic") {
  Config cfg;
  auto run = [&](std::uint64_t seed) {
    Rng rng(seed);
    WorldState w = initial_world(cfg, Team::kHome);
    std::vector<WorldState> trace;
    for (int f = 0; f < 3000; ++f) {
      Commands c{};
      for (auto& cmd : c) cmd = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
      advance(w, c, cfg);
      const Rect b = cfg.field.bounds();
      for (const auto& r : w.robots) {
        if (r.active) CHECK(b.contains(r.pos));
      }
      const bool in_mouth = std::abs(w.ball.pos.y) < 0.5 * cfg.field.goal_width;
      CHECK(std::abs(w.ball.pos.y) <= cfg.field.half_width());
      if (!in_mouth) CHECK(std::abs(w.ball.pos.x) <= cfg.field.half_length());
      trace.push_back(w);
    }
    return trace;
  };
  const auto a = run(5);
  const auto b = run(5);
  REQUIRE(a.size() == b.size());
  bool same = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t s = 0; s < kRobotCount; ++s) {
      same = same && a[i].robots[s].pos == b[i].robots[s].pos &&
             a[i].robots[s].heading == b[i].robots[s].heading;
    }
    same = same && a[i].ball.pos == b[i].ball.pos && a[i].phase == b[i].phase;
  }
  CHECK(same);
}

TEST_CASE("set pieces are only entered from the default phase") {
  Config cfg;
  Rng rng(9);
  WorldState w = initial_world(cfg, Team::kHome);
  for (int f = 0; f < 6000; ++f) {
    Commands c{};
    for (auto& cmd : c) cmd = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
    const PhaseKind before = w.phase.kind;
    const auto ev = advance(w, c, cfg);
    if (ev.deadlock) CHECK(before == PhaseKind::kDefault);
    if (w.phase.kind == PhaseKind::kKickoff && before != PhaseKind::kKickoff) CHECK(ev.goal.has_value());
  }
}
