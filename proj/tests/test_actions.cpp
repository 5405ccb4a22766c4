// SPDX-License-Identifier: Apache-2.0
#include <chrono>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "soccerdqn/actions.hpp"
#include "soccerdqn/rng.hpp"
#include "support.hpp"

using namespace sdqn;

TEST_CASE("codec examples") {
  CHECK(decode_action({0}) == Dirs{Dir::kAbove, Dir::kAbove, Dir::kAbove, Dir::kAbove});
  CHECK(decode_action({255}) == Dirs{Dir::kRight, Dir::kRight, Dir::kRight, Dir::kRight});
  CHECK(decode_action({27}) == Dirs{Dir::kAbove, Dir::kBelow, Dir::kLeft, Dir::kRight});
  CHECK(encode_action({Dir::kAbove, Dir::kBelow, Dir::kLeft, Dir::kRight}).index == 27);
  CHECK(encode_action({Dir::kRight, Dir::kRight, Dir::kRight, Dir::kRight}).index == 255);
}

TEST_CASE("codec is a bijection on all indices") {
  for (int a = 0; a < kActionCount; ++a) {
    const Dirs d = decode_action({a});
    CHECK(encode_action(d).index == a);
    // Independent base-4 expansion, F1 most significant.
    int x = a;
    for (int i = 3; i >= 0; --i) {
      CHECK(static_cast<int>(d[static_cast<std::size_t>(i)]) == x % 4);
      x /= 4;
    }
  }
}

TEST_CASE("out-of-range indices are rejected") {
  CHECK_THROWS(decode_action({-1}));
  CHECK_THROWS(decode_action({256}));
}

TEST_CASE("resolve_targets offsets") {
  FieldConfig f;
  const TargetSet t = resolve_targets({Dir::kAbove, Dir::kBelow, Dir::kLeft, Dir::kRight},
                                      {1.0, 0.5}, 0.3, Team::kHome, f);
  CHECK(t[0].x == doctest::Approx(1.0));
  CHECK(t[0].y == doctest::Approx(0.8));
  CHECK(t[1].y == doctest::Approx(0.2));
  CHECK(t[2].x == doctest::Approx(0.7));
  CHECK(t[3].x == doctest::Approx(1.3));

  // Directions are team-relative: Right is toward the opponent goal.
  const TargetSet a = resolve_targets({Dir::kAbove, Dir::kBelow, Dir::kLeft, Dir::kRight},
                                      {1.0, 0.5}, 0.3, Team::kAway, f);
  CHECK(a[0].y == doctest::Approx(0.2));
  CHECK(a[3].x == doctest::Approx(0.7));
}

TEST_CASE("zero offset collapses to the ball and edges clamp") {
  FieldConfig f;
  for (int a = 0; a < kActionCount; a += 17) {
    for (const Vec2 t : resolve_targets(decode_action({a}), {0.0, 0.0}, 0.0, Team::kHome, f)) {
      CHECK(t == Vec2{0.0, 0.0});
    }
  }
  const TargetSet c = resolve_targets({Dir::kRight, Dir::kRight, Dir::kRight, Dir::kRight},
                                      {f.half_length() - 0.1, 0.0}, 0.3, Team::kHome, f);
  CHECK(c[0] == Vec2{f.half_length(), 0.0});
}

TEST_CASE("controller examples") {
  Config cfg;
  RobotState r;
  r.role = Role::kForward1;
  r.pos = {};
  r.heading = 0.0;
  const WheelCommand straight = target_to_wheels(r, {1.0, 0.0}, cfg.controller, cfg.physics);
  CHECK(straight.left == straight.right);
  CHECK(straight.left > 0.0);
  CHECK(target_to_wheels(r, r.pos, cfg.controller, cfg.physics) == WheelCommand{});
  const WheelCommand behind = target_to_wheels(r, {-1.0, 0.0}, cfg.controller, cfg.physics);
  CHECK(behind.left * behind.right < 0.0);
  CHECK(behind.left == -behind.right);
}

TEST_CASE("controller reaches random targets") {
  Config cfg;
  Rng rng(21);
  const std::size_t s = slot_of(Team::kHome, Role::kForward1);
  for (int trial = 0; trial < 50; ++trial) {
    WorldState w = test::quiet_world(cfg);
    // Park everyone else at the far touch line out of the way.
    for (std::size_t o = 0; o < kRobotCount; ++o) {
      if (o != s) w.robots[o].pos = {-3.5 + 0.7 * static_cast<double>(o), -2.25};
    }
    w.ball.pos = {0.0, -1.9};
    w.ball.reset_history();
    auto& r = w.robots[s];
    r.pos = {rng.uniform(-3.5, 3.5), rng.uniform(-1.5, 2.0)};
    r.heading = rng.uniform(-std::numbers::pi, std::numbers::pi);
    const Vec2 target{rng.uniform(-3.5, 3.5), rng.uniform(-1.5, 2.0)};
    bool arrived = false;
    for (int f = 0; f < 400 && !arrived; ++f) {
      test::Commands c{};
      c[s] = target_to_wheels(w.robots[s], target, cfg.controller, cfg.physics);
      w = step(w, c, cfg);
      arrived = distance(w.robots[s].pos, target) <= cfg.controller.arrive_tolerance;
    }
    CHECK(arrived);
  }
}
