// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>

#include "soccerdqn/world.hpp"

namespace sdqn::test {

/// Default phase, ball at rest at the center, robots spread along the touch
/// lines so that nothing touches anything.
inline WorldState quiet_world(const Config& cfg) {
  WorldState w = initial_world(cfg, Team::kHome);
  w.phase = GamePhase{PhaseKind::kDefault, Team::kHome, 0.0};
  for (std::size_t s = 0; s < kRobotCount; ++s) {
    auto& r = w.robots[s];
    const double x = -3.0 + 0.6 * static_cast<double>(s);
    r.pos = {x, s % 2 == 0 ? 2.0 : -2.0};
    r.heading = 0.0;
  }
  w.ball.pos = {0.0, 0.0};
  w.ball.vel = {};
  w.ball.reset_history();
  return w;
}

using Commands = std::array<WheelCommand, kRobotCount>;

}  // namespace sdqn::test
