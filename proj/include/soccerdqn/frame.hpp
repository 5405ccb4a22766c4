// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <numbers>

#include "soccerdqn/geometry.hpp"
#include "soccerdqn/team.hpp"

namespace sdqn {

// A team frame is the world rotated by 180 degrees for the Away team, so
// that every team sees its own goal at x = -L/2 and attacks toward +x.

constexpr Vec2 to_team_frame(Team t, Vec2 p) {
  return t == Team::kHome ? p : Vec2{-p.x, -p.y};
}

constexpr Vec2 to_world_frame(Team t, Vec2 p) { return to_team_frame(t, p); }

inline double heading_to_team_frame(Team t, double heading) {
  return t == Team::kHome ? wrap_angle(heading) : wrap_angle(heading + std::numbers::pi);
}

inline double heading_to_world_frame(Team t, double heading) {
  return heading_to_team_frame(t, heading);
}

}  // namespace sdqn
