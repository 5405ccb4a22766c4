// SPDX-License-Identifier: Apache-2.0
#include "soccerdqn/actions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "soccerdqn/error.hpp"
#include "soccerdqn/frame.hpp"

namespace sdqn {

Dirs decode_action(JointAction a) {
  require(a.index >= 0 && a.index < kActionCount, "decode_action: index outside [0, 256)");
  Dirs d{};
  int rest = a.index;
  for (int i = 3; i >= 0; --i) {
    d[static_cast<std::size_t>(i)] = static_cast<Dir>(rest % 4);
    rest /= 4;
  }
  return d;
}

JointAction encode_action(const Dirs& dirs) {
  int index = 0;
  for (const Dir d : dirs) index = index * 4 + static_cast<int>(d);
  return {index};
}

TargetSet resolve_targets(const Dirs& dirs, Vec2 predicted_ball, double offset, Team team,
                          const FieldConfig& field) {
  const Rect b = field.bounds();
  const Vec2 ball = to_team_frame(team, predicted_ball);
  TargetSet out{};
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    Vec2 t = ball;
    switch (dirs[i]) {
      case Dir::kAbove: t.y += offset; break;
      case Dir::kBelow: t.y -= offset; break;
      case Dir::kLeft: t.x -= offset; break;
      case Dir::kRight: t.x += offset; break;
    }
    t = to_world_frame(team, t);
    out[i] = {std::clamp(t.x, b.x_min, b.x_max), std::clamp(t.y, b.y_min, b.y_max)};
  }
  return out;
}

WheelCommand target_to_wheels(const RobotState& robot, Vec2 target, const ControllerConfig& ctl,
                              const PhysicsConfig& phys) {
  if (!robot.active || robot.fallen) return {};
  const Vec2 d = target - robot.pos;
  const double dist = d.norm();
  if (dist <= ctl.arrive_tolerance) return {};

  const double vmax = phys.max_speed(robot.role);
  const double error = wrap_angle(std::atan2(d.y, d.x) - robot.heading);
  const double threshold = ctl.heading_threshold_deg * std::numbers::pi / 180.0;
  if (std::abs(error) > threshold) {
    // Rotate in place; right wheel forward turns counter-clockwise.
    const double w = std::clamp(ctl.rotate_gain * error * vmax, -vmax, vmax);
    return {-w, w};
  }
  const double v = std::min(vmax, ctl.drive_gain * std::min(dist, ctl.drive_cap));
  const double turn = ctl.turn_gain * error * vmax;
  return {std::clamp(v - turn, -vmax, vmax), std::clamp(v + turn, -vmax, vmax)};
}

}  // namespace sdqn
