// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>

#include "soccerdqn/config.hpp"
#include "soccerdqn/world.hpp"

namespace sdqn {

/// Target side relative to the ball, in one-hot order.
enum class Dir : std::uint8_t { kAbove = 0, kBelow = 1, kLeft = 2, kRight = 3 };

inline constexpr int kActionCount = 256;

/// Index into the 4^4 joint action space. F1 is the most significant base-4
/// digit, followed by F2, D1 and D2.
struct JointAction {
  int index = 0;

  friend bool operator==(JointAction, JointAction) = default;
};

using Dirs = std::array<Dir, 4>;
/// Targets for F1, F2, D1, D2 in world coordinates.
using TargetSet = std::array<Vec2, 4>;

Dirs decode_action(JointAction a);
JointAction encode_action(const Dirs& dirs);

/// Places each player `offset` meters above/below/left/right of the
/// predicted ball. Directions are in the team's attacking frame (Right points
/// at the opponent goal, Above is +y); targets are clamped to the field.
TargetSet resolve_targets(const Dirs& dirs, Vec2 predicted_ball, double offset, Team team,
                          const FieldConfig& field);

/// Two-phase point controller: turn in place while the heading error exceeds
/// the threshold, otherwise drive forward with a differential correction.
WheelCommand target_to_wheels(const RobotState& robot, Vec2 target, const ControllerConfig& ctl,
                              const PhysicsConfig& phys);

}  // namespace sdqn
