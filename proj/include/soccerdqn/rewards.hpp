// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "soccerdqn/config.hpp"
#include "soccerdqn/world.hpp"

namespace sdqn {

/// Reward regions, numbered 1..6:
///   1 own goal area, 2 own half, 3 opponent corner squares,
///   4 opponent penalty area, 5 opponent goal area, 6 everything else.
struct RegionId {
  int value = 6;

  friend bool operator==(RegionId, RegionId) = default;
};

struct GoalDistancePair {
  double d_prev = 0.0;  ///< opponent goal to ball, two frames ago
  double d_curr = 0.0;  ///< opponent goal to ball, now
};

RegionId classify_region(Vec2 p, const FieldConfig& field, Team team);

/// C1 + C2 * (d_prev - d_curr) with the constants of `region`.
double agent_reward(RegionId region, GoalDistancePair d, const RewardParams& params);

/// Mean agent reward of the four field players. `players` holds the F1, F2,
/// D1, D2 positions in world coordinates.
double team_reward(Vec2 ball_prev2, Vec2 ball_curr, std::span<const Vec2, 4> players, Team team,
                   const FieldConfig& field, const RewardParams& params);

double team_reward(const WorldState& world_prev2, const WorldState& world_curr, Team team,
                   const FieldConfig& field, const RewardParams& params);

/// Uses the ball history of `world` for the two-frame lookback.
double team_reward(const WorldState& world, Team team, const FieldConfig& field,
                   const RewardParams& params);

}  // namespace sdqn
