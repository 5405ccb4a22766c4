// SPDX-License-Identifier: Apache-2.0
#include "soccerdqn/rewards.hpp"

#include <algorithm>
#include <array>

#include "soccerdqn/error.hpp"
#include "soccerdqn/frame.hpp"

namespace sdqn {

namespace {

std::array<Vec2, 4> field_player_positions(const WorldState& w, Team team) {
  std::array<Vec2, 4> out{};
  for (std::size_t i = 0; i < kFieldPlayers.size(); ++i) {
    out[i] = w.robot(team, kFieldPlayers[i]).pos;
  }
  return out;
}

}  // namespace

RegionId classify_region(Vec2 p, const FieldConfig& field, Team team) {
  const Team opp = opponent(team);
  if (field.goal_area(opp).contains(p)) return {5};
  if (field.goal_area(team).contains(p)) return {1};
  if (field.penalty_area(opp).contains(p)) return {4};
  const Vec2 q = to_team_frame(team, p);
  if (q.x > 0.0 && field.in_corner_region(p)) return {3};
  if (q.x < 0.0) return {2};
  return {6};
}

double agent_reward(RegionId region, GoalDistancePair d, const RewardParams& params) {
  require(region.value >= 1 && region.value <= 6, "agent_reward: region must be 1..6");
  const auto i = static_cast<std::size_t>(region.value - 1);
  return params.c1[i] + params.c2[i] * (d.d_prev - d.d_curr);
}

double team_reward(Vec2 ball_prev2, Vec2 ball_curr, std::span<const Vec2, 4> players, Team team,
                   const FieldConfig& field, const RewardParams& params) {
  const Vec2 goal = field.goal_center(opponent(team));
  const GoalDistancePair d{distance(goal, ball_prev2), distance(goal, ball_curr)};
  const Rect bounds = field.bounds();
  double sum = 0.0;
  for (const Vec2 p : players) {
    // Parked (inactive) robots sit just off the field.
    const Vec2 q{std::clamp(p.x, bounds.x_min, bounds.x_max),
                 std::clamp(p.y, bounds.y_min, bounds.y_max)};
    sum += agent_reward(classify_region(q, field, team), d, params);
  }
  return sum / static_cast<double>(players.size());
}

double team_reward(const WorldState& world_prev2, const WorldState& world_curr, Team team,
                   const FieldConfig& field, const RewardParams& params) {
  const auto players = field_player_positions(world_curr, team);
  return team_reward(world_prev2.ball.pos, world_curr.ball.pos, players, team, field, params);
}

double team_reward(const WorldState& world, Team team, const FieldConfig& field,
                   const RewardParams& params) {
  const auto players = field_player_positions(world, team);
  return team_reward(world.ball.history[2], world.ball.pos, players, team, field, params);
}

}  // namespace sdqn
