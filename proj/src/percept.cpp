// SPDX-License-Identifier: Apache-2.0
#include "soccerdqn/percept.hpp"

#include <algorithm>
#include <numbers>

#include "soccerdqn/error.hpp"
#include "soccerdqn/frame.hpp"

namespace sdqn {

Vec2 predict_ball(std::span<const Vec2, 3> history, int k, const FieldConfig& field) {
  require(k >= 0, "predict_ball: k must be non-negative");
  const Vec2 cur = history[0];
  const Vec2 p = cur + static_cast<double>(k) * (cur - history[1]);
  const Rect b = field.bounds();
  return {std::clamp(p.x, b.x_min, b.x_max), std::clamp(p.y, b.y_min, b.y_max)};
}

StateVector encode_state(const WorldState& world, Team team, const FieldConfig& field) {
  const Normalizer norm(field);
  StateVector s{};
  auto put_pos = [&](std::size_t at, Vec2 world_pos) {
    const Vec2 p = to_team_frame(team, world_pos);
    s[at] = static_cast<float>(p.x / norm.half_length);
    s[at + 1] = static_cast<float>(p.y / norm.half_width);
  };

  std::size_t at = 0;
  for (const Role role : kFieldPlayers) {
    const auto& r = world.robot(team, role);
    const Vec2 pos = r.active ? r.pos : r.last_pos;
    const double heading = r.active ? r.heading : r.last_heading;
    put_pos(at, pos);
    s[at + 2] = static_cast<float>(heading_to_team_frame(team, heading) / std::numbers::pi);
    s[at + 3] = r.active ? 1.0f : 0.0f;
    at += 4;
  }
  put_pos(kBallOffset, world.ball.pos);
  put_pos(kBallOffset + 2, world.ball.pos);
  const std::span<const Vec2, 3> hist(world.ball.history);
  put_pos(kPredictedBallOffset, predict_ball(hist, kPredictionFrames, field));
  return s;
}

}  // namespace sdqn
