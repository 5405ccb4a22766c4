// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <span>

#include "soccerdqn/config.hpp"
#include "soccerdqn/world.hpp"

namespace sdqn {

inline constexpr std::size_t kStateSize = 22;

/// Observation layout: (x, y, theta, is_active) for F1, F2, D1, D2, then the
/// ball position twice, then the ball position predicted two frames ahead.
/// Positions are divided by the field half-extents and headings by pi, all in
/// the observing team's frame.
using StateVector = std::array<float, kStateSize>;

inline constexpr std::size_t kBallOffset = 16;
inline constexpr std::size_t kPredictedBallOffset = 20;
inline constexpr int kPredictionFrames = 2;

struct Normalizer {
  double half_length;
  double half_width;

  explicit Normalizer(const FieldConfig& f) : half_length(f.half_length()), half_width(f.half_width()) {}
};

/// Linear extrapolation `k` frames ahead from the last two positions, clamped
/// to the field.
Vec2 predict_ball(std::span<const Vec2, 3> history, int k, const FieldConfig& field);

StateVector encode_state(const WorldState& world, Team team, const FieldConfig& field);

}  // namespace sdqn
