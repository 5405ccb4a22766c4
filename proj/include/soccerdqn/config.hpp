// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "soccerdqn/geometry.hpp"
#include "soccerdqn/team.hpp"

namespace sdqn {

inline constexpr std::size_t kMaxDeadlockWindowFrames = 31;

/// Field geometry and rulebook timings. The origin is the field center and
/// the Home team always attacks toward +x.
struct FieldConfig {
  double length = 7.8;
  double width = 4.65;
  double goal_width = 1.0;
  double goal_area_depth = 0.5;
  double goal_area_width = 1.8;
  double penalty_area_depth = 1.25;
  double penalty_area_width = 3.0;
  double corner_region_side = 1.0;
  std::array<Vec2, 4> relocation_points = {Vec2{1.5, 1.0}, Vec2{1.5, -1.0}, Vec2{-1.5, 1.0},
                                           Vec2{-1.5, -1.0}};
  double dt = 0.05;
  std::int64_t frames_per_half = 6000;
  double deadlock_speed_threshold = 0.4;
  double deadlock_duration = 4.0;
  /// Ball speed for the deadlock rule is the net displacement over this span.
  double deadlock_speed_window = 0.25;
  double fall_timeout = 3.0;
  double inactive_duration = 5.0;

  double half_length() const { return 0.5 * length; }
  double half_width() const { return 0.5 * width; }
  std::size_t deadlock_window_frames() const;
  Rect bounds() const { return {-half_length(), half_length(), -half_width(), half_width()}; }

  /// Goal area in front of the goal that `defender` protects.
  Rect goal_area(Team defender) const;
  Rect penalty_area(Team defender) const;
  /// Point-in-any-of-the-four corner squares.
  bool in_corner_region(Vec2 p) const;
  /// Center of the goal mouth that `defender` protects.
  Vec2 goal_center(Team defender) const;

  void validate() const;
};

struct PhysicsConfig {
  double robot_radius = 0.075;
  double ball_radius = 0.04;
  double axle_width = 0.15;
  double max_speed_goalkeeper = 1.8;
  double max_speed_defender = 1.8;
  double max_speed_forward = 2.0;
  /// Linear velocity decay rate of the ball, 1/s.
  double ball_friction = 0.6;
  double wall_restitution = 0.8;
  double kick_restitution = 0.6;
  double max_ball_speed = 5.0;
  double set_piece_timeout = 5.0;
  double relocation_pause = 1.0;

  double max_speed(Role r) const;
  void validate() const;
};

/// Per-region (C1, C2) shaping constants, region id = index + 1.
struct RewardParams {
  std::array<double, 6> c1 = {-10.0, -1.0, 0.5, 1.0, 10.0, 0.0};
  std::array<double, 6> c2 = {0.0, 10.0, 10.0, 10.0, 0.0, 10.0};
};

struct ControllerConfig {
  double offset = 0.3;  ///< distance of an action target from the predicted ball
  double heading_threshold_deg = 20.0;
  double rotate_gain = 0.6;
  double drive_gain = 3.0;
  double drive_cap = 1.0;
  double turn_gain = 0.5;
  double arrive_tolerance = 0.05;
};

struct StrategyConfig {
  double alert_range = 1.0;
  double keeper_line_offset = 0.12;
  double keeper_kick_angle_deg = 60.0;
  double keeper_gaze_y_tolerance = 0.2;
  /// Home/opponent areas for the role discipline rule are |x| > line.
  double team_region_line_fraction = 0.25;
  double waiting_x_fraction = -0.2;
  double waiting_y_fraction = 0.25;
  double kickoff_arc_radius = 0.4;
  double kickoff_arc_start_deg = 90.0;
  double kickoff_arc_end_deg = 180.0;
  int kickoff_waypoints = 5;
  double approach_distance = 0.3;
  double penalty_aim_fraction = 0.25;
  double waypoint_tolerance = 0.08;
};

struct NetworkConfig {
  std::vector<int> dims = {22, 256, 256, 256};
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  /// Global-norm gradient cap; 0 disables clipping.
  double grad_clip = 0.0;
};

struct TrainerConfig {
  double gamma = 0.99;
  int batch_size = 64;
  std::int64_t train_start = 5000;
  std::int64_t capacity = 100000;
  std::int64_t target_sync_period = 1000;
  std::int64_t total_steps = 200000;
  std::uint64_t seed = 1;
  double epsilon_start = 1.0;
  double epsilon_decrement = 0.05;
  std::int64_t epsilon_interval = 20000;
  double epsilon_min = 0.05;
  /// Whether the epsilon schedule counts gradient updates or environment frames.
  bool epsilon_counts_frames = false;
  int train_every = 1;
  std::int64_t log_every = 1000;
  std::int64_t checkpoint_every = 50000;
  /// Stop after this many log windows without a new minimum loss; 0 disables.
  int plateau_patience = 0;
  std::string opponent = "chaser";

  void validate() const;
};

struct Config {
  FieldConfig field;
  PhysicsConfig physics;
  RewardParams reward;
  ControllerConfig controller;
  StrategyConfig strategy;
  NetworkConfig network;
  TrainerConfig trainer;

  void validate() const;
};

/// Parses a JSON config document; missing keys keep their defaults.
Config config_from_json(const std::string& text);
Config load_config(const std::string& path);
/// Canonical JSON form containing every key.
std::string config_to_json(const Config& cfg, int indent = 2);
/// FNV-1a 64 of the compact canonical JSON, as 16 hex digits.
std::string config_digest(const Config& cfg);

}  // namespace sdqn
