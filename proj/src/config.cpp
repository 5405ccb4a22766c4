// SPDX-License-Identifier: Apache-2.0
#include "soccerdqn/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "soccerdqn/error.hpp"
#include "soccerdqn/frame.hpp"

namespace sdqn {

using nlohmann::json;

Rect FieldConfig::goal_area(Team defender) const {
  const double hl = half_length();
  const Rect home{-hl, -hl + goal_area_depth, -0.5 * goal_area_width, 0.5 * goal_area_width};
  if (defender == Team::kHome) return home;
  return {-home.x_max, -home.x_min, home.y_min, home.y_max};
}

Rect FieldConfig::penalty_area(Team defender) const {
  const double hl = half_length();
  const Rect home{-hl, -hl + penalty_area_depth, -0.5 * penalty_area_width,
                  0.5 * penalty_area_width};
  if (defender == Team::kHome) return home;
  return {-home.x_max, -home.x_min, home.y_min, home.y_max};
}

bool FieldConfig::in_corner_region(Vec2 p) const {
  return std::abs(p.x) >= half_length() - corner_region_side &&
         std::abs(p.y) >= half_width() - corner_region_side;
}

Vec2 FieldConfig::goal_center(Team defender) const {
  return to_world_frame(defender, {-half_length(), 0.0});
}

std::size_t FieldConfig::deadlock_window_frames() const {
  const long n = std::lround(deadlock_speed_window / dt);
  return static_cast<std::size_t>(std::clamp<long>(n, 1, static_cast<long>(kMaxDeadlockWindowFrames)));
}

void FieldConfig::validate() const {
  auto check = [](bool ok, const char* what) {
    if (!ok) throw_error(ErrorCode::kInvalidArgument, std::string("field config: ") + what);
  };
  check(length > 0.0 && width > 0.0, "length and width must be positive");
  check(goal_width > 0.0 && goal_width <= goal_area_width, "goal mouth must fit the goal area");
  check(goal_area_depth > 0.0 && goal_area_depth <= penalty_area_depth,
        "goal area must lie inside the penalty area");
  check(goal_area_width <= penalty_area_width, "goal area must lie inside the penalty area");
  check(penalty_area_depth < half_length() && penalty_area_width <= width,
        "penalty area must lie inside the field");
  check(corner_region_side > 0.0 && corner_region_side < half_width(), "bad corner region");
  check(dt > 0.0, "dt must be positive");
  check(frames_per_half > 0, "frames_per_half must be positive");
  check(deadlock_speed_threshold > 0.0 && deadlock_duration > 0.0, "bad deadlock rule");
  check(deadlock_speed_window >= dt && std::lround(deadlock_speed_window / dt) <=
                                           static_cast<long>(kMaxDeadlockWindowFrames),
        "deadlock speed window must span 1 to 31 frames");
  check(fall_timeout > 0.0 && inactive_duration > 0.0, "bad fall timings");
  for (const Vec2 p : relocation_points) check(bounds().contains(p), "relocation point off field");
}

double PhysicsConfig::max_speed(Role r) const {
  switch (r) {
    case Role::kGoalkeeper: return max_speed_goalkeeper;
    case Role::kDefender1:
    case Role::kDefender2: return max_speed_defender;
    case Role::kForward1:
    case Role::kForward2: return max_speed_forward;
  }
  return 0.0;
}

void PhysicsConfig::validate() const {
  if (robot_radius <= 0.0 || ball_radius <= 0.0 || axle_width <= 0.0 || max_speed_goalkeeper <= 0.0 ||
      max_speed_defender <= 0.0 || max_speed_forward <= 0.0 || ball_friction < 0.0 ||
      wall_restitution < 0.0 || wall_restitution > 1.0 || kick_restitution < 0.0 ||
      max_ball_speed <= 0.0) {
    throw_error(ErrorCode::kInvalidArgument, "physics config: invalid parameter");
  }
}

void TrainerConfig::validate() const {
  auto check = [](bool ok, const char* what) {
    if (!ok) throw_error(ErrorCode::kInvalidArgument, std::string("trainer config: ") + what);
  };
  check(gamma >= 0.0 && gamma <= 1.0, "gamma must lie in [0, 1]");
  check(batch_size > 0, "batch_size must be positive");
  check(batch_size <= train_start && train_start <= capacity,
        "require batch_size <= train_start <= capacity");
  check(target_sync_period > 0, "target_sync_period must be positive");
  check(total_steps >= 0, "total_steps must be non-negative");
  check(epsilon_interval > 0 && epsilon_decrement >= 0.0, "bad epsilon schedule");
  check(epsilon_min >= 0.0 && epsilon_min <= epsilon_start && epsilon_start <= 1.0,
        "require 0 <= epsilon_min <= epsilon_start <= 1");
  check(train_every > 0 && log_every > 0 && checkpoint_every > 0, "periods must be positive");
}

void Config::validate() const {
  field.validate();
  physics.validate();
  trainer.validate();
  if (network.dims.size() < 2) throw_error(ErrorCode::kInvalidArgument, "network dims too short");
  for (int d : network.dims) {
    if (d <= 0) throw_error(ErrorCode::kInvalidArgument, "network dims must be positive");
  }
  if (controller.offset < 0.0 || controller.arrive_tolerance <= 0.0) {
    throw_error(ErrorCode::kInvalidArgument, "controller config: invalid parameter");
  }
  if (strategy.alert_range <= 0.0 || strategy.kickoff_waypoints < 2) {
    throw_error(ErrorCode::kInvalidArgument, "strategy config: invalid parameter");
  }
}

namespace {

// Each visitor names every serialized member once; the same list drives
// reading and writing.

template <class C, class F>
void visit_field(C& c, F&& f) {
  f("length", c.length);
  f("width", c.width);
  f("goal_width", c.goal_width);
  f("goal_area_depth", c.goal_area_depth);
  f("goal_area_width", c.goal_area_width);
  f("penalty_area_depth", c.penalty_area_depth);
  f("penalty_area_width", c.penalty_area_width);
  f("corner_region_side", c.corner_region_side);
  f("relocation_points", c.relocation_points);
  f("dt", c.dt);
  f("frames_per_half", c.frames_per_half);
  f("deadlock_speed_threshold", c.deadlock_speed_threshold);
  f("deadlock_duration", c.deadlock_duration);
  f("deadlock_speed_window", c.deadlock_speed_window);
  f("fall_timeout", c.fall_timeout);
  f("inactive_duration", c.inactive_duration);
}

template <class C, class F>
void visit_physics(C& c, F&& f) {
  f("robot_radius", c.robot_radius);
  f("ball_radius", c.ball_radius);
  f("axle_width", c.axle_width);
  f("max_speed_goalkeeper", c.max_speed_goalkeeper);
  f("max_speed_defender", c.max_speed_defender);
  f("max_speed_forward", c.max_speed_forward);
  f("ball_friction", c.ball_friction);
  f("wall_restitution", c.wall_restitution);
  f("kick_restitution", c.kick_restitution);
  f("max_ball_speed", c.max_ball_speed);
  f("set_piece_timeout", c.set_piece_timeout);
  f("relocation_pause", c.relocation_pause);
}

template <class C, class F>
void visit_reward(C& c, F&& f) {
  f("c1", c.c1);
  f("c2", c.c2);
}

template <class C, class F>
void visit_controller(C& c, F&& f) {
  f("offset", c.offset);
  f("heading_threshold_deg", c.heading_threshold_deg);
  f("rotate_gain", c.rotate_gain);
  f("drive_gain", c.drive_gain);
  f("drive_cap", c.drive_cap);
  f("turn_gain", c.turn_gain);
  f("arrive_tolerance", c.arrive_tolerance);
}

template <class C, class F>
void visit_strategy(C& c, F&& f) {
  f("alert_range", c.alert_range);
  f("keeper_line_offset", c.keeper_line_offset);
  f("keeper_kick_angle_deg", c.keeper_kick_angle_deg);
  f("keeper_gaze_y_tolerance", c.keeper_gaze_y_tolerance);
  f("team_region_line_fraction", c.team_region_line_fraction);
  f("waiting_x_fraction", c.waiting_x_fraction);
  f("waiting_y_fraction", c.waiting_y_fraction);
  f("kickoff_arc_radius", c.kickoff_arc_radius);
  f("kickoff_arc_start_deg", c.kickoff_arc_start_deg);
  f("kickoff_arc_end_deg", c.kickoff_arc_end_deg);
  f("kickoff_waypoints", c.kickoff_waypoints);
  f("approach_distance", c.approach_distance);
  f("penalty_aim_fraction", c.penalty_aim_fraction);
  f("waypoint_tolerance", c.waypoint_tolerance);
}

template <class C, class F>
void visit_network(C& c, F&& f) {
  f("dims", c.dims);
  f("learning_rate", c.learning_rate);
  f("beta1", c.beta1);
  f("beta2", c.beta2);
  f("adam_epsilon", c.adam_epsilon);
  f("grad_clip", c.grad_clip);
}

template <class C, class F>
void visit_trainer(C& c, F&& f) {
  f("gamma", c.gamma);
  f("batch_size", c.batch_size);
  f("train_start", c.train_start);
  f("capacity", c.capacity);
  f("target_sync_period", c.target_sync_period);
  f("total_steps", c.total_steps);
  f("seed", c.seed);
  f("epsilon_start", c.epsilon_start);
  f("epsilon_decrement", c.epsilon_decrement);
  f("epsilon_interval", c.epsilon_interval);
  f("epsilon_min", c.epsilon_min);
  f("epsilon_counts_frames", c.epsilon_counts_frames);
  f("train_every", c.train_every);
  f("log_every", c.log_every);
  f("checkpoint_every", c.checkpoint_every);
  f("plateau_patience", c.plateau_patience);
  f("opponent", c.opponent);
}

template <class T>
json encode(const T& v) {
  return json(v);
}

json encode(const std::array<Vec2, 4>& pts) {
  json arr = json::array();
  for (const Vec2 p : pts) arr.push_back({p.x, p.y});
  return arr;
}

template <class T>
void decode(const json& j, T& v) {
  v = j.get<T>();
}

void decode(const json& j, std::array<Vec2, 4>& pts) {
  if (!j.is_array() || j.size() != 4) {
    throw_error(ErrorCode::kParse, "relocation_points must hold 4 [x, y] pairs");
  }
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& p = j[i];
    if (!p.is_array() || p.size() != 2) throw_error(ErrorCode::kParse, "bad relocation point");
    pts[i] = {p[0].get<double>(), p[1].get<double>()};
  }
}

template <class C, class Visit>
json section_to_json(const C& c, Visit visit) {
  json out = json::object();
  visit(c, [&](const char* key, const auto& member) { out[key] = encode(member); });
  return out;
}

template <class C, class Visit>
void section_from_json(const json& doc, const char* name, C& c, Visit visit) {
  if (!doc.contains(name)) return;
  const json& sec = doc.at(name);
  if (!sec.is_object()) throw_error(ErrorCode::kParse, std::string("section '") + name + "' must be an object");
  for (const auto& item : sec.items()) {
    bool known = false;
    visit(c, [&](const char* key, auto&) { known = known || item.key() == key; });
    if (!known) {
      throw_error(ErrorCode::kParse, std::string("unknown key '") + name + "." + item.key() + "'");
    }
  }
  visit(c, [&](const char* key, auto& member) {
    if (!sec.contains(key)) return;
    try {
      decode(sec.at(key), member);
    } catch (const json::exception& e) {
      throw_error(ErrorCode::kParse, std::string("bad value for '") + name + "." + key + "': " + e.what());
    }
  });
}

#define SDQN_SECTIONS(X)            \
  X("field", field, visit_field)    \
  X("physics", physics, visit_physics) \
  X("reward", reward, visit_reward) \
  X("controller", controller, visit_controller) \
  X("strategy", strategy, visit_strategy) \
  X("network", network, visit_network) \
  X("trainer", trainer, visit_trainer)

}  // namespace

Config config_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw_error(ErrorCode::kParse, std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw_error(ErrorCode::kParse, "config: top level must be an object");
  Config cfg;
  for (const auto& item : doc.items()) {
    bool known = false;
#define X(name, member, visit) known = known || item.key() == name;
    SDQN_SECTIONS(X)
#undef X
    if (!known) throw_error(ErrorCode::kParse, "config: unknown section '" + item.key() + "'");
  }
#define X(name, member, visit) \
  section_from_json(doc, name, cfg.member, [](auto& c, auto&& f) { visit(c, f); });
  SDQN_SECTIONS(X)
#undef X
  cfg.validate();
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_error(ErrorCode::kIo, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

std::string config_to_json(const Config& cfg, int indent) {
  json doc = json::object();
#define X(name, member, visit) \
  doc[name] = section_to_json(cfg.member, [](const auto& c, auto&& f) { visit(c, f); });
  SDQN_SECTIONS(X)
#undef X
  return doc.dump(indent);
}

std::string config_digest(const Config& cfg) {
  const std::string text = config_to_json(cfg, -1);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sdqn
