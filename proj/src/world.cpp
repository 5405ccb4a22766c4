// SPDX-License-Identifier: Apache-2.0
#include "soccerdqn/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "soccerdqn/error.hpp"
#include "soccerdqn/frame.hpp"

namespace sdqn {

namespace {

// Timers accumulate dt in floating point; thresholds are compared with this
// slack so that e.g. 80 frames of 0.05 s count as 4.0 s.
constexpr double kTimeSlack = 1e-9;

constexpr double kGoalDepth = 0.12;
constexpr double kCornerSpotInset = 0.35;
constexpr double kPenaltySpotDistance = 0.9;
constexpr double kSetPieceKickerGap = 0.35;
constexpr double kParkingMargin = 0.5;

bool reached(double timer, double limit) { return timer + kTimeSlack >= limit; }

bool is_set_piece(PhaseKind k) {
  return k == PhaseKind::kKickoff || k == PhaseKind::kGoalKick ||
         k == PhaseKind::kCornerKick || k == PhaseKind::kPenaltyKick;
}

void enter_phase(WorldState& w, PhaseKind kind, Team team) {
  w.phase = GamePhase{kind, team, 0.0};
  w.deadlock_timer = 0.0;
}

void place_ball(WorldState& w, Vec2 p) {
  w.ball.pos = p;
  w.ball.vel = {};
  w.ball.reset_history();
}

void place_robot(RobotState& r, Vec2 pos, double heading) {
  r.pos = pos;
  r.heading = wrap_angle(heading);
  r.wheels = {};
  r.active = true;
  r.fallen = false;
  r.fallen_for = 0.0;
  r.inactive_for = 0.0;
  r.area_entered_frame = -1;
}

void place_formation(WorldState& w, const FieldConfig& field, std::optional<Team> kicking) {
  for (std::size_t slot = 0; slot < kRobotCount; ++slot) {
    const Team t = team_of_slot(slot);
    const Role r = role_of_slot(slot);
    const auto f = formation_slot(field, t, r, kicking == t);
    place_robot(w.robots[slot], f.pos, f.heading);
  }
}

Vec2 clamp_to(const Rect& r, Vec2 p) {
  return {std::clamp(p.x, r.x_min, r.x_max), std::clamp(p.y, r.y_min, r.y_max)};
}

Vec2 unit_or(Vec2 v, Vec2 fallback) {
  const double n = v.norm();
  return n > 0.0 ? (1.0 / n) * v : fallback;
}

Vec2 robot_velocity(const RobotState& r) {
  const double v = 0.5 * (r.wheels.left + r.wheels.right);
  return {v * std::cos(r.heading), v * std::sin(r.heading)};
}

bool in_any_penalty_area(const FieldConfig& f, Vec2 p) {
  return f.penalty_area(Team::kHome).contains(p) || f.penalty_area(Team::kAway).contains(p);
}

void separate_robots(WorldState& w, const Config& cfg) {
  const double min_gap = 2.0 * cfg.physics.robot_radius;
  for (std::size_t i = 0; i < kRobotCount; ++i) {
    auto& a = w.robots[i];
    if (!a.active) continue;
    for (std::size_t j = i + 1; j < kRobotCount; ++j) {
      auto& b = w.robots[j];
      if (!b.active) continue;
      const Vec2 d = b.pos - a.pos;
      const double dist = d.norm();
      if (dist >= min_gap) continue;
      const Vec2 n = unit_or(d, Vec2{0.0, 1.0});
      const double push = 0.5 * (min_gap - dist);
      a.pos = a.pos - push * n;
      b.pos = b.pos + push * n;
    }
  }
}

}  // namespace

std::string_view to_string(PhaseKind k) {
  switch (k) {
    case PhaseKind::kKickoff: return "kickoff";
    case PhaseKind::kDefault: return "default";
    case PhaseKind::kGoalKick: return "goal_kick";
    case PhaseKind::kCornerKick: return "corner_kick";
    case PhaseKind::kPenaltyKick: return "penalty_kick";
    case PhaseKind::kRelocation: return "relocation";
  }
  return "?";
}

FormationSlot formation_slot(const FieldConfig& field, Team team, Role role, bool kicking) {
  const double L = field.length;
  const double W = field.width;
  Vec2 p;
  double heading = 0.0;
  switch (role) {
    case Role::kGoalkeeper: p = {-0.5 * L + 0.12, 0.0}; break;
    case Role::kDefender1: p = {-0.28 * L, 0.17 * W}; break;
    case Role::kDefender2: p = {-0.28 * L, -0.17 * W}; break;
    case Role::kForward1: p = {-0.12 * L, 0.13 * W}; break;
    case Role::kForward2:
      if (kicking) {
        p = {-0.1, 0.55};
        heading = -0.5 * std::numbers::pi;
      } else {
        p = {-0.12 * L, -0.13 * W};
      }
      break;
  }
  return {to_world_frame(team, p), heading_to_world_frame(team, heading)};
}

WorldState initial_world(const Config& cfg, Team kickoff_team) {
  WorldState w;
  for (std::size_t slot = 0; slot < kRobotCount; ++slot) {
    w.robots[slot].team = team_of_slot(slot);
    w.robots[slot].role = role_of_slot(slot);
  }
  reset_for_kickoff(w, cfg, kickoff_team);
  return w;
}

void reset_for_kickoff(WorldState& w, const Config& cfg, Team team) {
  place_formation(w, cfg.field, team);
  place_ball(w, {0.0, 0.0});
  w.owner = Owner::kNone;
  enter_phase(w, PhaseKind::kKickoff, team);
}

bool may_move(const WorldState& w, std::size_t slot) {
  const auto& r = w.robots[slot];
  if (!r.active || r.fallen) return false;
  const Team t = r.team;
  const Team k = w.phase.team;
  switch (w.phase.kind) {
    case PhaseKind::kDefault: return true;
    case PhaseKind::kRelocation: return false;
    case PhaseKind::kKickoff:
    case PhaseKind::kCornerKick: return t == k && r.role == Role::kForward2;
    case PhaseKind::kGoalKick: return t == k && r.role == Role::kGoalkeeper;
    case PhaseKind::kPenaltyKick:
      return (t == k && r.role == Role::kForward2) || (t != k && r.role == Role::kGoalkeeper);
  }
  return false;
}

WorldState step(const WorldState& world, std::span<const WheelCommand> commands,
                const Config& cfg) {
  if (commands.size() != kRobotCount) {
    throw_error(ErrorCode::kContractViolation, "step: expected one wheel command per robot (10), got " +
                                                   std::to_string(commands.size()));
  }
  const auto& field = cfg.field;
  const auto& phys = cfg.physics;
  const double dt = field.dt;

  WorldState w = world;
  w.frame = world.frame + 1;
  w.time = static_cast<double>(w.frame) * dt;

  const Rect robot_bounds{-field.half_length() + phys.robot_radius,
                          field.half_length() - phys.robot_radius,
                          -field.half_width() + phys.robot_radius,
                          field.half_width() - phys.robot_radius};

  for (std::size_t slot = 0; slot < kRobotCount; ++slot) {
    auto& r = w.robots[slot];
    if (!r.active) {
      r.wheels = {};
      r.inactive_for += dt;
      continue;
    }
    if (r.fallen) {
      r.wheels = {};
      r.fallen_for += dt;
      continue;
    }
    WheelCommand cmd = may_move(world, slot) ? commands[slot] : WheelCommand{};
    const double vmax = phys.max_speed(r.role);
    cmd.left = std::clamp(cmd.left, -vmax, vmax);
    cmd.right = std::clamp(cmd.right, -vmax, vmax);
    r.wheels = cmd;

    const double v = 0.5 * (cmd.left + cmd.right);
    const double omega = (cmd.right - cmd.left) / phys.axle_width;
    const double mid = r.heading + 0.5 * omega * dt;
    r.pos += Vec2{v * dt * std::cos(mid), v * dt * std::sin(mid)};
    r.heading = wrap_angle(r.heading + omega * dt);
    r.pos = clamp_to(robot_bounds, r.pos);
  }
  separate_robots(w, cfg);
  for (auto& r : w.robots) {
    if (r.active) r.pos = clamp_to(robot_bounds, r.pos);
  }

  // Ball: free flight with linear friction, then contacts, then walls.
  auto& ball = w.ball;
  ball.pos += dt * ball.vel;
  ball.vel = std::max(0.0, 1.0 - phys.ball_friction * dt) * ball.vel;

  bool permitted_touch = false;
  const double contact = phys.robot_radius + phys.ball_radius;
  for (std::size_t slot = 0; slot < kRobotCount; ++slot) {
    const auto& r = w.robots[slot];
    if (!r.active) continue;
    const Vec2 d = ball.pos - r.pos;
    const double dist = d.norm();
    if (dist >= contact) continue;
    const Vec2 n = unit_or(d, Vec2{std::cos(r.heading), std::sin(r.heading)});
    ball.pos = r.pos + contact * n;
    const double vn = (ball.vel - robot_velocity(r)).dot(n);
    if (vn < 0.0) ball.vel = ball.vel - ((1.0 + phys.kick_restitution) * vn) * n;
    w.owner = owner_of(r.team);
    if (may_move(world, slot)) permitted_touch = true;
  }
  const double speed = ball.vel.norm();
  if (speed > phys.max_ball_speed) ball.vel = (phys.max_ball_speed / speed) * ball.vel;

  const double y_lim = field.half_width() - phys.ball_radius;
  if (ball.pos.y > y_lim) {
    ball.pos.y = 2.0 * y_lim - ball.pos.y;
    ball.vel.y = -phys.wall_restitution * ball.vel.y;
  } else if (ball.pos.y < -y_lim) {
    ball.pos.y = -2.0 * y_lim - ball.pos.y;
    ball.vel.y = -phys.wall_restitution * ball.vel.y;
  }
  const bool in_mouth = std::abs(ball.pos.y) < 0.5 * field.goal_width;
  const double x_lim =
      in_mouth ? field.half_length() + kGoalDepth : field.half_length() - phys.ball_radius;
  if (ball.pos.x > x_lim) {
    ball.pos.x = 2.0 * x_lim - ball.pos.x;
    ball.vel.x = -phys.wall_restitution * ball.vel.x;
  } else if (ball.pos.x < -x_lim) {
    ball.pos.x = -2.0 * x_lim - ball.pos.x;
    ball.vel.x = -phys.wall_restitution * ball.vel.x;
  }

  ball.history = {ball.pos, world.ball.history[0], world.ball.history[1]};

  std::copy(world.ball.trail.begin(), world.ball.trail.end() - 1, ball.trail.begin() + 1);
  ball.trail[0] = ball.pos;
  // Net displacement over the window, so a ball jostled in place between
  // robots counts as stopped even though contacts keep its velocity high.
  const std::size_t window = field.deadlock_window_frames();
  const double moved = distance(ball.trail[0], ball.trail[window]) / (static_cast<double>(window) * dt);
  if (moved < field.deadlock_speed_threshold) {
    w.deadlock_timer = world.deadlock_timer + dt;
  } else {
    w.deadlock_timer = 0.0;
  }

  w.phase.timer = world.phase.timer + dt;
  if (is_set_piece(w.phase.kind)) {
    if (permitted_touch || reached(w.phase.timer, phys.set_piece_timeout)) {
      enter_phase(w, PhaseKind::kDefault, w.phase.team);
    }
  } else if (w.phase.kind == PhaseKind::kRelocation) {
    if (reached(w.phase.timer, phys.relocation_pause)) {
      enter_phase(w, PhaseKind::kDefault, w.phase.team);
    }
  }

  for (auto& r : w.robots) {
    if (r.active && in_any_penalty_area(field, r.pos)) {
      if (r.area_entered_frame < 0) r.area_entered_frame = w.frame;
    } else {
      r.area_entered_frame = -1;
    }
  }
  return w;
}

std::optional<DeadlockKind> detect_deadlock(const WorldState& world, const Config& cfg) {
  if (world.phase.kind != PhaseKind::kDefault) return std::nullopt;
  if (!reached(world.deadlock_timer, cfg.field.deadlock_duration)) return std::nullopt;
  const Vec2 p = world.ball.pos;
  if (cfg.field.in_corner_region(p)) return DeadlockKind::kCorner;
  if (in_any_penalty_area(cfg.field, p)) return DeadlockKind::kPenaltyArea;
  return DeadlockKind::kOther;
}

WorldState apply_deadlock(const WorldState& world, DeadlockKind kind, const Config& cfg) {
  const auto& field = cfg.field;
  WorldState w = world;
  const Vec2 b = world.ball.pos;
  switch (kind) {
    case DeadlockKind::kCorner: {
      // Unowned balls go to the team attacking toward that corner.
      const Team kicker = world.owner == Owner::kNone
                              ? (b.x >= 0.0 ? Team::kHome : Team::kAway)
                              : static_cast<Team>(world.owner);
      const Vec2 spot{std::copysign(field.half_length() - kCornerSpotInset, b.x),
                      std::copysign(field.half_width() - kCornerSpotInset, b.y)};
      place_formation(w, field, std::nullopt);
      place_ball(w, spot);
      const Vec2 toward_center = unit_or(Vec2{} - spot, Vec2{1.0, 0.0});
      auto& f2 = w.robot(kicker, Role::kForward2);
      place_robot(f2, spot + 2.0 * kSetPieceKickerGap * toward_center,
                  std::atan2(-toward_center.y, -toward_center.x));
      enter_phase(w, PhaseKind::kCornerKick, kicker);
      break;
    }
    case DeadlockKind::kPenaltyArea: {
      const Team defender = b.x < 0.0 ? Team::kHome : Team::kAway;
      const Team attacker = opponent(defender);
      place_formation(w, field, std::nullopt);
      if (world.owner == owner_of(attacker)) {
        const Vec2 spot = to_world_frame(attacker, {field.half_length() - kPenaltySpotDistance, 0.0});
        place_ball(w, spot);
        place_robot(w.robot(attacker, Role::kForward2),
                    to_world_frame(attacker, {field.half_length() - kPenaltySpotDistance -
                                                  kSetPieceKickerGap, 0.0}),
                    heading_to_world_frame(attacker, 0.0));
        enter_phase(w, PhaseKind::kPenaltyKick, attacker);
      } else {
        place_ball(w, to_world_frame(defender, {-field.half_length() + 0.45, 0.0}));
        place_robot(w.robot(defender, Role::kGoalkeeper),
                    to_world_frame(defender, {-field.half_length() + 0.2, 0.0}),
                    heading_to_world_frame(defender, 0.0));
        enter_phase(w, PhaseKind::kGoalKick, defender);
      }
      break;
    }
    case DeadlockKind::kOther: {
      Vec2 best = field.relocation_points[0];
      double best_d = std::numeric_limits<double>::infinity();
      for (const Vec2 p : field.relocation_points) {
        const double d = distance(p, b);
        if (d < best_d) {
          best_d = d;
          best = p;
        }
      }
      place_ball(w, best);
      enter_phase(w, PhaseKind::kRelocation, w.phase.team);
      break;
    }
  }
  return w;
}

void inject_fall(WorldState& world, std::size_t slot) {
  require(slot < kRobotCount, "inject_fall: slot out of range");
  auto& r = world.robots[slot];
  if (!r.active) return;
  r.fallen = true;
  r.wheels = {};
}

WorldState handle_falls(const WorldState& world, const Config& cfg) {
  const auto& field = cfg.field;
  WorldState w = world;
  for (std::size_t slot = 0; slot < kRobotCount; ++slot) {
    auto& r = w.robots[slot];
    if (r.active && r.fallen && reached(r.fallen_for, field.fall_timeout)) {
      r.last_pos = r.pos;
      r.last_heading = r.heading;
      r.active = false;
      r.fallen = false;
      r.fallen_for = 0.0;
      r.inactive_for = 0.0;
      r.wheels = {};
      r.area_entered_frame = -1;
      // Parked beside the touch line, one spot per slot.
      const double x = -field.half_length() + (static_cast<double>(slot) + 0.5) * field.length /
                                                  static_cast<double>(kRobotCount);
      r.pos = {x, field.half_width() + kParkingMargin};
    } else if (!r.active && reached(r.inactive_for, field.inactive_duration)) {
      const auto f = formation_slot(field, r.team, r.role, false);
      place_robot(r, f.pos, f.heading);
    }
  }
  return w;
}

GoalCheck check_goal(const WorldState& world, const Config& cfg) {
  const auto& field = cfg.field;
  const Vec2 p = world.ball.pos;
  std::optional<Team> scorer;
  if (std::abs(p.y) < 0.5 * field.goal_width) {
    if (p.x > field.half_length()) scorer = Team::kHome;
    if (p.x < -field.half_length()) scorer = Team::kAway;
  }
  if (!scorer) return {std::nullopt, world};
  WorldState w = world;
  w.score[static_cast<std::size_t>(*scorer)] += 1;
  reset_for_kickoff(w, cfg, opponent(*scorer));
  return {scorer, w};
}

FoulCheck enforce_penalty_area_counts(const WorldState& world, const Config& cfg) {
  const auto& field = cfg.field;
  FoulCheck out{world, {}};
  auto& w = out.world;
  for (const Team area_owner : {Team::kHome, Team::kAway}) {
    const Rect area = field.penalty_area(area_owner);
    for (const Team t : {Team::kHome, Team::kAway}) {
      const bool attacking = t != area_owner;
      const std::size_t limit = attacking ? 2 : 3;
      for (;;) {
        std::vector<std::size_t> inside;
        for (std::size_t s = slot_of(t, Role::kGoalkeeper); s < slot_of(t, Role::kGoalkeeper) + kRobotsPerTeam; ++s) {
          if (w.robots[s].active && area.contains(w.robots[s].pos)) inside.push_back(s);
        }
        if (inside.size() <= limit) break;
        // Most recently entered; later slot breaks ties.
        std::size_t victim = inside.front();
        for (const std::size_t s : inside) {
          if (w.robots[s].area_entered_frame >= w.robots[victim].area_entered_frame) victim = s;
        }
        auto& r = w.robots[victim];
        const double gap = cfg.physics.robot_radius + 0.05;
        // Penalty areas touch the end line, so step out toward midfield.
        r.pos.x = area_owner == Team::kHome ? area.x_max + gap : area.x_min - gap;
        r.area_entered_frame = -1;
        out.events.push_back({t, victim, attacking});
      }
    }
  }
  return out;
}

TickEvents advance(WorldState& world, std::span<const WheelCommand> commands, const Config& cfg) {
  world = step(world, commands, cfg);
  return referee(world, cfg);
}

TickEvents referee(WorldState& world, const Config& cfg) {
  TickEvents ev;
  auto goal = check_goal(world, cfg);
  if (goal.scorer) {
    ev.goal = goal.scorer;
    world = std::move(goal.world);
  } else if (auto kind = detect_deadlock(world, cfg)) {
    ev.deadlock = kind;
    world = apply_deadlock(world, *kind, cfg);
  }
  world = handle_falls(world, cfg);
  auto fouls = enforce_penalty_area_counts(world, cfg);
  world = std::move(fouls.world);
  ev.fouls = std::move(fouls.events);
  return ev;
}

}  // namespace sdqn
