// SPDX-License-Identifier: Apache-2.0
#include "soccerdqn/policies.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "soccerdqn/dqn.hpp"
#include "soccerdqn/frame.hpp"

namespace sdqn {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
// Lateral step the keeper takes when the ball sits between it and the goal.
constexpr double kSidestep = 0.3;
// How far past the ball the keeper aims when clearing.
constexpr double kClearThrough = 0.2;
// D1 stands this far in front of the goal area while the ball is in our area.
constexpr double kCoverDepth = 0.15;

Vec2 unit_or(Vec2 v, Vec2 fallback) {
  const double n = v.norm();
  return n > 0.0 ? (1.0 / n) * v : fallback;
}

WheelCommand face_point(const RobotState& r, Vec2 p, const Config& cfg) {
  const Vec2 d = p - r.pos;
  const double err = wrap_angle(std::atan2(d.y, d.x) - r.heading);
  if (std::abs(err) < 5.0 * kDegToRad) return {};
  const double vmax = cfg.physics.max_speed(r.role);
  const double w = std::clamp(cfg.controller.rotate_gain * err * vmax, -vmax, vmax);
  return {-w, w};
}

std::size_t target_index(Role r) {
  for (std::size_t i = 0; i < kFieldPlayers.size(); ++i) {
    if (kFieldPlayers[i] == r) return i;
  }
  return 0;
}

std::int64_t phase_start_frame(const WorldState& w, const Config& cfg) {
  return w.frame - static_cast<std::int64_t>(std::llround(w.phase.timer / cfg.field.dt));
}

}  // namespace

// ---------------------------------------------------------------------------

KeeperContext keeper_context(const WorldState& world, Team team) {
  return {world.robot(team, Role::kGoalkeeper), world.ball.pos, world.ball.vel, team,
          world.phase.kind};
}

KeeperDecision goalkeeper_decision(const KeeperContext& ctx, const Config& cfg) {
  const auto& field = cfg.field;
  const auto& st = cfg.strategy;
  const Team team = ctx.team;
  const RobotState& k = ctx.keeper;
  const Vec2 kp = to_team_frame(team, k.pos);
  const Vec2 bp = to_team_frame(team, ctx.ball_pos);
  const double hl = field.half_length();
  const double line_x = -hl + st.keeper_line_offset;
  const double half_goal = 0.5 * field.goal_width;
  const Rect area = field.penalty_area(Team::kHome);  // own area in the team frame

  auto drive = [&](KeeperRule rule, Vec2 team_target) {
    const Vec2 target = to_world_frame(team, team_target);
    return KeeperDecision{rule, target,
                          target_to_wheels(k, target, cfg.controller, cfg.physics)};
  };
  const Vec2 track{line_x, std::clamp(bp.y, -half_goal, half_goal)};

  if (kp.x < -hl && std::abs(kp.y) < half_goal) {
    return drive(KeeperRule::kLeaveGoal, {line_x + 0.1, kp.y});
  }
  if (!area.contains(kp)) return drive(KeeperRule::kReturnToArea, {line_x, 0.0});

  if (area.contains(bp)) {
    if (bp.x < kp.x) {
      const double clearance = cfg.physics.robot_radius + cfg.physics.ball_radius;
      if (std::abs(bp.y - kp.y) > clearance) {
        const double x = std::max(bp.x - 0.15, -hl + cfg.physics.robot_radius);
        return drive(KeeperRule::kGetAheadOfBall, {x, bp.y});
      }
      const double side = kp.y >= bp.y ? 1.0 : -1.0;
      return drive(KeeperRule::kAvoidOwnGoal, {kp.x, kp.y + side * kSidestep});
    }
    const Vec2 to_ball = bp - kp;
    const double facing =
        wrap_angle(std::atan2(to_ball.y, to_ball.x) - heading_to_team_frame(team, k.heading));
    if (std::abs(facing) > st.keeper_kick_angle_deg * kDegToRad) {
      return drive(KeeperRule::kBlockGoal, track);
    }
    const Vec2 away = unit_or(bp - Vec2{-hl, 0.0}, Vec2{1.0, 0.0});
    return drive(KeeperRule::kKickAway, bp + kClearThrough * away);
  }

  if (distance(kp, bp) < st.alert_range && std::abs(bp.y - kp.y) < st.keeper_gaze_y_tolerance) {
    return {KeeperRule::kGaze, k.pos, face_point(k, ctx.ball_pos, cfg)};
  }
  return drive(KeeperRule::kTrackBall, track);
}

WheelCommand goalkeeper_policy(const KeeperContext& ctx, const Config& cfg) {
  return goalkeeper_decision(ctx, cfg).command;
}

// ---------------------------------------------------------------------------

void KickoffPlan::advance(Vec2 pos, double tolerance) {
  while (progress + 1 < waypoints.size() && distance(pos, waypoints[progress]) < tolerance) {
    ++progress;
  }
}

KickoffPlan make_kickoff_plan(Vec2 ball, Team team, const Config& cfg) {
  const auto& st = cfg.strategy;
  KickoffPlan plan;
  const Vec2 b = to_team_frame(team, ball);
  const int n = st.kickoff_waypoints;
  for (int i = 0; i < n; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(n - 1);
    const double phi =
        (st.kickoff_arc_start_deg + frac * (st.kickoff_arc_end_deg - st.kickoff_arc_start_deg)) *
        kDegToRad;
    const Vec2 p = b + st.kickoff_arc_radius * Vec2{std::cos(phi), std::sin(phi)};
    plan.waypoints.push_back(to_world_frame(team, p));
  }
  plan.waypoints.push_back(to_world_frame(team, {cfg.field.half_length(), 0.0}));
  return plan;
}

KickoffPlan make_shot_plan(Vec2 ball, Vec2 aim, const Config& cfg) {
  KickoffPlan plan;
  const Vec2 u = unit_or(aim - ball, Vec2{1.0, 0.0});
  plan.waypoints = {ball - cfg.strategy.approach_distance * u, aim};
  return plan;
}

TargetSet default_phase_targets(const WorldState& world, const TargetSet& base, Team team,
                                const Config& cfg) {
  const auto& field = cfg.field;
  const auto& st = cfg.strategy;
  const double line = st.team_region_line_fraction * field.length;
  // Held back from the line by the arrival tolerance plus a robot diameter,
  // which absorbs settling, turning arcs and shoves from teammates.
  const double hold = line - cfg.controller.arrive_tolerance - 2.0 * cfg.physics.robot_radius;
  TargetSet out{};
  for (std::size_t i = 0; i < kFieldPlayers.size(); ++i) {
    Vec2 t = to_team_frame(team, base[i]);
    const Role r = kFieldPlayers[i];
    const bool defender = r == Role::kDefender1 || r == Role::kDefender2;
    // Out-of-bounds targets keep only their y component at the line.
    if (defender && t.x > hold) t.x = hold;
    if (!defender && t.x < -hold) t.x = -hold;
    out[i] = t;
  }
  const Vec2 ball = to_team_frame(team, world.ball.pos);
  if (ball.x < -line) {
    const Vec2 keeper = to_team_frame(team, world.robot(team, Role::kGoalkeeper).pos);
    out[target_index(Role::kDefender1)] = {-field.half_length() + field.goal_area_depth + kCoverDepth,
                                           keeper.y};
    const double wx = st.waiting_x_fraction * field.length;
    const double wy = st.waiting_y_fraction * field.width;
    out[target_index(Role::kForward1)] = {wx, wy};
    out[target_index(Role::kForward2)] = {wx, -wy};
  }
  for (auto& t : out) t = to_world_frame(team, t);
  return out;
}

TeamCommands commands_for_targets(const WorldState& world, const TargetSet& targets, Team team,
                                  const Config& cfg) {
  TeamCommands out{};
  out[static_cast<std::size_t>(Role::kGoalkeeper)] = goalkeeper_policy(keeper_context(world, team), cfg);
  for (std::size_t i = 0; i < kFieldPlayers.size(); ++i) {
    const Role r = kFieldPlayers[i];
    out[static_cast<std::size_t>(r)] =
        target_to_wheels(world.robot(team, r), targets[i], cfg.controller, cfg.physics);
  }
  return out;
}

TeamCommands phase_overrides(const WorldState& world, const TargetSet& base, Team team,
                             const Config& cfg, KickoffPlan& plan) {
  const auto& phase = world.phase;
  const bool ours = phase.team == team;
  TeamCommands out{};
  const auto gk = static_cast<std::size_t>(Role::kGoalkeeper);
  const auto f2 = static_cast<std::size_t>(Role::kForward2);

  auto follow_plan = [&](auto make) {
    const std::int64_t start = phase_start_frame(world, cfg);
    if (plan.waypoints.empty() || plan.phase != phase.kind || plan.phase_start_frame != start) {
      plan = make();
      plan.phase = phase.kind;
      plan.phase_start_frame = start;
    }
    const auto& robot = world.robot(team, Role::kForward2);
    plan.advance(robot.pos, cfg.strategy.waypoint_tolerance);
    out[f2] = target_to_wheels(robot, plan.current(), cfg.controller, cfg.physics);
  };

  switch (phase.kind) {
    case PhaseKind::kDefault:
      return commands_for_targets(world, default_phase_targets(world, base, team, cfg), team, cfg);
    case PhaseKind::kRelocation:
      return out;
    case PhaseKind::kKickoff:
      if (ours) follow_plan([&] { return make_kickoff_plan(world.ball.pos, team, cfg); });
      return out;
    case PhaseKind::kCornerKick:
      if (ours) {
        follow_plan([&] {
          return make_shot_plan(world.ball.pos,
                                to_world_frame(team, {cfg.field.half_length(), 0.0}), cfg);
        });
      }
      return out;
    case PhaseKind::kPenaltyKick:
      if (ours) {
        follow_plan([&] {
          const Vec2 aim{cfg.field.half_length(),
                         cfg.strategy.penalty_aim_fraction * cfg.field.goal_width};
          return make_shot_plan(world.ball.pos, to_world_frame(team, aim), cfg);
        });
      } else {
        out[gk] = goalkeeper_policy(keeper_context(world, team), cfg);
      }
      return out;
    case PhaseKind::kGoalKick:
      if (ours) {
        const double vmax = cfg.physics.max_speed(Role::kGoalkeeper);
        out[gk] = {vmax, vmax};
      }
      return out;
  }
  return out;
}

TeamCommands commands_for_action(const WorldState& world, Team team, int action, const Config& cfg,
                                 KickoffPlan& plan) {
  const std::span<const Vec2, 3> hist(world.ball.history);
  const Vec2 predicted = predict_ball(hist, kPredictionFrames, cfg.field);
  const TargetSet base = resolve_targets(decode_action({action}), predicted,
                                         cfg.controller.offset, team, cfg.field);
  return phase_overrides(world, base, team, cfg, plan);
}

// ---------------------------------------------------------------------------

TargetSet baseline_targets(BaselineKind kind, const WorldState& world, Team team, Rng& rng,
                           const Config& cfg) {
  if (kind == BaselineKind::kBallChaser) {
    TargetSet t;
    t.fill(world.ball.pos);
    return t;
  }
  Dirs dirs{};
  for (auto& d : dirs) d = static_cast<Dir>(rng.index(4));
  const std::span<const Vec2, 3> hist(world.ball.history);
  return resolve_targets(dirs, predict_ball(hist, kPredictionFrames, cfg.field),
                         cfg.controller.offset, team, cfg.field);
}

TeamCommands baseline_policy(BaselineKind kind, const WorldState& world, Team team, Rng& rng,
                             const Config& cfg) {
  return commands_for_targets(world, baseline_targets(kind, world, team, rng, cfg), team, cfg);
}

std::string BaselinePolicy::name() const {
  return kind_ == BaselineKind::kRandom ? "random" : "chaser";
}

TeamCommands BaselinePolicy::act(const WorldState& world, Team team, const Config& cfg) {
  return baseline_policy(kind_, world, team, rng_, cfg);
}

DqnPolicy::DqnPolicy(Mlp net, double epsilon, std::string name)
    : net_(std::move(net)), epsilon_(epsilon), name_(std::move(name)) {}

void DqnPolicy::reset(std::uint64_t seed) {
  rng_ = Rng(seed);
  plan_ = {};
  last_action_.reset();
}

TeamCommands DqnPolicy::act(const WorldState& world, Team team, const Config& cfg) {
  last_state_ = encode_state(world, team, cfg.field);
  const int a = select_action(net_, last_state_, epsilon_, rng_);
  last_action_ = a;
  return commands_for_action(world, team, a, cfg, plan_);
}

std::unique_ptr<Policy> DqnPolicy::clone() const {
  return std::make_unique<DqnPolicy>(net_, epsilon_, name_);
}

}  // namespace sdqn
