// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "soccerdqn/config.hpp"
#include "soccerdqn/geometry.hpp"
#include "soccerdqn/team.hpp"

namespace sdqn {

struct WheelCommand {
  double left = 0.0;
  double right = 0.0;

  friend bool operator==(const WheelCommand&, const WheelCommand&) = default;
};

using TeamCommands = std::array<WheelCommand, kRobotsPerTeam>;

struct RobotState {
  Vec2 pos;
  double heading = 0.0;  ///< radians in (-pi, pi]
  WheelCommand wheels;   ///< wheel speeds applied during the last step
  Role role = Role::kGoalkeeper;
  Team team = Team::kHome;
  bool active = true;
  bool fallen = false;
  double fallen_for = 0.0;
  double inactive_for = 0.0;
  /// Pose at the moment the robot was taken off the field.
  Vec2 last_pos;
  double last_heading = 0.0;
  /// Frame at which the robot entered a penalty area, -1 when outside.
  std::int64_t area_entered_frame = -1;
};

/// Positions kept for the deadlock speed measurement, newest first.
inline constexpr std::size_t kBallTrail = kMaxDeadlockWindowFrames + 1;

struct BallState {
  Vec2 pos;
  Vec2 vel;
  /// [0] current, [1] previous, [2] second-previous position.
  std::array<Vec2, 3> history{};
  std::array<Vec2, kBallTrail> trail{};

  void reset_history() {
    history = {pos, pos, pos};
    trail.fill(pos);
  }
};

enum class PhaseKind { kKickoff, kDefault, kGoalKick, kCornerKick, kPenaltyKick, kRelocation };

struct GamePhase {
  PhaseKind kind = PhaseKind::kKickoff;
  Team team = Team::kHome;  ///< team awarded the set piece; unused for Default/Relocation
  double timer = 0.0;

  friend bool operator==(const GamePhase&, const GamePhase&) = default;
};

std::string_view to_string(PhaseKind k);

struct WorldState {
  std::int64_t frame = 0;
  double time = 0.0;
  std::array<RobotState, kRobotCount> robots{};
  BallState ball;
  GamePhase phase;
  std::array<int, 2> score = {0, 0};
  double deadlock_timer = 0.0;  ///< time the ball has moved slower than the deadlock threshold
  Owner owner = Owner::kNone;

  RobotState& robot(Team t, Role r) { return robots[slot_of(t, r)]; }
  const RobotState& robot(Team t, Role r) const { return robots[slot_of(t, r)]; }
};

enum class DeadlockKind { kCorner, kPenaltyArea, kOther };

struct FoulEvent {
  Team team;
  std::size_t slot;
  bool attacking;  ///< true when the attacker limit was exceeded
};

/// Pose of a robot in the standard formation. `kicking` selects the
/// kick-off variant of F2, placed next to the ball.
struct FormationSlot {
  Vec2 pos;
  double heading;
};
FormationSlot formation_slot(const FieldConfig& field, Team team, Role role, bool kicking);

/// A world at the start of a half: standard formation, Kickoff(kickoff_team).
WorldState initial_world(const Config& cfg, Team kickoff_team = Team::kHome);

/// Resets positions to the kick-off formation and enters Kickoff(team).
void reset_for_kickoff(WorldState& world, const Config& cfg, Team team);

/// Whether `slot` may move during the current phase.
bool may_move(const WorldState& world, std::size_t slot);

/// Advances one dt of kinematics and timers. Throws a contract violation if
/// `commands` does not hold exactly one command per robot.
WorldState step(const WorldState& world, std::span<const WheelCommand> commands,
                const Config& cfg);

std::optional<DeadlockKind> detect_deadlock(const WorldState& world, const Config& cfg);
WorldState apply_deadlock(const WorldState& world, DeadlockKind kind, const Config& cfg);

/// Marks a robot as fallen; used by tests and scripted scenarios since the
/// planar model has no tipping dynamics.
void inject_fall(WorldState& world, std::size_t slot);
WorldState handle_falls(const WorldState& world, const Config& cfg);

struct GoalCheck {
  std::optional<Team> scorer;
  WorldState world;
};
GoalCheck check_goal(const WorldState& world, const Config& cfg);

struct FoulCheck {
  WorldState world;
  std::vector<FoulEvent> events;
};
FoulCheck enforce_penalty_area_counts(const WorldState& world, const Config& cfg);

/// Everything that happened during one call to `advance`.
struct TickEvents {
  std::optional<Team> goal;
  std::optional<DeadlockKind> deadlock;
  std::vector<FoulEvent> fouls;
};

/// One full frame: `step` followed by the rulebook (goal, deadlock, falls,
/// penalty-area counts).
TickEvents advance(WorldState& world, std::span<const WheelCommand> commands, const Config& cfg);
/// The rulebook half of `advance`, applied to an already stepped world.
TickEvents referee(WorldState& world, const Config& cfg);

}  // namespace sdqn
