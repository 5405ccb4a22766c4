// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "soccerdqn/actions.hpp"
#include "soccerdqn/config.hpp"
#include "soccerdqn/mlp.hpp"
#include "soccerdqn/percept.hpp"
#include "soccerdqn/rng.hpp"
#include "soccerdqn/world.hpp"

namespace sdqn {

// ---------------------------------------------------------------------------
// Goalkeeper

struct KeeperContext {
  RobotState keeper;
  Vec2 ball_pos;
  Vec2 ball_vel;
  Team team = Team::kHome;
  PhaseKind phase = PhaseKind::kDefault;
};

KeeperContext keeper_context(const WorldState& world, Team team);

/// Which keeper rule fired, in priority order.
enum class KeeperRule {
  kLeaveGoal,       ///< inside the goal: get out
  kReturnToArea,    ///< outside the penalty area: go to the desired position
  kGetAheadOfBall,  ///< ball behind, path clear
  kAvoidOwnGoal,    ///< ball behind and in the way
  kKickAway,        ///< ball ahead and roughly faced
  kBlockGoal,       ///< ball ahead but facing away from it
  kGaze,            ///< ball outside the area but close and level
  kTrackBall,       ///< follow the ball's y on the goal line
};

struct KeeperDecision {
  KeeperRule rule;
  Vec2 target;  ///< world frame; the keeper's own position for kGaze
  WheelCommand command;
};

KeeperDecision goalkeeper_decision(const KeeperContext& ctx, const Config& cfg);
WheelCommand goalkeeper_policy(const KeeperContext& ctx, const Config& cfg);

// ---------------------------------------------------------------------------
// Set pieces and phase overrides

/// Waypoints for the set-piece robot; the final waypoint lies beyond the
/// ball on the line toward the goal, so following the plan ends in a shot.
struct KickoffPlan {
  std::vector<Vec2> waypoints;
  std::size_t progress = 0;
  PhaseKind phase = PhaseKind::kDefault;
  std::int64_t phase_start_frame = -1;

  Vec2 current() const { return waypoints[progress]; }
  /// Moves past every waypoint already within `tolerance` of `pos`.
  void advance(Vec2 pos, double tolerance);
};

/// Arc around the ball (radius and angles from the strategy config, in the
/// team frame) ending in a drive at the opponent goal center.
KickoffPlan make_kickoff_plan(Vec2 ball, Team team, const Config& cfg);
/// Approach point behind the ball on the line to `aim`, then `aim`.
KickoffPlan make_shot_plan(Vec2 ball, Vec2 aim, const Config& cfg);

/// Replaces the action-derived targets according to the game phase and
/// returns wheel commands for GK, D1, D2, F1, F2. `plan` carries set-piece
/// progress between frames and is rebuilt when a new set piece starts.
TeamCommands phase_overrides(const WorldState& world, const TargetSet& base, Team team,
                             const Config& cfg, KickoffPlan& plan);

/// Targets after the Default-phase role discipline and defensive rules,
/// before conversion to wheel commands. Exposed for testing.
TargetSet default_phase_targets(const WorldState& world, const TargetSet& base, Team team,
                                const Config& cfg);

// ---------------------------------------------------------------------------
// Baselines

enum class BaselineKind { kRandom, kBallChaser };

TargetSet baseline_targets(BaselineKind kind, const WorldState& world, Team team, Rng& rng,
                           const Config& cfg);
TeamCommands baseline_policy(BaselineKind kind, const WorldState& world, Team team, Rng& rng,
                             const Config& cfg);

/// Commands a learned agent issues for joint action `action`: targets around
/// the predicted ball followed by `phase_overrides`.
TeamCommands commands_for_action(const WorldState& world, Team team, int action, const Config& cfg,
                                 KickoffPlan& plan);

/// Converts F1, F2, D1, D2 targets to wheel commands and adds the keeper.
TeamCommands commands_for_targets(const WorldState& world, const TargetSet& targets, Team team,
                                  const Config& cfg);

// ---------------------------------------------------------------------------
// Policy objects used by matches, evaluation and training

class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string name() const = 0;
  /// Called at the start of every half with a stream seed for this side.
  virtual void reset(std::uint64_t seed) { (void)seed; }
  virtual TeamCommands act(const WorldState& world, Team team, const Config& cfg) = 0;
  /// Joint action chosen during the last `act`, for learned policies.
  virtual std::optional<int> last_action() const { return std::nullopt; }
  /// Fresh instance with the same parameters, for parallel evaluation.
  virtual std::unique_ptr<Policy> clone() const = 0;
};

class ZeroPolicy final : public Policy {
 public:
  std::string name() const override { return "zero"; }
  TeamCommands act(const WorldState&, Team, const Config&) override { return {}; }
  std::unique_ptr<Policy> clone() const override { return std::make_unique<ZeroPolicy>(); }
};

class BaselinePolicy final : public Policy {
 public:
  explicit BaselinePolicy(BaselineKind kind) : kind_(kind) {}
  std::string name() const override;
  void reset(std::uint64_t seed) override { rng_ = Rng(seed); }
  TeamCommands act(const WorldState& world, Team team, const Config& cfg) override;
  std::unique_ptr<Policy> clone() const override { return std::make_unique<BaselinePolicy>(kind_); }

 private:
  BaselineKind kind_;
  Rng rng_;
};

/// Q-network agent: encode, epsilon-greedy joint action, targets around the
/// predicted ball, then the rule-based keeper and phase overrides.
class DqnPolicy final : public Policy {
 public:
  DqnPolicy(Mlp net, double epsilon, std::string name = "dqn");
  std::string name() const override { return name_; }
  void reset(std::uint64_t seed) override;
  TeamCommands act(const WorldState& world, Team team, const Config& cfg) override;
  std::optional<int> last_action() const override { return last_action_; }
  std::unique_ptr<Policy> clone() const override;

  const StateVector& last_state() const { return last_state_; }
  void set_epsilon(double eps) { epsilon_ = eps; }
  double epsilon() const { return epsilon_; }
  const Mlp& network() const { return net_; }
  Mlp& network() { return net_; }

 private:
  Mlp net_;
  double epsilon_;
  std::string name_;
  Rng rng_;
  KickoffPlan plan_;
  StateVector last_state_{};
  std::optional<int> last_action_;
};

}  // namespace sdqn
