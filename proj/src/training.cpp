// SPDX-License-Identifier: Apache-2.0
#include "soccerdqn/training.hpp"

#include <algorithm>
#include <fstream>
#include <limits>

#include "json.hpp"

#include "soccerdqn/dqn.hpp"
#include "soccerdqn/error.hpp"
#include "soccerdqn/match.hpp"
#include "soccerdqn/percept.hpp"
#include "soccerdqn/policies.hpp"
#include "soccerdqn/rewards.hpp"
#include "soccerdqn/world.hpp"

namespace sdqn {

std::string metrics_json(const TrainMetrics& m) {
  nlohmann::ordered_json j;
  j["step"] = m.step;
  j["updates"] = m.updates;
  j["epsilon"] = m.epsilon;
  j["loss"] = m.loss ? nlohmann::ordered_json(*m.loss) : nlohmann::ordered_json(nullptr);
  j["mean_reward"] = m.mean_reward;
  j["goals_for"] = m.goals_for;
  j["goals_against"] = m.goals_against;
  return j.dump();
}

namespace {

void check_writable(const std::string& path) {
  if (path.empty()) return;
  std::ofstream probe(path, std::ios::binary | std::ios::app);
  if (!probe) throw_error(ErrorCode::kIo, "cannot write checkpoint '" + path + "'");
}

std::vector<int> agent_dims(const NetworkConfig& net) {
  require(net.dims.front() == static_cast<int>(kStateSize) && net.dims.back() == kActionCount,
          "network dims must start at the state size and end at the action count");
  return net.dims;
}

}  // namespace

TrainSummary train(const Config& cfg, const TrainOptions& options) {
  cfg.validate();
  const TrainerConfig& tc = cfg.trainer;

  std::int64_t step = 0;
  std::optional<Mlp> resumed;
  std::int64_t resumed_updates = 0;
  if (!options.resume_from.empty()) {
    const Checkpoint ckpt = load_checkpoint(options.resume_from);
    require(ckpt.dims == cfg.network.dims, "resume: checkpoint dims do not match the config");
    resumed = network_from(ckpt);
    step = static_cast<std::int64_t>(ckpt.step);
    resumed_updates = static_cast<std::int64_t>(ckpt.updates);
  }
  check_writable(options.checkpoint_path);

  // Separate streams so that exploration, sampling and initialization do not
  // shift each other; a resumed run starts fresh streams keyed by the step.
  const auto offset = static_cast<std::uint64_t>(step);
  Rng init_rng(Rng::derive(tc.seed, 1));
  Rng act_rng(Rng::derive(tc.seed, 2, offset));
  Rng sample_rng(Rng::derive(tc.seed, 3, offset));

  DqnLearner learner(resumed ? std::move(*resumed) : init_network<float>(agent_dims(cfg.network), init_rng),
                     cfg.network, tc);
  learner.set_updates(resumed_updates);
  ReplayBuffer buffer(static_cast<std::size_t>(tc.capacity), kStateSize);
  auto opponent = make_policy(tc.opponent);
  const EpsilonSchedule schedule = EpsilonSchedule::from(tc);
  auto current_epsilon = [&] {
    return epsilon(schedule, tc.epsilon_counts_frames ? step : learner.updates());
  };

  const std::int64_t fph = cfg.field.frames_per_half;
  std::int64_t half = step / fph;
  WorldState world;
  KickoffPlan plan;
  std::int64_t half_end = 0;
  auto start_half = [&] {
    world = initial_world(cfg, half % 2 == 0 ? Team::kHome : Team::kAway);
    // A resumed half is shortened so halves still end on multiples of
    // frames_per_half.
    half_end = (half + 1) * fph;
    plan = {};
    opponent->reset(Rng::derive(tc.seed, 4, static_cast<std::uint64_t>(half)));
  };
  start_half();

  TrainSummary summary;
  TrainMetrics window;
  double loss_sum = 0.0;
  std::int64_t loss_count = 0;
  double reward_sum = 0.0;
  std::int64_t reward_count = 0;
  double best_loss = std::numeric_limits<double>::infinity();
  int stale_windows = 0;

  auto write_checkpoint = [&] {
    summary.checkpoint = make_checkpoint(learner.behavior(), static_cast<std::uint64_t>(step),
                                         static_cast<std::uint64_t>(learner.updates()),
                                         current_epsilon());
    if (!options.checkpoint_path.empty()) save_checkpoint(options.checkpoint_path, summary.checkpoint);
  };

  auto flush_metrics = [&] {
    window.step = step;
    window.updates = learner.updates();
    window.epsilon = current_epsilon();
    window.loss = loss_count > 0 ? std::optional<double>(loss_sum / static_cast<double>(loss_count))
                                 : std::nullopt;
    window.mean_reward = reward_count > 0 ? reward_sum / static_cast<double>(reward_count) : 0.0;
    if (options.on_metrics) options.on_metrics(window);
    bool plateau = false;
    if (window.loss) {
      if (*window.loss < best_loss) {
        best_loss = *window.loss;
        stale_windows = 0;
      } else if (++stale_windows >= tc.plateau_patience && tc.plateau_patience > 0) {
        plateau = true;
      }
    }
    window = {};
    loss_sum = 0.0;
    loss_count = 0;
    reward_sum = 0.0;
    reward_count = 0;
    return plateau;
  };

  std::array<WheelCommand, kRobotCount> commands{};
  while (step < tc.total_steps) {
    const StateVector s = encode_state(world, Team::kHome, cfg.field);
    const int a = select_action(learner.behavior(), s, current_epsilon(), act_rng);
    const TeamCommands ours = commands_for_action(world, Team::kHome, a, cfg, plan);
    const TeamCommands theirs = opponent->act(world, Team::kAway, cfg);
    std::copy(ours.begin(), ours.end(), commands.begin());
    std::copy(theirs.begin(), theirs.end(), commands.begin() + kRobotsPerTeam);

    world = sdqn::step(world, commands, cfg);
    // Scored before the referee resets a goal to kickoff, so a goal frame
    // still sees the ball at the goal.
    const double r = team_reward(world, Team::kHome, cfg.field, cfg.reward);
    const TickEvents ev = referee(world, cfg);
    ++step;
    ++summary.steps_run;
    const bool half_over = step >= half_end;
    const bool done = half_over || ev.goal.has_value();
    if (ev.goal) {
      if (*ev.goal == Team::kHome) {
        ++window.goals_for;
      } else {
        ++window.goals_against;
      }
    }
    const StateVector s_next = encode_state(world, Team::kHome, cfg.field);
    buffer.push(s, a, r, s_next, done);
    reward_sum += r;
    ++reward_count;

    if (step % tc.train_every == 0) {
      if (auto loss = learner.train_step(buffer, sample_rng)) {
        loss_sum += *loss;
        ++loss_count;
      }
    }

    if (half_over) {
      ++half;
      start_half();
    }
    const bool last = step >= tc.total_steps;
    if (step % tc.log_every == 0 || last) {
      if (flush_metrics() && !last) {
        summary.stopped_on_plateau = true;
        break;
      }
    }
    if (!last && tc.checkpoint_every > 0 && step % tc.checkpoint_every == 0) write_checkpoint();
  }
  write_checkpoint();
  return summary;
}

}  // namespace sdqn
