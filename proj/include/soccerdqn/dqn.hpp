// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "soccerdqn/config.hpp"
#include "soccerdqn/mlp.hpp"
#include "soccerdqn/rng.hpp"

namespace sdqn {

/// One stored experience. States are kept as flat float vectors so the same
/// machinery serves the 22-input soccer agent and small test problems.
struct Transition {
  std::vector<float> s;
  int a = 0;
  double r = 0.0;
  std::vector<float> s_next;
  bool done = false;
};

/// Fixed-capacity ring buffer of transitions with uniform sampling.
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, std::size_t state_size);

  void push(const Transition& t);
  void push(std::span<const float> s, int a, double r, std::span<const float> s_next, bool done);

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t state_size() const { return state_size_; }

  /// Transition at logical position `i`, 0 being the oldest still stored.
  Transition at(std::size_t i) const;

  /// `n` uniform draws with replacement. Throws kInsufficientData when fewer
  /// than `n` transitions are stored.
  std::vector<std::size_t> sample_indices(std::size_t n, Rng& rng) const;
  std::vector<Transition> sample(std::size_t n, Rng& rng) const;

  /// Raw access by physical slot, for batch assembly.
  std::span<const float> state(std::size_t slot) const;
  std::span<const float> next_state(std::size_t slot) const;
  int action(std::size_t slot) const { return actions_[slot]; }
  double reward(std::size_t slot) const { return rewards_[slot]; }
  bool done(std::size_t slot) const { return dones_[slot] != 0; }

 private:
  std::size_t capacity_;
  std::size_t state_size_;
  std::size_t head_ = 0;  ///< next write slot
  std::size_t size_ = 0;
  std::vector<float> states_;
  std::vector<float> next_states_;
  std::vector<int> actions_;
  std::vector<double> rewards_;
  std::vector<std::uint8_t> dones_;
};

struct EpsilonSchedule {
  double start = 1.0;
  double decrement = 0.05;
  std::int64_t interval = 20000;
  double floor = 0.05;

  static EpsilonSchedule from(const TrainerConfig& cfg) {
    return {cfg.epsilon_start, cfg.epsilon_decrement, cfg.epsilon_interval, cfg.epsilon_min};
  }
};

/// max(floor, start - decrement * floor(step / interval))
double epsilon(const EpsilonSchedule& schedule, std::int64_t step);

/// Index of the largest value, lowest index on ties.
int argmax(std::span<const float> values);

/// Uniform random action with probability `eps`, greedy otherwise.
int select_action(const Mlp& net, std::span<const float> state, double eps, Rng& rng);

/// r for terminal transitions, r + gamma * max_a' Q_target(s', a') otherwise.
std::vector<double> td_targets(std::span<const Transition> batch, const Mlp& target_net,
                               double gamma);

/// Behavior network, target network and optimizer state trained together.
class DqnLearner {
 public:
  DqnLearner(Mlp behavior, const NetworkConfig& net_cfg, const TrainerConfig& cfg);

  Mlp& behavior() { return behavior_; }
  const Mlp& behavior() const { return behavior_; }
  const Mlp& target() const { return target_; }
  const AdamState<float>& optimizer() const { return adam_; }
  std::int64_t updates() const { return updates_; }
  void set_updates(std::int64_t n) { updates_ = n; }
  const TrainerConfig& config() const { return cfg_; }

  /// Whether the buffer holds enough transitions to train.
  bool gate_open(const ReplayBuffer& buffer) const;

  /// Samples a minibatch, computes targets with the target network and
  /// applies one Adam update to the behavior network. Returns nullopt (and
  /// changes nothing) while the gate is closed. Synchronizes the target
  /// network every `target_sync_period` updates.
  std::optional<double> train_step(const ReplayBuffer& buffer, Rng& rng);

  void sync_target();

 private:
  Mlp behavior_;
  Mlp target_;
  AdamState<float> adam_;
  TrainerConfig cfg_;
  double grad_clip_;
  std::int64_t updates_ = 0;
  MlpWorkspace<float> ws_;
  MlpWorkspace<float> target_ws_;
  std::vector<float> inputs_;
  std::vector<float> next_inputs_;
  std::vector<float> next_q_;
  std::vector<int> batch_actions_;
  std::vector<float> batch_targets_;
  std::vector<float> grad_;
};

}  // namespace sdqn
