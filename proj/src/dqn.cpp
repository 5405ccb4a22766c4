// SPDX-License-Identifier: Apache-2.0
#include "soccerdqn/dqn.hpp"

#include <algorithm>
#include <cmath>

#include "soccerdqn/error.hpp"

namespace sdqn {

ReplayBuffer::ReplayBuffer(std::size_t capacity, std::size_t state_size)
    : capacity_(capacity),
      state_size_(state_size),
      states_(capacity * state_size),
      next_states_(capacity * state_size),
      actions_(capacity),
      rewards_(capacity),
      dones_(capacity) {
  require(capacity > 0 && state_size > 0, "replay buffer: capacity and state size must be positive");
}

void ReplayBuffer::push(const Transition& t) { push(t.s, t.a, t.r, t.s_next, t.done); }

void ReplayBuffer::push(std::span<const float> s, int a, double r, std::span<const float> s_next,
                        bool done) {
  require(s.size() == state_size_ && s_next.size() == state_size_,
          "replay buffer: state length mismatch");
  std::ranges::copy(s, states_.begin() + static_cast<std::ptrdiff_t>(head_ * state_size_));
  std::ranges::copy(s_next, next_states_.begin() + static_cast<std::ptrdiff_t>(head_ * state_size_));
  actions_[head_] = a;
  rewards_[head_] = r;
  dones_[head_] = done ? 1 : 0;
  head_ = (head_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

std::span<const float> ReplayBuffer::state(std::size_t slot) const {
  return std::span<const float>(states_).subspan(slot * state_size_, state_size_);
}

std::span<const float> ReplayBuffer::next_state(std::size_t slot) const {
  return std::span<const float>(next_states_).subspan(slot * state_size_, state_size_);
}

Transition ReplayBuffer::at(std::size_t i) const {
  require(i < size_, "replay buffer: index out of range");
  const std::size_t oldest = size_ < capacity_ ? 0 : head_;
  const std::size_t slot = (oldest + i) % capacity_;
  const auto s = state(slot);
  const auto sn = next_state(slot);
  return {{s.begin(), s.end()}, actions_[slot], rewards_[slot], {sn.begin(), sn.end()}, done(slot)};
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t n, Rng& rng) const {
  if (size_ < n) {
    throw_error(ErrorCode::kInsufficientData, "replay buffer holds " + std::to_string(size_) +
                                                  " transitions, " + std::to_string(n) + " requested");
  }
  std::vector<std::size_t> out(n);
  for (auto& i : out) i = static_cast<std::size_t>(rng.index(size_));
  return out;
}

std::vector<Transition> ReplayBuffer::sample(std::size_t n, Rng& rng) const {
  std::vector<Transition> out;
  out.reserve(n);
  for (const std::size_t i : sample_indices(n, rng)) out.push_back(at(i));
  return out;
}

double epsilon(const EpsilonSchedule& schedule, std::int64_t step) {
  require(step >= 0, "epsilon: step must be non-negative");
  const double drops = static_cast<double>(step / schedule.interval);
  return std::max(schedule.floor, schedule.start - schedule.decrement * drops);
}

int argmax(std::span<const float> values) {
  require(!values.empty(), "argmax: empty input");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return static_cast<int>(best);
}

int select_action(const Mlp& net, std::span<const float> state, double eps, Rng& rng) {
  require(eps >= 0.0 && eps <= 1.0, "select_action: epsilon must lie in [0, 1]");
  // The exploration draw is always consumed so the random stream does not
  // depend on the network outputs.
  const double u = rng.uniform();
  if (u < eps) return static_cast<int>(rng.index(static_cast<std::uint64_t>(net.output_size())));
  const auto q = forward(net, state);
  return argmax(q);
}

std::vector<double> td_targets(std::span<const Transition> batch, const Mlp& target_net,
                               double gamma) {
  require(!batch.empty(), "td_targets: empty batch");
  std::vector<double> out;
  out.reserve(batch.size());
  for (const auto& t : batch) {
    if (t.done) {
      out.push_back(t.r);
      continue;
    }
    const auto q = forward(target_net, std::span<const float>(t.s_next));
    const float best = *std::max_element(q.begin(), q.end());
    out.push_back(t.r + gamma * static_cast<double>(best));
  }
  return out;
}

DqnLearner::DqnLearner(Mlp behavior, const NetworkConfig& net_cfg, const TrainerConfig& cfg)
    : behavior_(std::move(behavior)),
      target_(behavior_),
      adam_(behavior_.params().size(),
            AdamParams{net_cfg.learning_rate, net_cfg.beta1, net_cfg.beta2, net_cfg.adam_epsilon}),
      cfg_(cfg),
      grad_clip_(net_cfg.grad_clip),
      grad_(behavior_.params().size()) {}

bool DqnLearner::gate_open(const ReplayBuffer& buffer) const {
  return static_cast<std::int64_t>(buffer.size()) >= cfg_.train_start;
}

void DqnLearner::sync_target() { sdqn::sync_target(behavior_, target_); }

std::optional<double> DqnLearner::train_step(const ReplayBuffer& buffer, Rng& rng) {
  if (!gate_open(buffer)) return std::nullopt;
  const auto batch = static_cast<std::size_t>(cfg_.batch_size);
  const std::size_t in = buffer.state_size();
  require(in == static_cast<std::size_t>(behavior_.input_size()),
          "train_step: buffer state size does not match the network");
  const auto n_out = static_cast<std::size_t>(target_.output_size());

  // Translate logical indices to physical slots; the order of stored
  // transitions does not matter for uniform sampling.
  const auto picks = buffer.sample_indices(batch, rng);
  inputs_.resize(batch * in);
  next_inputs_.resize(batch * in);
  batch_actions_.resize(batch);
  for (std::size_t k = 0; k < batch; ++k) {
    const std::size_t slot = picks[k];
    std::ranges::copy(buffer.state(slot), inputs_.begin() + static_cast<std::ptrdiff_t>(k * in));
    std::ranges::copy(buffer.next_state(slot), next_inputs_.begin() + static_cast<std::ptrdiff_t>(k * in));
    batch_actions_[k] = buffer.action(slot);
  }

  next_q_.resize(batch * n_out);
  forward_batch(target_, std::span<const float>(next_inputs_), batch, std::span<float>(next_q_),
                target_ws_);
  batch_targets_.resize(batch);
  for (std::size_t k = 0; k < batch; ++k) {
    const std::size_t slot = picks[k];
    double y = buffer.reward(slot);
    if (!buffer.done(slot)) {
      const auto row = std::span<const float>(next_q_).subspan(k * n_out, n_out);
      y += cfg_.gamma * static_cast<double>(*std::max_element(row.begin(), row.end()));
    }
    batch_targets_[k] = static_cast<float>(y);
  }

  const float loss = backward(behavior_, std::span<const float>(inputs_),
                              std::span<const int>(batch_actions_),
                              std::span<const float>(batch_targets_), std::span<float>(grad_), ws_);
  if (grad_clip_ > 0.0) clip_gradient(std::span<float>(grad_), grad_clip_);
  adam_step(behavior_, std::span<const float>(grad_), adam_);
  ++updates_;
  if (updates_ % cfg_.target_sync_period == 0) sync_target();
  return static_cast<double>(loss);
}

}  // namespace sdqn
