// SPDX-License-Identifier: Apache-2.0
#include <chrono>
#include <cmath>

#include "doctest.h"
#include "soccerdqn/dqn.hpp"
#include "soccerdqn/error.hpp"
#include "toy_mdp.hpp"

using namespace sdqn;

namespace {

Transition make(float s, int a, double r, float s_next, bool done) {
  return {{s, 0.0f}, a, r, {s_next, 0.0f}, done};
}

}  // namespace

TEST_CASE("ring buffer push and eviction") {
  ReplayBuffer buf(3, 2);
  CHECK(buf.size() == 0);
  buf.push(make(1, 0, 0.0, 1, false));
  CHECK(buf.size() == 1);
  buf.push(make(2, 0, 0.0, 2, false));
  buf.push(make(3, 0, 0.0, 3, false));
  buf.push(make(4, 0, 0.0, 4, false));
  CHECK(buf.size() == 3);
  CHECK(buf.at(0).s[0] == 2.0f);
  CHECK(buf.at(2).s[0] == 4.0f);
  CHECK_THROWS_AS((void)buf.at(3), Error);
}

TEST_CASE("sampling") {
  ReplayBuffer buf(10, 2);
  Rng rng(1);
  try {
    (void)buf.sample(1, rng);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInsufficientData);
  }
  buf.push(make(7, 3, 0.5, 8, true));
  const auto one = buf.sample(1, rng);
  CHECK(one[0].s[0] == 7.0f);
  CHECK(one[0].a == 3);
  for (int i = 0; i < 9; ++i) buf.push(make(static_cast<float>(i), 0, 0.0, 0, false));
  Rng r1(99);
  Rng r2(99);
  CHECK(buf.sample_indices(10, r1) == buf.sample_indices(10, r2));

  // 10^5 draws over 10 slots; Pearson chi-square with 9 degrees of freedom
  // stays below 27.88 with probability 0.999 under uniformity.
  Rng r3(123);
  std::array<int, 10> counts{};
  for (int k = 0; k < 10000; ++k) {
    for (const auto i : buf.sample_indices(10, r3)) ++counts[i];
  }
  double chi2 = 0.0;
  for (const int c : counts) chi2 += (c - 10000.0) * (c - 10000.0) / 10000.0;
  CHECK(chi2 < 27.88);
}

TEST_CASE("epsilon schedule") {
  const EpsilonSchedule s{};
  CHECK(epsilon(s, 0) == 1.0);
  CHECK(epsilon(s, 19999) == 1.0);
  CHECK(epsilon(s, 20000) == doctest::Approx(0.95));
  CHECK(epsilon(s, 40000) == doctest::Approx(0.90));
  double prev = 2.0;
  for (std::int64_t t = 0; t < 1000000; t += 1000) {
    const double e = epsilon(s, t);
    CHECK(e <= prev);
    CHECK(e >= s.floor);
    prev = e;
  }
  CHECK(epsilon(s, 10000000) == s.floor);
}

TEST_CASE("greedy and exploratory action selection") {
  Mlp net({2, 256});
  const std::vector<float> x{0.1f, 0.2f};
  Rng rng(1);
  CHECK(select_action(net, x, 0.0, rng) == 0);  // all-equal outputs
  net.bias(0)[42] = 1.0f;
  CHECK(select_action(net, x, 0.0, rng) == 42);

  std::array<int, 256> counts{};
  const int n = 256 * 400;
  for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(select_action(net, x, 1.0, rng))];
  // Chi-square with 255 degrees of freedom; 99.9% quantile is about 330.
  double chi2 = 0.0;
  for (const int c : counts) chi2 += (c - 400.0) * (c - 400.0) / 400.0;
  CHECK(chi2 < 330.0);
}

TEST_CASE("td targets") {
  Mlp target({2, 4});
  target.bias(0)[1] = 2.0f;
  const std::vector<Transition> batch{make(0, 0, 1.0, 0, true), make(0, 0, 0.5, 0, false)};
  const auto y = td_targets(batch, target, 0.99);
  CHECK(y[0] == 1.0);
  CHECK(y[1] == doctest::Approx(2.48));
  const auto y0 = td_targets(batch, target, 0.0);
  CHECK(y0[1] == 0.5);
  CHECK_THROWS(td_targets(std::span<const Transition>{}, target, 0.9));
}

namespace {

TrainerConfig small_trainer() {
  TrainerConfig t;
  t.batch_size = 64;
  t.train_start = 64;
  t.capacity = 1000;
  t.target_sync_period = 10;
  return t;
}

}  // namespace

TEST_CASE("gate stays closed below train_start") {
  TrainerConfig t;
  NetworkConfig nc;
  Rng rng(1);
  DqnLearner learner(init_network<float>({2, 8, 4}, rng), nc, t);
  ReplayBuffer buf(static_cast<std::size_t>(t.capacity), 2);
  for (int i = 0; i < 4999; ++i) buf.push(make(0.1f, i % 4, 1.0, 0.2f, false));
  const Mlp before = learner.behavior();
  CHECK_FALSE(learner.gate_open(buf));
  CHECK_FALSE(learner.train_step(buf, rng).has_value());
  CHECK(learner.behavior() == before);
  CHECK(learner.updates() == 0);
  buf.push(make(0.1f, 0, 1.0, 0.2f, false));
  CHECK(learner.gate_open(buf));
  CHECK(learner.train_step(buf, rng).has_value());
  CHECK(learner.updates() == 1);
}

TEST_CASE("already optimal zero network has zero loss") {
  NetworkConfig nc;
  Rng rng(2);
  DqnLearner learner(Mlp({2, 8, 4}), nc, small_trainer());
  ReplayBuffer buf(100, 2);
  for (int i = 0; i < 100; ++i) buf.push(make(0.3f, 1, 0.0, 0.3f, true));
  CHECK(*learner.train_step(buf, rng) == 0.0);
}

TEST_CASE("loss falls when overfitting one transition") {
  NetworkConfig nc;
  Rng rng(3);
  DqnLearner learner(init_network<float>({2, 16, 4}, rng), nc, small_trainer());
  ReplayBuffer buf(100, 2);
  for (int i = 0; i < 100; ++i) buf.push(make(0.5f, 2, 1.0, 0.5f, true));
  std::vector<double> losses;
  for (int i = 0; i < 200; ++i) losses.push_back(*learner.train_step(buf, rng));
  // Compare early and late windows rather than consecutive steps.
  double early = 0.0;
  double late = 0.0;
  for (int i = 10; i < 30; ++i) early += losses[static_cast<std::size_t>(i)];
  for (int i = 180; i < 200; ++i) late += losses[static_cast<std::size_t>(i)];
  CHECK(late < 0.1 * early);
  CHECK(losses.back() < losses.front());
}

TEST_CASE("target network syncs every period and stays stale in between") {
  NetworkConfig nc;
  Rng rng(4);
  TrainerConfig t = small_trainer();
  t.target_sync_period = 1000;
  DqnLearner learner(init_network<float>({2, 8, 4}, rng), nc, t);
  ReplayBuffer buf(100, 2);
  for (int i = 0; i < 100; ++i) buf.push(make(0.5f, i % 4, 1.0, 0.25f, i % 3 == 0));
  const Mlp initial = learner.target();
  std::vector<Transition> probe{make(0.25f, 0, 0.0, 0.5f, false)};
  const auto y_before = td_targets(probe, learner.target(), 0.99);
  for (int i = 0; i < 999; ++i) (void)learner.train_step(buf, rng);
  CHECK(learner.target() == initial);
  CHECK(td_targets(probe, learner.target(), 0.99) == y_before);
  CHECK_FALSE(learner.behavior() == initial);
  (void)learner.train_step(buf, rng);
  CHECK(learner.updates() == 1000);
  CHECK(learner.target() == learner.behavior());
  for (int i = 0; i < 1000; ++i) (void)learner.train_step(buf, rng);
  CHECK(learner.updates() == 2000);
  CHECK(learner.target() == learner.behavior());
}

TEST_CASE("identical seeds give identical loss curves") {
  auto run = [] {
    NetworkConfig nc;
    Rng rng(5);
    DqnLearner learner(init_network<float>({2, 16, 4}, rng), nc, small_trainer());
    ReplayBuffer buf(200, 2);
    for (int i = 0; i < 200; ++i) {
      buf.push(make(static_cast<float>(i % 7) / 7.0f, i % 4, (i % 5) * 0.1, 0.1f, i % 2 == 0));
    }
    std::vector<double> out;
    for (int i = 0; i < 100; ++i) out.push_back(*learner.train_step(buf, rng));
    return out;
  };
  CHECK(run() == run());
}

TEST_CASE("learned Q values match value iteration on a toy MDP") {
  const test::ToyMdp m;
  const auto oracle = test::value_iteration(m);
  CHECK(oracle[1][0] == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(oracle[3][1] == doctest::Approx(5.05).epsilon(1e-9));
  const auto start = std::chrono::steady_clock::now();
  const auto learned = test::train_toy(m, 11, 20000);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(test::max_abs_error(learned, oracle) < 0.05);
  CHECK(seconds < 60.0);
}
