// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "soccerdqn/error.hpp"
#include "soccerdqn/mlp.hpp"

using namespace sdqn;

TEST_CASE("parameter count of the agent network") {
  const std::vector<int> dims{22, 256, 256, 256};
  // (22*256 + 256) + (256*256 + 256) + (256*256 + 256)
  CHECK(Mlp::param_count(dims) == 137472);
  CHECK(Mlp(dims).params().size() == 137472);
}

TEST_CASE("zero network and bias passthrough") {
  Mlp net({3, 4, 2});
  const std::vector<float> x{0.3f, -1.0f, 2.0f};
  for (const float q : forward(net, std::span<const float>(x))) CHECK(q == 0.0f);
  net.bias(1)[0] = 1.5f;
  net.bias(1)[1] = -0.25f;
  const auto q = forward(net, std::span<const float>(x));
  CHECK(q[0] == 1.5f);
  CHECK(q[1] == -0.25f);
}

TEST_CASE("hand-built 2-2-1 network") {
  BasicMlp<double> net({2, 2, 1});
  // Hidden: h0 = relu(1*x0 + 2*x1 + 0.5), h1 = relu(-1*x0 + 1*x1 - 1)
  auto w0 = net.weights(0);  // input-major
  w0[0 * 2 + 0] = 1.0;
  w0[1 * 2 + 0] = 2.0;
  w0[0 * 2 + 1] = -1.0;
  w0[1 * 2 + 1] = 1.0;
  net.bias(0)[0] = 0.5;
  net.bias(0)[1] = -1.0;
  // Output: y = 3*h0 - 2*h1 + 0.1
  net.weights(1)[0] = 3.0;
  net.weights(1)[1] = -2.0;
  net.bias(1)[0] = 0.1;
  const std::vector<double> x{1.0, 2.0};
  // h0 = relu(1 + 4 + 0.5) = 5.5; h1 = relu(-1 + 2 - 1) = 0
  CHECK(forward(net, std::span<const double>(x))[0] == doctest::Approx(16.6));
  const std::vector<double> x2{-2.0, 1.0};
  // h0 = relu(-2 + 2 + 0.5) = 0.5; h1 = relu(2 + 1 - 1) = 2
  CHECK(forward(net, std::span<const double>(x2))[0] == doctest::Approx(1.5 - 4.0 + 0.1));
}

TEST_CASE("perfect fit gives zero loss and gradient") {
  Rng rng(1);
  auto net = init_network<double>({4, 8, 3}, rng);
  const std::vector<double> x{0.1, -0.2, 0.3, 0.7, 1.0, 0.0, -0.5, 0.25};
  const std::vector<int> a{2, 0};
  std::vector<double> y;
  for (std::size_t k = 0; k < 2; ++k) {
    y.push_back(forward(net, std::span<const double>(x).subspan(4 * k, 4))[static_cast<std::size_t>(a[k])]);
  }
  const auto r = backward(net, std::span<const double>(x), std::span<const int>(a), std::span<const double>(y));
  CHECK(r.loss == 0.0);
  for (const double g : r.grad) CHECK(g == 0.0);
}

TEST_CASE("linear 1-1 network closed form") {
  BasicMlp<double> net({1, 1});
  net.weights(0)[0] = 0.7;
  net.bias(0)[0] = 0.2;
  const std::vector<double> x{1.5};
  const std::vector<int> a{0};
  const std::vector<double> y{3.0};
  const auto r = backward(net, std::span<const double>(x), std::span<const int>(a), std::span<const double>(y));
  const double q = 0.7 * 1.5 + 0.2;
  CHECK(r.loss == doctest::Approx((q - 3.0) * (q - 3.0)));
  CHECK(r.grad[0] == doctest::Approx(2.0 * (q - 3.0) * 1.5));
  CHECK(r.grad[1] == doctest::Approx(2.0 * (q - 3.0)));
}

namespace {

double loss_at(const BasicMlp<double>& net, std::span<const double> x, std::span<const int> a,
               std::span<const double> y) {
  const std::size_t in = static_cast<std::size_t>(net.input_size());
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double q = forward(net, x.subspan(k * in, in))[static_cast<std::size_t>(a[k])];
    sum += (q - y[k]) * (q - y[k]);
  }
  return sum / static_cast<double>(a.size());
}

}  // namespace

TEST_CASE("analytic gradient matches central differences") {
  Rng rng(77);
  int probes = 0;
  double worst = 0.0;
  for (int net_i = 0; net_i < 10; ++net_i) {
    std::vector<int> dims{1 + static_cast<int>(rng.index(16))};
    const int hidden = 1 + static_cast<int>(rng.index(3));
    for (int h = 0; h < hidden; ++h) dims.push_back(1 + static_cast<int>(rng.index(16)));
    dims.push_back(1 + static_cast<int>(rng.index(16)));
    auto net = init_network<double>(dims, rng);
    for (auto& b : net.params()) b += rng.uniform(-0.1, 0.1);  // nonzero biases too
    const std::size_t batch = 1 + rng.index(5);
    std::vector<double> x(batch * static_cast<std::size_t>(dims.front()));
    for (auto& v : x) v = rng.uniform(-1.0, 1.0);
    std::vector<int> a(batch);
    for (auto& v : a) v = static_cast<int>(rng.index(static_cast<std::uint64_t>(dims.back())));
    std::vector<double> y(batch);
    for (auto& v : y) v = rng.uniform(-2.0, 2.0);
    const auto r = backward(net, std::span<const double>(x), std::span<const int>(a), std::span<const double>(y));
    for (int p = 0; p < 10; ++p, ++probes) {
      const std::size_t i = rng.index(net.params().size());
      const double h = 1e-6;
      auto plus = net;
      plus.params()[i] += h;
      auto minus = net;
      minus.params()[i] -= h;
      const double fd = (loss_at(plus, x, a, y) - loss_at(minus, x, a, y)) / (2.0 * h);
      const double rel = std::abs(fd - r.grad[i]) / std::max(1e-6, std::abs(fd) + std::abs(r.grad[i]));
      worst = std::max(worst, rel);
    }
  }
  CHECK(probes == 100);
  CHECK(worst < 1e-4);
}

TEST_CASE("float and double paths agree") {
  Rng rng(5);
  auto netd = init_network<double>({22, 32, 32, 8}, rng);
  const Mlp netf = netd.cast<float>();
  std::vector<float> x(22);
  for (auto& v : x) v = static_cast<float>(rng.uniform(-1.0, 1.0));
  std::vector<double> xd(x.begin(), x.end());
  const auto qf = forward(netf, std::span<const float>(x));
  const auto qd = forward(netd.cast<float>().cast<double>(), std::span<const double>(xd));
  for (std::size_t i = 0; i < qf.size(); ++i) CHECK(qf[i] == doctest::Approx(qd[i]).epsilon(1e-4));
}

TEST_CASE("batched forward equals per-sample forward") {
  Rng rng(6);
  const Mlp net = init_network<float>({22, 64, 64, 256}, rng);
  const std::size_t batch = 5;
  std::vector<float> x(batch * 22);
  for (auto& v : x) v = static_cast<float>(rng.uniform(-1.0, 1.0));
  std::vector<float> out(batch * 256);
  MlpWorkspace<float> ws;
  forward_batch(net, std::span<const float>(x), batch, std::span<float>(out), ws);
  for (std::size_t k = 0; k < batch; ++k) {
    const auto q = forward(net, std::span<const float>(x).subspan(k * 22, 22));
    for (std::size_t o = 0; o < 256; ++o) CHECK(out[k * 256 + o] == doctest::Approx(q[o]).epsilon(1e-5));
  }
}

TEST_CASE("first Adam step") {
  BasicMlp<double> net({1, 1});
  AdamState<double> st(2, AdamParams{1e-3, 0.9, 0.999, 1e-8});
  const std::vector<double> g{1.0, 0.0};
  adam_step(net, std::span<const double>(g), st);
  CHECK(st.t == 1);
  // m_hat = 1, v_hat = 1: -lr * 1 / (1 + 1e-8)
  CHECK(net.params()[0] == doctest::Approx(-1e-3 / (1.0 + 1e-8)).epsilon(1e-12));
  CHECK(net.params()[0] == doctest::Approx(-9.99999995e-4).epsilon(1e-9));
  CHECK(net.params()[1] == 0.0);
}

TEST_CASE("Adam with zero gradient leaves parameters alone") {
  Rng rng(8);
  auto net = init_network<double>({3, 4, 2}, rng);
  const auto before = net;
  AdamState<double> st(net.params().size(), AdamParams{});
  const std::vector<double> g(net.params().size(), 0.0);
  for (int i = 0; i < 3; ++i) adam_step(net, std::span<const double>(g), st);
  CHECK(net == before);
}

TEST_CASE("second Adam step with the same gradient") {
  BasicMlp<double> net({1, 1});
  AdamParams hp{1e-3, 0.9, 0.999, 1e-8};
  AdamState<double> st(2, hp);
  const std::vector<double> g{0.5, -2.0};
  adam_step(net, std::span<const double>(g), st);
  const double first = std::abs(net.params()[0]);
  const double before = net.params()[0];
  adam_step(net, std::span<const double>(g), st);
  const double second = std::abs(net.params()[0] - before);
  CHECK(second <= first * (1.0 + 1e-9));
  // Closed form: with a constant gradient both bias-corrected moments equal
  // g and g^2, so each step is lr * |g| / (|g| + eps).
  CHECK(second == doctest::Approx(1e-3 * 0.5 / (0.5 + 1e-8)).epsilon(1e-9));
}

TEST_CASE("initialization is seeded and bounded") {
  Rng a(42);
  Rng b(42);
  const Mlp na = init_network<float>({22, 256, 256, 256}, a);
  const Mlp nb = init_network<float>({22, 256, 256, 256}, b);
  CHECK(na == nb);
  const double bound = std::sqrt(6.0 / 22.0);
  for (const float w : na.weights(0)) CHECK(std::abs(w) <= bound);
  for (const float v : na.bias(0)) CHECK(v == 0.0f);
}

TEST_CASE("sync_target copies and then decouples") {
  Rng rng(3);
  Mlp behavior = init_network<float>({4, 8, 2}, rng);
  Mlp target({4, 8, 2});
  sync_target(behavior, target);
  CHECK(target == behavior);
  behavior.params()[0] += 1.0f;
  CHECK_FALSE(target == behavior);
  Mlp wrong({4, 9, 2});
  CHECK_THROWS_AS(sync_target(behavior, wrong), Error);
}

TEST_CASE("gradient clipping by global norm") {
  std::vector<float> g{3.0f, 4.0f};
  CHECK(clip_gradient(std::span<float>(g), 1.0) == doctest::Approx(5.0));
  CHECK(g[0] == doctest::Approx(0.6));
  CHECK(g[1] == doctest::Approx(0.8));
}
