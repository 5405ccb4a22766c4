// SPDX-License-Identifier: Apache-2.0
#include "soccerdqn/mlp.hpp"

#include <algorithm>
#include <cmath>

#include "soccerdqn/error.hpp"

namespace sdqn {

namespace {

// Eight independent accumulators so the compiler can keep the sum in vector
// lanes; the summation order is fixed, which keeps results reproducible.
template <class T>
T dot(const T* a, const T* b, std::size_t n) {
  T acc[8] = {};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    for (std::size_t k = 0; k < 8; ++k) acc[k] += a[i + k] * b[i + k];
  }
  T tail = 0;
  for (; i < n; ++i) tail += a[i] * b[i];
  return ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7])) + tail;
}

template <class T>
void axpy(T a, const T* x, T* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

template <class T>
void layer_forward(const T* w, const T* b, const T* in, std::size_t n_in, std::size_t n_out,
                   std::size_t batch, bool relu, T* out) {
  for (std::size_t s = 0; s < batch; ++s) {
    T* o = out + s * n_out;
    std::copy(b, b + n_out, o);
    const T* x = in + s * n_in;
    for (std::size_t i = 0; i < n_in; ++i) {
      if (x[i] != T(0)) axpy(x[i], w + i * n_out, o, n_out);
    }
    if (relu) {
      for (std::size_t k = 0; k < n_out; ++k) o[k] = o[k] > T(0) ? o[k] : T(0);
    }
  }
}

template <class T>
void run_forward(const BasicMlp<T>& net, std::span<const T> inputs, std::size_t batch,
                 MlpWorkspace<T>& ws) {
  const auto dims = net.dims();
  const std::size_t layers = net.layer_count();
  require(inputs.size() == batch * static_cast<std::size_t>(dims[0]),
          "forward: input length does not match the network input layer");
  ws.activations.resize(layers + 1);
  ws.activations[0].assign(inputs.begin(), inputs.end());
  for (std::size_t l = 0; l < layers; ++l) {
    const auto n_in = static_cast<std::size_t>(dims[l]);
    const auto n_out = static_cast<std::size_t>(dims[l + 1]);
    ws.activations[l + 1].resize(batch * n_out);
    layer_forward(net.weights(l).data(), net.bias(l).data(), ws.activations[l].data(), n_in, n_out,
                  batch, l + 1 < layers, ws.activations[l + 1].data());
  }
}

}  // namespace

template <class T>
BasicMlp<T>::BasicMlp(std::vector<int> dims) : dims_(std::move(dims)) {
  require(dims_.size() >= 2, "mlp: need at least input and output sizes");
  for (int d : dims_) require(d > 0, "mlp: layer sizes must be positive");
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
    offsets_.push_back(off);
    off += static_cast<std::size_t>(dims_[l]) * static_cast<std::size_t>(dims_[l + 1]) +
           static_cast<std::size_t>(dims_[l + 1]);
  }
  params_.assign(off, T(0));
}

template <class T>
std::size_t BasicMlp<T>::param_count(std::span<const int> dims) {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    n += static_cast<std::size_t>(dims[l]) * static_cast<std::size_t>(dims[l + 1]) +
         static_cast<std::size_t>(dims[l + 1]);
  }
  return n;
}

template <class T>
int BasicMlp<T>::max_width() const {
  return dims_.empty() ? 0 : *std::max_element(dims_.begin(), dims_.end());
}

template <class T>
std::span<T> BasicMlp<T>::weights(std::size_t layer) {
  const auto n = static_cast<std::size_t>(dims_[layer]) * static_cast<std::size_t>(dims_[layer + 1]);
  return std::span<T>(params_).subspan(offsets_[layer], n);
}

template <class T>
std::span<const T> BasicMlp<T>::weights(std::size_t layer) const {
  const auto n = static_cast<std::size_t>(dims_[layer]) * static_cast<std::size_t>(dims_[layer + 1]);
  return std::span<const T>(params_).subspan(offsets_[layer], n);
}

template <class T>
std::span<T> BasicMlp<T>::bias(std::size_t layer) {
  const auto n = static_cast<std::size_t>(dims_[layer]) * static_cast<std::size_t>(dims_[layer + 1]);
  return std::span<T>(params_).subspan(offsets_[layer] + n, static_cast<std::size_t>(dims_[layer + 1]));
}

template <class T>
std::span<const T> BasicMlp<T>::bias(std::size_t layer) const {
  const auto n = static_cast<std::size_t>(dims_[layer]) * static_cast<std::size_t>(dims_[layer + 1]);
  return std::span<const T>(params_).subspan(offsets_[layer] + n,
                                             static_cast<std::size_t>(dims_[layer + 1]));
}

template <class T>
std::vector<T> forward(const BasicMlp<T>& net, std::span<const T> input) {
  MlpWorkspace<T> ws;
  std::vector<T> out(static_cast<std::size_t>(net.output_size()));
  forward_batch(net, input, 1, std::span<T>(out), ws);
  return out;
}

template <class T>
void forward_batch(const BasicMlp<T>& net, std::span<const T> inputs, std::size_t batch,
                   std::span<T> outputs, MlpWorkspace<T>& ws) {
  require(outputs.size() == batch * static_cast<std::size_t>(net.output_size()),
          "forward: output buffer has the wrong size");
  run_forward(net, inputs, batch, ws);
  std::copy(ws.activations.back().begin(), ws.activations.back().end(), outputs.begin());
}

template <class T>
T backward(const BasicMlp<T>& net, std::span<const T> inputs, std::span<const int> actions,
           std::span<const T> targets, std::span<T> grad, MlpWorkspace<T>& ws) {
  const std::size_t batch = actions.size();
  require(batch > 0 && targets.size() == batch, "backward: inconsistent batch shapes");
  require(grad.size() == net.params().size(), "backward: gradient buffer has the wrong size");
  const auto dims = net.dims();
  const std::size_t layers = net.layer_count();
  const auto n_actions = static_cast<std::size_t>(net.output_size());
  for (int a : actions) {
    require(a >= 0 && static_cast<std::size_t>(a) < n_actions, "backward: action index out of range");
  }

  run_forward(net, inputs, batch, ws);
  std::fill(grad.begin(), grad.end(), T(0));

  // Output layer: only the selected action carries error.
  const auto& q = ws.activations[layers];
  const T scale = T(2) / static_cast<T>(batch);
  T loss = 0;
  std::vector<T> err(batch);
  for (std::size_t s = 0; s < batch; ++s) {
    const T e = q[s * n_actions + static_cast<std::size_t>(actions[s])] - targets[s];
    loss += e * e;
    err[s] = scale * e;
  }
  loss /= static_cast<T>(batch);

  const std::size_t last = layers - 1;
  std::size_t n_in = static_cast<std::size_t>(dims[last]);
  {
    T* gw = grad.data() + (net.weights(last).data() - net.params().data());
    T* gb = grad.data() + (net.bias(last).data() - net.params().data());
    const T* w = net.weights(last).data();
    const auto& act = ws.activations[last];
    ws.delta.assign(batch * n_in, T(0));
    for (std::size_t s = 0; s < batch; ++s) {
      const auto a = static_cast<std::size_t>(actions[s]);
      gb[a] += err[s];
      const T* x = act.data() + s * n_in;
      T* d = ws.delta.data() + s * n_in;
      for (std::size_t i = 0; i < n_in; ++i) {
        gw[i * n_actions + a] += x[i] * err[s];
        d[i] = x[i] > T(0) ? w[i * n_actions + a] * err[s] : T(0);
      }
    }
  }

  // Hidden layers, dense deltas. `ws.delta` holds dLoss/dPreactivation of
  // the output side of layer l.
  for (std::size_t l = last; l-- > 0;) {
    const auto n_out = n_in;
    n_in = static_cast<std::size_t>(dims[l]);
    T* gw = grad.data() + (net.weights(l).data() - net.params().data());
    T* gb = grad.data() + (net.bias(l).data() - net.params().data());
    const T* w = net.weights(l).data();
    const auto& act = ws.activations[l];
    const bool need_input_grad = l > 0;
    if (need_input_grad) ws.delta_prev.assign(batch * n_in, T(0));
    for (std::size_t s = 0; s < batch; ++s) {
      const T* d = ws.delta.data() + s * n_out;
      const T* x = act.data() + s * n_in;
      for (std::size_t k = 0; k < n_out; ++k) gb[k] += d[k];
      for (std::size_t i = 0; i < n_in; ++i) {
        if (x[i] == T(0)) continue;
        axpy(x[i], d, gw + i * n_out, n_out);
        if (need_input_grad && x[i] > T(0)) {
          ws.delta_prev[s * n_in + i] = dot(w + i * n_out, d, n_out);
        }
      }
    }
    if (need_input_grad) std::swap(ws.delta, ws.delta_prev);
  }
  return loss;
}

template <class T>
BackwardResult<T> backward(const BasicMlp<T>& net, std::span<const T> inputs,
                           std::span<const int> actions, std::span<const T> targets) {
  MlpWorkspace<T> ws;
  BackwardResult<T> r{T(0), std::vector<T>(net.params().size())};
  r.loss = backward(net, inputs, actions, targets, std::span<T>(r.grad), ws);
  return r;
}

template <class T>
void adam_step(BasicMlp<T>& net, std::span<const T> grad, AdamState<T>& state) {
  auto p = net.params();
  require(grad.size() == p.size() && state.m.size() == p.size() && state.v.size() == p.size(),
          "adam_step: parameter, gradient and moment layouts differ");
  state.t += 1;
  const auto& h = state.hyper;
  const double t = static_cast<double>(state.t);
  const T b1 = static_cast<T>(h.beta1);
  const T b2 = static_cast<T>(h.beta2);
  const T c1 = static_cast<T>(1.0 / (1.0 - std::pow(h.beta1, t)));
  const T c2 = static_cast<T>(1.0 / (1.0 - std::pow(h.beta2, t)));
  const T lr = static_cast<T>(h.learning_rate);
  const T eps = static_cast<T>(h.epsilon);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const T g = grad[i];
    state.m[i] = b1 * state.m[i] + (T(1) - b1) * g;
    state.v[i] = b2 * state.v[i] + (T(1) - b2) * g * g;
    const T m_hat = state.m[i] * c1;
    const T v_hat = state.v[i] * c2;
    p[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
  }
}

template <class T>
double clip_gradient(std::span<T> grad, double max_norm) {
  double sq = 0.0;
  for (const T g : grad) sq += static_cast<double>(g) * static_cast<double>(g);
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const T s = static_cast<T>(max_norm / norm);
    for (T& g : grad) g *= s;
  }
  return norm;
}

template <class T>
BasicMlp<T> init_network(std::vector<int> dims, Rng& rng) {
  BasicMlp<T> net(std::move(dims));
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const double bound = std::sqrt(6.0 / static_cast<double>(net.dims()[l]));
    for (T& w : net.weights(l)) w = static_cast<T>(rng.uniform(-bound, bound));
  }
  return net;
}

template <class T>
void sync_target(const BasicMlp<T>& behavior, BasicMlp<T>& target) {
  require(std::ranges::equal(behavior.dims(), target.dims()),
          "sync_target: behavior and target architectures differ");
  std::ranges::copy(behavior.params(), target.params().begin());
}

#define SDQN_INSTANTIATE(T)                                                                     \
  template class BasicMlp<T>;                                                                   \
  template std::vector<T> forward(const BasicMlp<T>&, std::span<const T>);                      \
  template void forward_batch(const BasicMlp<T>&, std::span<const T>, std::size_t, std::span<T>, \
                              MlpWorkspace<T>&);                                                \
  template T backward(const BasicMlp<T>&, std::span<const T>, std::span<const int>,             \
                      std::span<const T>, std::span<T>, MlpWorkspace<T>&);                      \
  template BackwardResult<T> backward(const BasicMlp<T>&, std::span<const T>,                   \
                                      std::span<const int>, std::span<const T>);                \
  template void adam_step(BasicMlp<T>&, std::span<const T>, AdamState<T>&);                     \
  template double clip_gradient(std::span<T>, double);                                          \
  template BasicMlp<T> init_network(std::vector<int>, Rng&);                                    \
  template void sync_target(const BasicMlp<T>&, BasicMlp<T>&);

SDQN_INSTANTIATE(float)
SDQN_INSTANTIATE(double)

#undef SDQN_INSTANTIATE

}  // namespace sdqn
