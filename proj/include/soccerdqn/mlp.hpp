// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "soccerdqn/rng.hpp"

namespace sdqn {

/// Fully connected network with ReLU hidden layers and a linear output head.
///
/// Parameters live in one flat buffer. Layer l occupies
/// `dims[l] * dims[l+1]` weights stored input-major (weight from input i to
/// output o at `i * dims[l+1] + o`), followed by `dims[l+1]` biases. Layers
/// are laid out in order. Checkpoints serialize this buffer verbatim.
template <class T>
class BasicMlp {
 public:
  BasicMlp() = default;
  /// Zero-initialized network.
  explicit BasicMlp(std::vector<int> dims);

  static std::size_t param_count(std::span<const int> dims);

  std::span<const int> dims() const { return dims_; }
  std::size_t layer_count() const { return dims_.empty() ? 0 : dims_.size() - 1; }
  int input_size() const { return dims_.front(); }
  int output_size() const { return dims_.back(); }
  int max_width() const;

  std::span<T> params() { return params_; }
  std::span<const T> params() const { return params_; }

  std::span<T> weights(std::size_t layer);
  std::span<const T> weights(std::size_t layer) const;
  std::span<T> bias(std::size_t layer);
  std::span<const T> bias(std::size_t layer) const;

  /// Same dims, parameters converted to U.
  template <class U>
  BasicMlp<U> cast() const {
    BasicMlp<U> out(dims_);
    for (std::size_t i = 0; i < params_.size(); ++i) out.params()[i] = static_cast<U>(params_[i]);
    return out;
  }

  friend bool operator==(const BasicMlp&, const BasicMlp&) = default;

 private:
  std::vector<int> dims_;
  std::vector<std::size_t> offsets_;
  std::vector<T> params_;
};

using Mlp = BasicMlp<float>;

/// Scratch buffers reused across calls so steady-state training does not
/// allocate.
template <class T>
struct MlpWorkspace {
  std::vector<std::vector<T>> activations;  ///< per layer, batch-major
  std::vector<T> delta;
  std::vector<T> delta_prev;
};

/// Single-sample forward pass.
template <class T>
std::vector<T> forward(const BasicMlp<T>& net, std::span<const T> input);

/// Batched forward pass; `inputs` is [batch][input_size], `outputs` receives
/// [batch][output_size].
template <class T>
void forward_batch(const BasicMlp<T>& net, std::span<const T> inputs, std::size_t batch,
                   std::span<T> outputs, MlpWorkspace<T>& ws);

/// Mean squared error between Q(s, a) and `targets`, with gradients flowing
/// only through each sample's selected output. `grad` is overwritten and must
/// have the network's parameter count. Returns the loss.
template <class T>
T backward(const BasicMlp<T>& net, std::span<const T> inputs, std::span<const int> actions,
           std::span<const T> targets, std::span<T> grad, MlpWorkspace<T>& ws);

template <class T>
struct BackwardResult {
  T loss;
  std::vector<T> grad;
};

template <class T>
BackwardResult<T> backward(const BasicMlp<T>& net, std::span<const T> inputs,
                           std::span<const int> actions, std::span<const T> targets);

struct AdamParams {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

template <class T>
struct AdamState {
  AdamParams hyper;
  std::vector<T> m;
  std::vector<T> v;
  std::int64_t t = 0;

  AdamState() = default;
  AdamState(std::size_t n, AdamParams p) : hyper(p), m(n, T(0)), v(n, T(0)) {}
};

/// One bias-corrected Adam update; increments `state.t`.
template <class T>
void adam_step(BasicMlp<T>& net, std::span<const T> grad, AdamState<T>& state);

/// Scales `grad` so its L2 norm is at most `max_norm`. Returns the pre-clip norm.
template <class T>
double clip_gradient(std::span<T> grad, double max_norm);

/// He-uniform weights in +-sqrt(6 / fan_in), zero biases.
template <class T>
BasicMlp<T> init_network(std::vector<int> dims, Rng& rng);

/// Copies parameters; throws a contract violation on mismatched dims.
template <class T>
void sync_target(const BasicMlp<T>& behavior, BasicMlp<T>& target);

}  // namespace sdqn
