#pragma once

#include <span>
#include <vector>

#include "core/rng.hpp"
#include "core/vec.hpp"

namespace dimapg {

enum class Activation { relu, tanh };

// Dense feed-forward network description. Hidden layers use the configured
// activation, the output layer is linear. The parameter layout is a pure
// function of the spec: for each layer, the weight matrix row-major
// (out x in), then the bias vector.
struct MlpSpec {
  int input_dim = 1;
  std::vector<int> hidden_dims;
  int output_dim = 1;
  Activation activation = Activation::relu;

  int num_layers() const { return static_cast<int>(hidden_dims.size()) + 1; }
  int layer_in(int l) const {
    return l == 0 ? input_dim : hidden_dims[static_cast<std::size_t>(l - 1)];
  }
  int layer_out(int l) const {
    return l == num_layers() - 1 ? output_dim
                                 : hidden_dims[static_cast<std::size_t>(l)];
  }
  int param_count() const;
  void validate() const;

  bool operator==(const MlpSpec&) const = default;
};

// Per-layer pre-activations and activations retained from a forward pass,
// sufficient to run backward for the same input.
struct ForwardCache {
  std::vector<double> input;
  std::vector<std::vector<double>> pre;   // z_l per layer
  std::vector<std::vector<double>> post;  // activation(z_l) per layer
};

// Weights ~ uniform(-b, b) with b = sqrt(6 / (fan_in + fan_out)), biases
// zero. Deterministic given the stream state.
ParamVector init_params(const MlpSpec& spec, RandomStream& rng);

std::vector<double> forward(const MlpSpec& spec, std::span<const double> params,
                            std::span<const double> input,
                            ForwardCache* cache = nullptr);

// Gradient of a scalar loss w.r.t. every parameter, given dL/d(output).
ParamVector backward(const MlpSpec& spec, std::span<const double> params,
                     const ForwardCache& cache,
                     std::span<const double> output_grad);

// Accumulates scale * dL/dtheta into grad without materializing a temporary
// parameter vector; the hot path of the policy-gradient estimators.
void backward_accumulate(const MlpSpec& spec, std::span<const double> params,
                         const ForwardCache& cache,
                         std::span<const double> output_grad, double scale,
                         std::span<double> grad);

}  // namespace dimapg
