#include "core/mlp.hpp"

#include <cmath>
#include <string>

#include "core/error.hpp"

namespace dimapg {

namespace {

// y[o] += sum_i W[o*in + i] * x[i]. Four independent accumulators keep the
// loop free of a serial FP dependency chain; the summation order is fixed by
// this code, so results are reproducible.
inline double dot(const double* w, const double* x, int n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += w[i] * x[i];
    s1 += w[i + 1] * x[i + 1];
    s2 += w[i + 2] * x[i + 2];
    s3 += w[i + 3] * x[i + 3];
  }
  for (; i < n; ++i) s0 += w[i] * x[i];
  return (s0 + s1) + (s2 + s3);
}

inline void axpy(double a, const double* x, double* y, int n) {
  for (int i = 0; i < n; ++i) y[i] += a * x[i];
}

inline double activate(Activation a, double z) {
  return a == Activation::relu ? (z > 0.0 ? z : 0.0) : std::tanh(z);
}

// Derivative expressed through the activation value; for tanh this avoids a
// second tanh evaluation.
inline double activate_grad(Activation a, double z, double post) {
  return a == Activation::relu ? (z > 0.0 ? 1.0 : 0.0) : 1.0 - post * post;
}

}  // namespace

int MlpSpec::param_count() const {
  int total = 0;
  for (int l = 0; l < num_layers(); ++l)
    total += layer_out(l) * (layer_in(l) + 1);
  return total;
}

void MlpSpec::validate() const {
  if (input_dim < 1 || output_dim < 1)
    throw DimensionError("MlpSpec: dims must be >= 1");
  for (int h : hidden_dims)
    if (h < 1) throw DimensionError("MlpSpec: hidden dims must be >= 1");
}

ParamVector init_params(const MlpSpec& spec, RandomStream& rng) {
  spec.validate();
  ParamVector p(static_cast<std::size_t>(spec.param_count()), 0.0);
  std::size_t off = 0;
  for (int l = 0; l < spec.num_layers(); ++l) {
    const int in = spec.layer_in(l);
    const int out = spec.layer_out(l);
    const double bound = std::sqrt(6.0 / static_cast<double>(in + out));
    for (int i = 0; i < out * in; ++i) p[off + i] = rng.uniform(-bound, bound);
    off += static_cast<std::size_t>(out) * (in + 1);  // biases stay zero
  }
  return p;
}

std::vector<double> forward(const MlpSpec& spec, std::span<const double> params,
                            std::span<const double> input,
                            ForwardCache* cache) {
  if (static_cast<int>(input.size()) != spec.input_dim)
    throw DimensionError("forward: input has length " +
                         std::to_string(input.size()) + ", spec wants " +
                         std::to_string(spec.input_dim));
  if (static_cast<int>(params.size()) != spec.param_count())
    throw DimensionError("forward: parameter vector length mismatch");

  if (cache) {
    cache->input.assign(input.begin(), input.end());
    cache->pre.assign(static_cast<std::size_t>(spec.num_layers()), {});
    cache->post.assign(static_cast<std::size_t>(spec.num_layers()), {});
  }

  std::vector<double> cur(input.begin(), input.end());
  std::size_t off = 0;
  for (int l = 0; l < spec.num_layers(); ++l) {
    const int in = spec.layer_in(l);
    const int out = spec.layer_out(l);
    const double* w = params.data() + off;
    const double* b = w + static_cast<std::size_t>(out) * in;
    const bool last = l == spec.num_layers() - 1;

    std::vector<double> next(static_cast<std::size_t>(out));
    for (int o = 0; o < out; ++o)
      next[static_cast<std::size_t>(o)] =
          b[o] + dot(w + static_cast<std::size_t>(o) * in, cur.data(), in);
    if (cache) cache->pre[static_cast<std::size_t>(l)] = next;
    if (!last)
      for (double& z : next) z = activate(spec.activation, z);
    if (cache) cache->post[static_cast<std::size_t>(l)] = next;

    cur = std::move(next);
    off += static_cast<std::size_t>(out) * (in + 1);
  }
  return cur;
}

void backward_accumulate(const MlpSpec& spec, std::span<const double> params,
                         const ForwardCache& cache,
                         std::span<const double> output_grad, double scale,
                         std::span<double> grad) {
  const int L = spec.num_layers();
  if (static_cast<int>(output_grad.size()) != spec.output_dim)
    throw DimensionError("backward: output_grad length mismatch");
  if (static_cast<int>(cache.pre.size()) != L ||
      static_cast<int>(cache.input.size()) != spec.input_dim)
    throw DimensionError("backward: cache does not match spec");
  if (grad.size() != params.size() ||
      static_cast<int>(params.size()) != spec.param_count())
    throw DimensionError("backward: parameter vector length mismatch");

  // Parameter offsets of each layer.
  std::vector<std::size_t> offs(static_cast<std::size_t>(L));
  std::size_t off = 0;
  for (int l = 0; l < L; ++l) {
    offs[static_cast<std::size_t>(l)] = off;
    off += static_cast<std::size_t>(spec.layer_out(l)) * (spec.layer_in(l) + 1);
  }

  // delta = scale * dL/dz for the output layer (linear head).
  std::vector<double> delta(output_grad.begin(), output_grad.end());
  for (double& d : delta) d *= scale;

  for (int l = L - 1; l >= 0; --l) {
    const int in = spec.layer_in(l);
    const int out = spec.layer_out(l);
    const double* w = params.data() + offs[static_cast<std::size_t>(l)];
    double* gw = grad.data() + offs[static_cast<std::size_t>(l)];
    double* gb = gw + static_cast<std::size_t>(out) * in;
    const double* below =
        l == 0 ? cache.input.data()
               : cache.post[static_cast<std::size_t>(l - 1)].data();

    // dL/dW[o][i] += delta[o] * below[i]; dL/db[o] += delta[o].
    for (int o = 0; o < out; ++o) {
      axpy(delta[static_cast<std::size_t>(o)],
           below, gw + static_cast<std::size_t>(o) * in, in);
      gb[o] += delta[static_cast<std::size_t>(o)];
    }

    if (l == 0) break;

    // delta_below[i] = sum_o W[o][i] * delta[o], then through the activation.
    std::vector<double> delta_below(static_cast<std::size_t>(in), 0.0);
    for (int o = 0; o < out; ++o)
      axpy(delta[static_cast<std::size_t>(o)],
           w + static_cast<std::size_t>(o) * in, delta_below.data(), in);
    const auto& zprev = cache.pre[static_cast<std::size_t>(l - 1)];
    const auto& pprev = cache.post[static_cast<std::size_t>(l - 1)];
    for (int i = 0; i < in; ++i)
      delta_below[static_cast<std::size_t>(i)] *=
          activate_grad(spec.activation, zprev[static_cast<std::size_t>(i)],
                        pprev[static_cast<std::size_t>(i)]);
    delta = std::move(delta_below);
  }
}

ParamVector backward(const MlpSpec& spec, std::span<const double> params,
                     const ForwardCache& cache,
                     std::span<const double> output_grad) {
  ParamVector grad(params.size(), 0.0);
  backward_accumulate(spec, params, cache, output_grad, 1.0, grad);
  return grad;
}

}  // namespace dimapg
