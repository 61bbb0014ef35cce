#include "core/policy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/error.hpp"

namespace dimapg {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
}

void PolicySpec::validate() const {
  net.validate();
  if (action_dim < 1) throw DimensionError("PolicySpec: action_dim must be >= 1");
  if (net.output_dim != action_dim)
    throw DimensionError("PolicySpec: net.output_dim must equal action_dim");
}

MlpPolicy::MlpPolicy(PolicySpec spec) : spec_(std::move(spec)) {
  spec_.validate();
}

int MlpPolicy::param_count() const {
  int n = spec_.net.param_count();
  if (spec_.head == HeadKind::gaussian) n += spec_.action_dim;
  return n;
}

ParamVector MlpPolicy::init(RandomStream& rng) const {
  ParamVector p = init_params(spec_.net, rng);
  if (spec_.head == HeadKind::gaussian)
    p.insert(p.end(), static_cast<std::size_t>(spec_.action_dim),
             spec_.initial_log_std);
  return p;
}

ActionDistribution MlpPolicy::distribution(const ParamVector& params,
                                           std::span<const double> obs) const {
  if (static_cast<int>(params.size()) != param_count())
    throw DimensionError("policy: parameter vector length mismatch");
  const std::size_t net_len = static_cast<std::size_t>(spec_.net.param_count());
  std::span<const double> net_params(params.data(), net_len);
  std::vector<double> out = forward(spec_.net, net_params, obs);
  for (double v : out)
    if (!std::isfinite(v)) throw NumericError("policy: non-finite network output");

  ActionDistribution d;
  d.head = spec_.head;
  if (spec_.head == HeadKind::gaussian) {
    d.mean = std::move(out);
    d.std.resize(static_cast<std::size_t>(spec_.action_dim));
    for (int i = 0; i < spec_.action_dim; ++i)
      d.std[static_cast<std::size_t>(i)] =
          std::exp(params[net_len + static_cast<std::size_t>(i)]);
  } else {
    // Numerically stable softmax: shift by the max logit.
    const double mx = *std::max_element(out.begin(), out.end());
    double sum = 0.0;
    d.probs.resize(out.size());
    d.log_probs.resize(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      d.probs[i] = std::exp(out[i] - mx);
      sum += d.probs[i];
    }
    const double log_sum = std::log(sum);
    for (std::size_t i = 0; i < out.size(); ++i) {
      d.log_probs[i] = out[i] - mx - log_sum;
      d.probs[i] /= sum;
    }
  }
  return d;
}

void MlpPolicy::grad_log_prob_accumulate(const ParamVector& params,
                                         std::span<const double> obs,
                                         const Action& action, double scale,
                                         ParamVector& grad) const {
  if (grad.size() != params.size() ||
      static_cast<int>(params.size()) != param_count())
    throw DimensionError("grad_log_prob: parameter vector length mismatch");
  const std::size_t net_len = static_cast<std::size_t>(spec_.net.param_count());
  std::span<const double> net_params(params.data(), net_len);

  ForwardCache cache;
  std::vector<double> out = forward(spec_.net, net_params, obs, &cache);

  std::vector<double> out_grad(out.size(), 0.0);
  if (spec_.head == HeadKind::gaussian) {
    if (static_cast<int>(action.continuous.size()) != spec_.action_dim)
      throw DimensionError("grad_log_prob: action dimension mismatch");
    for (int i = 0; i < spec_.action_dim; ++i) {
      const auto si = static_cast<std::size_t>(i);
      const double sd = std::exp(params[net_len + si]);
      const double z = (action.continuous[si] - out[si]) / sd;
      out_grad[si] = z / sd;                        // d logp / d mean
      grad[net_len + si] += scale * (z * z - 1.0);  // d logp / d log_std
    }
  } else {
    if (action.discrete < 0 || action.discrete >= spec_.action_dim)
      throw DimensionError("grad_log_prob: action index out of range");
    // d logp / d logit_j = [j == a] - p_j
    const double mx = *std::max_element(out.begin(), out.end());
    double sum = 0.0;
    for (double v : out) sum += std::exp(v - mx);
    for (std::size_t j = 0; j < out.size(); ++j)
      out_grad[j] = -std::exp(out[j] - mx) / sum;
    out_grad[static_cast<std::size_t>(action.discrete)] += 1.0;
  }

  backward_accumulate(spec_.net, net_params, cache, out_grad, scale,
                      std::span<double>(grad.data(), net_len));
}

Action sample_action(const ActionDistribution& dist, RandomStream& rng) {
  Action a;
  if (dist.head == HeadKind::gaussian) {
    a.continuous.resize(dist.mean.size());
    for (std::size_t i = 0; i < dist.mean.size(); ++i)
      a.continuous[i] = dist.mean[i] + dist.std[i] * rng.normal();
  } else {
    // Inverse CDF over the (already normalized) probabilities.
    const double u = rng.uniform();
    double acc = 0.0;
    a.discrete = static_cast<int>(dist.probs.size()) - 1;
    for (std::size_t i = 0; i < dist.probs.size(); ++i) {
      acc += dist.probs[i];
      if (u < acc) {
        a.discrete = static_cast<int>(i);
        break;
      }
    }
  }
  return a;
}

double log_prob(const ActionDistribution& dist, const Action& action) {
  if (dist.head == HeadKind::gaussian) {
    if (action.continuous.size() != dist.mean.size())
      throw DimensionError("log_prob: action dimension mismatch");
    double lp = 0.0;
    for (std::size_t i = 0; i < dist.mean.size(); ++i) {
      const double z = (action.continuous[i] - dist.mean[i]) / dist.std[i];
      lp += -0.5 * kLog2Pi - std::log(dist.std[i]) - 0.5 * z * z;
    }
    return lp;
  }
  if (action.discrete < 0 ||
      action.discrete >= static_cast<int>(dist.log_probs.size()))
    throw DimensionError("log_prob: action index out of range");
  return dist.log_probs[static_cast<std::size_t>(action.discrete)];
}

}  // namespace dimapg
