#include "core/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "core/error.hpp"

namespace dimapg::oracle {

ParamVector finite_diff_grad(const ScalarFn& f, const ParamVector& theta,
                             double h) {
  ParamVector g(theta.size());
  ParamVector x = theta;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    x[i] = theta[i] + h;
    const double fp = f(x);
    x[i] = theta[i] - h;
    const double fm = f(x);
    x[i] = theta[i];
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw NumericError("finite_diff_grad: non-finite function value");
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

ParamVector forward_diff_grad(const ScalarFn& f, const ParamVector& theta,
                              double h) {
  const double f0 = f(theta);
  ParamVector g(theta.size());
  ParamVector x = theta;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    x[i] = theta[i] + h;
    g[i] = (f(x) - f0) / h;
    x[i] = theta[i];
  }
  return g;
}

void TinyMDP::validate() const {
  if (num_states < 1 || num_states > 8) throw std::invalid_argument("TinyMDP: 1 <= S <= 8");
  if (num_actions < 1 || num_actions > 4) throw std::invalid_argument("TinyMDP: 1 <= A <= 4");
  if (horizon < 1 || horizon > 3) throw std::invalid_argument("TinyMDP: 1 <= horizon <= 3");
  if (static_cast<int>(initial.size()) != num_states)
    throw std::invalid_argument("TinyMDP: initial distribution size");
  double s0 = 0.0;
  for (double p : initial) s0 += p;
  if (std::abs(s0 - 1.0) > 1e-9) throw std::invalid_argument("TinyMDP: initial must sum to 1");
  for (int s = 0; s < num_states; ++s)
    for (int a = 0; a < num_actions; ++a) {
      double row = 0.0;
      for (int s2 = 0; s2 < num_states; ++s2) row += p(s, a, s2);
      if (std::abs(row - 1.0) > 1e-9)
        throw std::invalid_argument("TinyMDP: transition rows must sum to 1");
    }
}

ParamVector TabularSoftmaxPolicy::init(RandomStream& rng) const {
  ParamVector p(static_cast<std::size_t>(param_count()));
  for (double& v : p) v = rng.uniform(-1.0, 1.0);
  return p;
}

ActionDistribution TabularSoftmaxPolicy::distribution(
    const ParamVector& params, std::span<const double> obs) const {
  const int s = static_cast<int>(obs[0]);
  ActionDistribution d;
  d.head = HeadKind::categorical;
  d.probs.resize(static_cast<std::size_t>(num_actions_));
  d.log_probs.resize(static_cast<std::size_t>(num_actions_));
  double mx = -1e300;
  for (int a = 0; a < num_actions_; ++a)
    mx = std::max(mx, params[static_cast<std::size_t>(s * num_actions_ + a)]);
  double sum = 0.0;
  for (int a = 0; a < num_actions_; ++a) {
    const double e = std::exp(params[static_cast<std::size_t>(s * num_actions_ + a)] - mx);
    d.probs[static_cast<std::size_t>(a)] = e;
    sum += e;
  }
  for (int a = 0; a < num_actions_; ++a) {
    d.log_probs[static_cast<std::size_t>(a)] =
        params[static_cast<std::size_t>(s * num_actions_ + a)] - mx - std::log(sum);
    d.probs[static_cast<std::size_t>(a)] /= sum;
  }
  return d;
}

void TabularSoftmaxPolicy::grad_log_prob_accumulate(const ParamVector& params,
                                                    std::span<const double> obs,
                                                    const Action& action,
                                                    double scale,
                                                    ParamVector& grad) const {
  const int s = static_cast<int>(obs[0]);
  const ActionDistribution d = distribution(params, obs);
  for (int a = 0; a < num_actions_; ++a)
    grad[static_cast<std::size_t>(s * num_actions_ + a)] -=
        scale * d.probs[static_cast<std::size_t>(a)];
  grad[static_cast<std::size_t>(s * num_actions_ + action.discrete)] += scale;
}

namespace {

void softmax_row(const TinyMDP& mdp, const ParamVector& theta, int s,
                 std::vector<double>& probs) {
  const int A = mdp.num_actions;
  probs.resize(static_cast<std::size_t>(A));
  double mx = -1e300;
  for (int a = 0; a < A; ++a)
    mx = std::max(mx, theta[static_cast<std::size_t>(s * A + a)]);
  double sum = 0.0;
  for (int a = 0; a < A; ++a) {
    probs[static_cast<std::size_t>(a)] =
        std::exp(theta[static_cast<std::size_t>(s * A + a)] - mx);
    sum += probs[static_cast<std::size_t>(a)];
  }
  for (double& p : probs) p /= sum;
}

void recurse(const TinyMDP& mdp, const ParamVector& theta, int t, int s,
             double prob, EnumeratedTrajectory& partial,
             std::vector<EnumeratedTrajectory>& out) {
  if (t == mdp.horizon) {
    EnumeratedTrajectory tr = partial;
    tr.probability = prob;
    double g = 0.0;
    for (int i = mdp.horizon - 1; i >= 0; --i)
      g = tr.rewards[static_cast<std::size_t>(i)] + mdp.gamma * g;
    tr.discounted_return = g;
    out.push_back(std::move(tr));
    return;
  }
  std::vector<double> probs;
  softmax_row(mdp, theta, s, probs);
  for (int a = 0; a < mdp.num_actions; ++a) {
    const double pa = probs[static_cast<std::size_t>(a)];
    if (pa == 0.0) continue;
    partial.states.push_back(s);
    partial.actions.push_back(a);
    partial.rewards.push_back(mdp.r(s, a));
    for (int s2 = 0; s2 < mdp.num_states; ++s2) {
      const double pt = mdp.p(s, a, s2);
      if (pt == 0.0) continue;
      recurse(mdp, theta, t + 1, s2, prob * pa * pt, partial, out);
    }
    partial.states.pop_back();
    partial.actions.pop_back();
    partial.rewards.pop_back();
  }
}

}  // namespace

std::vector<EnumeratedTrajectory> enumerate_trajectories(const TinyMDP& mdp,
                                                         const ParamVector& theta) {
  mdp.validate();
  double count = static_cast<double>(mdp.num_states);
  for (int t = 0; t < mdp.horizon; ++t)
    count *= static_cast<double>(mdp.num_actions) * mdp.num_states;
  if (count > 1e6)
    throw std::invalid_argument("enumerate_trajectories: horizon too large");

  std::vector<EnumeratedTrajectory> out;
  EnumeratedTrajectory partial;
  for (int s0 = 0; s0 < mdp.num_states; ++s0) {
    const double p0 = mdp.initial[static_cast<std::size_t>(s0)];
    if (p0 == 0.0) continue;
    recurse(mdp, theta, 0, s0, p0, partial, out);
  }
  return out;
}

double exact_expected_return(const TinyMDP& mdp, const ParamVector& theta) {
  double v = 0.0;
  for (const auto& tr : enumerate_trajectories(mdp, theta))
    v += tr.probability * tr.discounted_return;
  return v;
}

ParamVector exact_score_gradient(const TinyMDP& mdp, const ParamVector& theta) {
  const int A = mdp.num_actions;
  ParamVector g(theta.size(), 0.0);
  std::vector<double> probs;
  for (const auto& tr : enumerate_trajectories(mdp, theta)) {
    const double w = tr.probability * tr.discounted_return;
    for (std::size_t t = 0; t < tr.states.size(); ++t) {
      const int s = tr.states[t];
      softmax_row(mdp, theta, s, probs);
      for (int a = 0; a < A; ++a)
        g[static_cast<std::size_t>(s * A + a)] -= w * probs[static_cast<std::size_t>(a)];
      g[static_cast<std::size_t>(s * A + tr.actions[t])] += w;
    }
  }
  return g;
}

ParamVector exact_score_gradient_baseline(
    const TinyMDP& mdp, const ParamVector& theta,
    const std::function<double(int, int)>& baseline) {
  const int A = mdp.num_actions;
  ParamVector g(theta.size(), 0.0);
  std::vector<double> probs;
  for (const auto& tr : enumerate_trajectories(mdp, theta)) {
    const int H = static_cast<int>(tr.states.size());
    // reward to go (gamma-discounted from t)
    std::vector<double> togo(static_cast<std::size_t>(H), 0.0);
    double acc = 0.0;
    for (int t = H - 1; t >= 0; --t) {
      acc = tr.rewards[static_cast<std::size_t>(t)] + mdp.gamma * acc;
      togo[static_cast<std::size_t>(t)] = acc;
    }
    for (int t = 0; t < H; ++t) {
      const int s = tr.states[static_cast<std::size_t>(t)];
      const double adv = togo[static_cast<std::size_t>(t)] - baseline(s, t);
      const double w = tr.probability * adv;
      softmax_row(mdp, theta, s, probs);
      for (int a = 0; a < A; ++a)
        g[static_cast<std::size_t>(s * A + a)] -= w * probs[static_cast<std::size_t>(a)];
      g[static_cast<std::size_t>(s * A + tr.actions[static_cast<std::size_t>(t)])] += w;
    }
  }
  return g;
}

FidelityReport first_order_fidelity(const TinyMDP& mdp, const ParamVector& theta,
                                    double alpha) {
  // Exact inner step: theta_n(theta) = theta + alpha * d/dtheta_n E[R].
  auto adapt = [&](const ParamVector& th) {
    return add_scaled(th, exact_score_gradient(mdp, th), alpha);
  };

  FidelityReport rep;
  // First-order two-term estimator in exact expectation: the post-adaptation
  // score term evaluated at theta_n and applied to theta directly; the
  // pre-adaptation term vanishes because the exact inner step does not
  // depend on sampled trajectories.
  rep.estimator = exact_score_gradient(mdp, adapt(theta));
  rep.true_grad = finite_diff_grad(
      [&](const ParamVector& th) { return exact_expected_return(mdp, adapt(th)); },
      theta, 1e-6);
  rep.max_abs_gap = max_abs_diff(rep.estimator, rep.true_grad);
  const double scale = std::max(l2_norm(rep.true_grad), 1e-12);
  ParamVector diff = rep.estimator;
  add_scaled_inplace(diff, rep.true_grad, -1.0);
  rep.rel_gap = l2_norm(diff) / scale;
  return rep;
}

TinyMDP random_tiny_mdp(RandomStream& rng, double gamma) {
  TinyMDP m;
  m.num_states = 2 + rng.uniform_int(3);   // 2..4
  m.num_actions = 2 + rng.uniform_int(2);  // 2..3
  m.horizon = 1 + rng.uniform_int(3);      // 1..3
  m.gamma = gamma;

  auto simplex = [&](int n, std::vector<double>& row) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      row.push_back(0.05 + rng.uniform());
      sum += row[row.size() - 1];
    }
    for (std::size_t i = row.size() - static_cast<std::size_t>(n); i < row.size(); ++i)
      row[i] /= sum;
  };

  simplex(m.num_states, m.initial);
  for (int s = 0; s < m.num_states; ++s)
    for (int a = 0; a < m.num_actions; ++a) simplex(m.num_states, m.transition);
  for (int i = 0; i < m.num_states * m.num_actions; ++i)
    m.reward.push_back(rng.uniform(-1.0, 1.0));
  m.validate();
  return m;
}

}  // namespace dimapg::oracle
