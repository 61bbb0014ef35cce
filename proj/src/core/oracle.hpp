#pragma once

#include <functional>
#include <span>
#include <vector>

#include "core/policy.hpp"
#include "core/vec.hpp"

namespace dimapg::oracle {

// Brute-force verification tools. Everything here is deliberately
// independent of the estimators it checks: enumeration and numeric
// differentiation only, no reuse of the training-path gradient code.

using ScalarFn = std::function<double(const ParamVector&)>;

// Central differences (f(x+h e_i) - f(x-h e_i)) / 2h.
ParamVector finite_diff_grad(const ScalarFn& f, const ParamVector& theta,
                             double h = 1e-5);

// One-sided differences; second, independent route used to sanity-check the
// central-difference implementation itself.
ParamVector forward_diff_grad(const ScalarFn& f, const ParamVector& theta,
                              double h = 1e-7);

// Explicit finite MDP, small enough to enumerate every trajectory.
// transition[s][a] is a distribution over next states; reward[s][a] is
// deterministic. Policies over it are tabular softmax: one logit per (s, a).
struct TinyMDP {
  int num_states = 2;
  int num_actions = 2;
  int horizon = 2;
  double gamma = 1.0;
  std::vector<double> initial;     // distribution over states, size S
  std::vector<double> transition;  // [s*A*S + a*S + s'], rows sum to 1
  std::vector<double> reward;      // [s*A + a]

  double p(int s, int a, int s2) const {
    return transition[static_cast<std::size_t>((s * num_actions + a) * num_states + s2)];
  }
  double r(int s, int a) const {
    return reward[static_cast<std::size_t>(s * num_actions + a)];
  }
  void validate() const;
  int param_count() const { return num_states * num_actions; }
};

// Tabular softmax policy over a TinyMDP's states; obs is the state index as
// a single double. Implements the same interface as the MLP policy so the
// estimator code under test can run on enumerable problems unchanged.
class TabularSoftmaxPolicy final : public Policy {
 public:
  TabularSoftmaxPolicy(int num_states, int num_actions)
      : num_states_(num_states), num_actions_(num_actions) {}

  int param_count() const override { return num_states_ * num_actions_; }
  int obs_dim() const override { return 1; }
  HeadKind head() const override { return HeadKind::categorical; }
  ParamVector init(RandomStream& rng) const override;
  ActionDistribution distribution(const ParamVector& params,
                                  std::span<const double> obs) const override;
  void grad_log_prob_accumulate(const ParamVector& params,
                                std::span<const double> obs,
                                const Action& action, double scale,
                                ParamVector& grad) const override;

 private:
  int num_states_;
  int num_actions_;
};

// One enumerated trajectory and its probability under a given policy.
struct EnumeratedTrajectory {
  std::vector<int> states;
  std::vector<int> actions;
  std::vector<double> rewards;
  double probability = 0.0;
  double discounted_return = 0.0;
};

// Every trajectory of the MDP under tabular-softmax parameters theta.
// Guarded against blowup: throws if the trajectory count would exceed 1e6.
std::vector<EnumeratedTrajectory> enumerate_trajectories(const TinyMDP& mdp,
                                                         const ParamVector& theta);

// sum_tau P(tau|theta) R(tau), by exhaustive enumeration.
double exact_expected_return(const TinyMDP& mdp, const ParamVector& theta);

// sum_tau P(tau|theta) R(tau) grad log pi_theta(tau), by enumeration with the
// closed-form tabular score (one-hot minus probabilities per visited state).
ParamVector exact_score_gradient(const TinyMDP& mdp, const ParamVector& theta);

// Reward-to-go variant with an arbitrary state-dependent baseline; used to
// check that baselines leave the exact expectation unchanged (gamma = 1).
ParamVector exact_score_gradient_baseline(
    const TinyMDP& mdp, const ParamVector& theta,
    const std::function<double(int state, int t)>& baseline);

struct FidelityReport {
  ParamVector estimator;    // exact expectation of the first-order two-term form
  ParamVector true_grad;    // finite differences through the inner step
  double max_abs_gap = 0.0;
  double rel_gap = 0.0;     // gap relative to the true gradient norm
};

// Micro-scale composite-objective check: adapt theta with one exact inner
// gradient step of size alpha, then compare the first-order estimator of
// d/dtheta E[R(theta_n(theta))] against finite differences through the
// adaptation. The gap measures what dropping the inner-step Jacobian costs.
FidelityReport first_order_fidelity(const TinyMDP& mdp, const ParamVector& theta,
                                    double alpha);

// Draws a random TinyMDP with S in [2,4], A in [2,3], horizon in [1,3].
TinyMDP random_tiny_mdp(RandomStream& rng, double gamma = 1.0);

}  // namespace dimapg::oracle
