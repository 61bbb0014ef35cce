#pragma once

#include <vector>

#include "core/policy.hpp"
#include "core/trajectory.hpp"

namespace dimapg {

// Per-step reward-to-go G_t (G_t = r_t + gamma * G_{t+1}) and the total
// discounted return G_0. Empty input gives empty returns and total 0.
struct Returns {
  std::vector<double> togo;
  double total = 0.0;
};
Returns discounted_returns(const std::vector<double>& rewards, double gamma);

// Linear feature baseline over [obs, obs^2, t/T, (t/T)^2, (t/T)^3, 1],
// refitted from scratch by ridge least squares at every call.
class LinearBaseline {
 public:
  LinearBaseline(int obs_dim, int horizon);

  int feature_count() const { return 2 * obs_dim_ + 4; }
  void fit(const std::vector<Trajectory>& trajs, int agent, double gamma,
           double ridge = 1e-5);
  double value(const std::vector<double>& obs, int t) const;
  const std::vector<double>& weights() const { return w_; }

 private:
  void features(const std::vector<double>& obs, int t,
                std::vector<double>& phi) const;

  int obs_dim_;
  int horizon_;
  std::vector<double> w_;
};

struct PgOptions {
  double gamma = 0.99;
  // Weight each score term by the reward-to-go from that step; when false,
  // use the trajectory's total return on every step (the literal
  // trajectory-level form, higher variance, same expectation).
  bool reward_to_go = true;
  // Include every agent's action factors in the trajectory score instead of
  // only the credited agent's own actions.
  bool score_all_agents = false;
};

// REINFORCE estimate of the policy gradient for `agent`, averaged over the
// batch: (1/B) sum_traj sum_t grad log pi(a_t | o_t) * (G_t - baseline).
// Pass baseline = nullptr for the raw estimator. Steps where the agent is
// inactive (dead) contribute nothing.
ParamVector reinforce_gradient(const std::vector<Trajectory>& trajs,
                               const Policy& policy, const ParamVector& params,
                               int agent, const LinearBaseline* baseline,
                               const PgOptions& opt);

// Accumulating form used by the training loop's hot path.
void reinforce_gradient_accumulate(const std::vector<Trajectory>& trajs,
                                   const Policy& policy,
                                   const ParamVector& params, int agent,
                                   const LinearBaseline* baseline,
                                   const PgOptions& opt, double scale,
                                   ParamVector& grad);

// Monte-Carlo estimate of L_n: mean total discounted return of the agent.
double estimate_loss(const std::vector<Trajectory>& trajs, int agent,
                     double gamma);

}  // namespace dimapg
