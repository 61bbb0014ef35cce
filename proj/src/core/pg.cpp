#include "core/pg.hpp"

#include <cmath>

#include "core/error.hpp"

namespace dimapg {

Returns discounted_returns(const std::vector<double>& rewards, double gamma) {
  Returns out;
  out.togo.resize(rewards.size());
  double acc = 0.0;
  for (int t = static_cast<int>(rewards.size()) - 1; t >= 0; --t) {
    acc = rewards[static_cast<std::size_t>(t)] + gamma * acc;
    out.togo[static_cast<std::size_t>(t)] = acc;
  }
  out.total = rewards.empty() ? 0.0 : out.togo[0];
  return out;
}

LinearBaseline::LinearBaseline(int obs_dim, int horizon)
    : obs_dim_(obs_dim), horizon_(horizon < 1 ? 1 : horizon),
      w_(static_cast<std::size_t>(2 * obs_dim + 4), 0.0) {}

void LinearBaseline::features(const std::vector<double>& obs, int t,
                              std::vector<double>& phi) const {
  phi.resize(static_cast<std::size_t>(feature_count()));
  std::size_t k = 0;
  for (int i = 0; i < obs_dim_; ++i) phi[k++] = obs[static_cast<std::size_t>(i)];
  for (int i = 0; i < obs_dim_; ++i)
    phi[k++] = obs[static_cast<std::size_t>(i)] * obs[static_cast<std::size_t>(i)];
  const double u = static_cast<double>(t) / horizon_;
  phi[k++] = u;
  phi[k++] = u * u;
  phi[k++] = u * u * u;
  phi[k++] = 1.0;
}

void LinearBaseline::fit(const std::vector<Trajectory>& trajs, int agent,
                         double gamma, double ridge) {
  if (trajs.empty()) throw DimensionError("LinearBaseline::fit: no trajectories");
  const int d = feature_count();
  std::vector<double> A(static_cast<std::size_t>(d * d), 0.0);
  std::vector<double> b(static_cast<std::size_t>(d), 0.0);
  std::vector<double> phi;
  std::vector<double> agent_rewards;

  for (const auto& traj : trajs) {
    const int T = traj.length();
    agent_rewards.resize(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t)
      agent_rewards[static_cast<std::size_t>(t)] =
          traj.rewards[static_cast<std::size_t>(t)][static_cast<std::size_t>(agent)];
    const Returns g = discounted_returns(agent_rewards, gamma);
    for (int t = 0; t < T; ++t) {
      if (!traj.active[static_cast<std::size_t>(t)][static_cast<std::size_t>(agent)])
        continue;
      features(traj.obs[static_cast<std::size_t>(t)][static_cast<std::size_t>(agent)],
               t, phi);
      const double y = g.togo[static_cast<std::size_t>(t)];
      for (int i = 0; i < d; ++i) {
        const double pi_ = phi[static_cast<std::size_t>(i)];
        b[static_cast<std::size_t>(i)] += pi_ * y;
        double* row = A.data() + static_cast<std::size_t>(i * d);
        for (int j = i; j < d; ++j) row[j] += pi_ * phi[static_cast<std::size_t>(j)];
      }
    }
  }
  for (int i = 0; i < d; ++i) {
    A[static_cast<std::size_t>(i * d + i)] += ridge;
    for (int j = 0; j < i; ++j)
      A[static_cast<std::size_t>(i * d + j)] = A[static_cast<std::size_t>(j * d + i)];
  }

  // Cholesky: A = L L^T, then two triangular solves.
  std::vector<double>& L = A;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = L[static_cast<std::size_t>(i * d + j)];
      for (int k = 0; k < j; ++k)
        s -= L[static_cast<std::size_t>(i * d + k)] * L[static_cast<std::size_t>(j * d + k)];
      if (i == j) {
        if (s <= 0.0) throw NumericError("LinearBaseline::fit: matrix not SPD");
        L[static_cast<std::size_t>(i * d + i)] = std::sqrt(s);
      } else {
        L[static_cast<std::size_t>(i * d + j)] = s / L[static_cast<std::size_t>(j * d + j)];
      }
    }
  }
  std::vector<double> y(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    double s = b[static_cast<std::size_t>(i)];
    for (int k = 0; k < i; ++k)
      s -= L[static_cast<std::size_t>(i * d + k)] * y[static_cast<std::size_t>(k)];
    y[static_cast<std::size_t>(i)] = s / L[static_cast<std::size_t>(i * d + i)];
  }
  w_.assign(static_cast<std::size_t>(d), 0.0);
  for (int i = d - 1; i >= 0; --i) {
    double s = y[static_cast<std::size_t>(i)];
    for (int k = i + 1; k < d; ++k)
      s -= L[static_cast<std::size_t>(k * d + i)] * w_[static_cast<std::size_t>(k)];
    w_[static_cast<std::size_t>(i)] = s / L[static_cast<std::size_t>(i * d + i)];
  }
}

double LinearBaseline::value(const std::vector<double>& obs, int t) const {
  std::vector<double> phi;
  features(obs, t, phi);
  double s = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) s += w_[i] * phi[i];
  return s;
}

void reinforce_gradient_accumulate(const std::vector<Trajectory>& trajs,
                                   const Policy& policy,
                                   const ParamVector& params, int agent,
                                   const LinearBaseline* baseline,
                                   const PgOptions& opt, double scale,
                                   ParamVector& grad) {
  if (trajs.empty())
    throw DimensionError("reinforce_gradient: empty trajectory set");
  const double per_traj = scale / static_cast<double>(trajs.size());
  std::vector<double> agent_rewards;

  for (const auto& traj : trajs) {
    const int T = traj.length();
    agent_rewards.resize(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t)
      agent_rewards[static_cast<std::size_t>(t)] =
          traj.rewards[static_cast<std::size_t>(t)][static_cast<std::size_t>(agent)];
    const Returns g = discounted_returns(agent_rewards, opt.gamma);

    for (int t = 0; t < T; ++t) {
      const auto& active_t = traj.active[static_cast<std::size_t>(t)];
      if (!active_t[static_cast<std::size_t>(agent)]) continue;
      const auto& obs_t = traj.obs[static_cast<std::size_t>(t)];
      double adv = opt.reward_to_go ? g.togo[static_cast<std::size_t>(t)] : g.total;
      if (baseline != nullptr)
        adv -= baseline->value(obs_t[static_cast<std::size_t>(agent)], t);
      if (adv == 0.0) continue;

      if (opt.score_all_agents) {
        const int n = traj.num_agents();
        for (int j = 0; j < n; ++j) {
          if (!active_t[static_cast<std::size_t>(j)]) continue;
          policy.grad_log_prob_accumulate(
              params, obs_t[static_cast<std::size_t>(j)],
              traj.actions[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)],
              per_traj * adv, grad);
        }
      } else {
        policy.grad_log_prob_accumulate(
            params, obs_t[static_cast<std::size_t>(agent)],
            traj.actions[static_cast<std::size_t>(t)][static_cast<std::size_t>(agent)],
            per_traj * adv, grad);
      }
    }
  }
}

ParamVector reinforce_gradient(const std::vector<Trajectory>& trajs,
                               const Policy& policy, const ParamVector& params,
                               int agent, const LinearBaseline* baseline,
                               const PgOptions& opt) {
  ParamVector grad(static_cast<std::size_t>(policy.param_count()), 0.0);
  reinforce_gradient_accumulate(trajs, policy, params, agent, baseline, opt,
                                1.0, grad);
  return grad;
}

double estimate_loss(const std::vector<Trajectory>& trajs, int agent,
                     double gamma) {
  if (trajs.empty()) throw DimensionError("estimate_loss: empty trajectory set");
  double s = 0.0;
  for (const auto& traj : trajs) s += traj.agent_return(agent, gamma);
  return s / static_cast<double>(trajs.size());
}

}  // namespace dimapg
