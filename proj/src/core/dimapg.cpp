#include "core/dimapg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "core/error.hpp"
#include "core/rollout.hpp"

namespace dimapg {

namespace {

// Seed-path phase tags. Paths are (iteration, agent, phase[, step]); the
// init and sampling phases use shorter paths, which splitmix chains keep
// disjoint from the three-element ones.
constexpr std::uint64_t kPhasePre = 1;
constexpr std::uint64_t kPhaseInner = 2;
constexpr std::uint64_t kPhasePost = 3;
constexpr std::uint64_t kPhaseFreshPre = 4;
constexpr std::uint64_t kPhaseSample = 5;
constexpr std::uint64_t kPhaseInit = 6;

std::uint64_t u(int v) { return static_cast<std::uint64_t>(v); }

}  // namespace

void TrainConfig::validate() const {
  auto need = [](bool ok, const char* msg) {
    if (!ok) throw ConfigError(msg);
  };
  // Zero step sizes are allowed: they turn the corresponding update into a
  // no-op, which the adaptation identities rely on.
  need(std::isfinite(alpha1) && alpha1 >= 0.0, "alpha1 must be finite and >= 0");
  need(std::isfinite(alpha2) && alpha2 >= 0.0, "alpha2 must be finite and >= 0");
  need(std::isfinite(epsilon) && epsilon >= 0.0,
       "epsilon must be finite and >= 0");
  need(k >= 0, "k must be >= 0");
  need(sample_agents >= 0, "sample_agents must be >= 0 (0 adapts every agent)");
  need(n_traj >= 1, "n_traj must be >= 1");
  need(horizon >= 1, "T must be >= 1");
  need(std::isfinite(gamma) && gamma > 0.0 && gamma <= 1.0,
       "gamma must be in (0, 1]");
  need(iterations >= 0, "iterations must be >= 0");
  need(populations == 1 || populations == 2, "populations must be 1 or 2");
  if (!first_order)
    throw ConfigError(
        "first_order = false is not supported: training uses the first-order "
        "estimator only; the exact composite gradient is available as a "
        "micro-scale oracle check");
}

PgOptions TrainConfig::pg_options() const {
  PgOptions pg;
  pg.gamma = gamma;
  pg.reward_to_go = !trajectory_level_returns;
  pg.score_all_agents = false;  // callers widen term B themselves
  return pg;
}

void build_assignment(const MultiAgentEnv& env,
                      const std::vector<const Policy*>& pop_policies,
                      const std::vector<const ParamVector*>& pop_theta,
                      int agent, const ParamVector* override_params,
                      std::vector<const Policy*>& policies,
                      std::vector<const ParamVector*>& params) {
  const int n = env.num_agents();
  const int pops = env.num_populations();
  if (static_cast<int>(pop_policies.size()) != pops ||
      static_cast<int>(pop_theta.size()) != pops)
    throw DimensionError(
        "build_assignment: need one policy and one parameter vector per "
        "population");
  policies.assign(static_cast<std::size_t>(n), nullptr);
  params.assign(static_cast<std::size_t>(n), nullptr);
  for (int i = 0; i < n; ++i) {
    const int p = env.population_of(i);
    policies[static_cast<std::size_t>(i)] = pop_policies[static_cast<std::size_t>(p)];
    params[static_cast<std::size_t>(i)] =
        (i == agent && override_params) ? override_params
                                        : pop_theta[static_cast<std::size_t>(p)];
  }
}

AdaptedParams inner_adapt(MultiAgentEnv& env,
                          const std::vector<const Policy*>& pop_policies,
                          const std::vector<const ParamVector*>& pop_theta,
                          int agent, const TrainConfig& cfg,
                          std::uint64_t seed) {
  if (agent < 0 || agent >= env.num_agents())
    throw DimensionError("inner_adapt: agent " + std::to_string(agent) +
                         " outside 0.." + std::to_string(env.num_agents() - 1));
  const int pop = env.population_of(agent);
  const Policy& policy = *pop_policies.at(static_cast<std::size_t>(pop));

  AdaptedParams out;
  out.agent = agent;
  out.theta_n = *pop_theta.at(static_cast<std::size_t>(pop));
  out.trace.push_back(out.theta_n);

  const PgOptions pg = cfg.pg_options();
  std::vector<const Policy*> policies;
  std::vector<const ParamVector*> params;
  for (int j = 1; j <= cfg.k; ++j) {
    build_assignment(env, pop_policies, pop_theta, agent, &out.theta_n,
                     policies, params);
    const auto batch = collect_trajectories(
        env, policies, params, cfg.n_traj, cfg.horizon,
        derive_seed(seed, {u(j)}), AssignmentTag::adapted_agent, agent);
    out.step_loss.push_back(estimate_loss(batch, agent, cfg.gamma));

    LinearBaseline baseline(policy.obs_dim(), cfg.horizon);
    const LinearBaseline* bl = nullptr;
    if (cfg.use_baseline) {
      baseline.fit(batch, agent, cfg.gamma);
      bl = &baseline;
    }
    const ParamVector g =
        reinforce_gradient(batch, policy, out.theta_n, agent, bl, pg);
    if (!all_finite(g))
      throw NumericError("inner_adapt: non-finite gradient for agent " +
                         std::to_string(agent) + " at inner step " +
                         std::to_string(j));
    const double alpha = (j == 1) ? cfg.alpha1 : cfg.alpha2;
    // Guarded so a zero step leaves the vector bit-identical.
    if (alpha != 0.0) add_scaled_inplace(out.theta_n, g, alpha);
    out.trace.push_back(out.theta_n);
  }
  return out;
}

OuterStats accumulate_outer_gradient(const Policy& policy,
                                     const ParamVector& theta,
                                     const AdaptedParams& adapted,
                                     const std::vector<Trajectory>& tau_pre,
                                     const std::vector<Trajectory>& tau_post,
                                     const TrainConfig& cfg, ParamVector& grad,
                                     const std::vector<int>* score_agents,
                                     double term_b_reference) {
  if (tau_pre.empty() || tau_post.empty())
    throw DimensionError("accumulate_outer_gradient: empty trajectory set");
  const int n = adapted.agent;
  const PgOptions pg = cfg.pg_options();

  OuterStats stats;
  stats.loss_pre = estimate_loss(tau_pre, n, cfg.gamma);
  stats.loss_post = estimate_loss(tau_post, n, cfg.gamma);

  // Term A. Only the agent's own factors depend on theta_n, so this is the
  // whole gradient of the post-adaptation objective in theta_n; first-order
  // drops the adaptation Jacobian and lands it on theta unchanged.
  {
    LinearBaseline baseline(policy.obs_dim(), cfg.horizon);
    const LinearBaseline* bl = nullptr;
    if (cfg.use_baseline) {
      baseline.fit(tau_post, n, cfg.gamma);
      bl = &baseline;
    }
    reinforce_gradient_accumulate(tau_post, policy, adapted.theta_n, n, bl, pg,
                                  1.0, grad);
  }

  // Term B: (1/B) sum over tau_pre of the chosen score factors, all weighted
  // by the one scalar loss estimate from tau_post, centered on the reference
  // level (the score's zero mean makes the centering expectation-neutral).
  const double w = (stats.loss_post - term_b_reference) /
                   static_cast<double>(tau_pre.size());
  if (w != 0.0) {
    for (const Trajectory& tr : tau_pre) {
      const int steps = tr.length();
      for (int t = 0; t < steps; ++t) {
        const auto ut = static_cast<std::size_t>(t);
        if (cfg.score_all_agents) {
          if (score_agents) {
            for (int i : *score_agents) {
              const auto ui = static_cast<std::size_t>(i);
              if (tr.active[ut][ui])
                policy.grad_log_prob_accumulate(theta, tr.obs[ut][ui],
                                                tr.actions[ut][ui], w, grad);
            }
          } else {
            const int agents = tr.num_agents();
            for (int i = 0; i < agents; ++i) {
              const auto ui = static_cast<std::size_t>(i);
              if (tr.active[ut][ui])
                policy.grad_log_prob_accumulate(theta, tr.obs[ut][ui],
                                                tr.actions[ut][ui], w, grad);
            }
          }
        } else {
          const auto un = static_cast<std::size_t>(n);
          if (tr.active[ut][un])
            policy.grad_log_prob_accumulate(theta, tr.obs[ut][un],
                                            tr.actions[ut][un], w, grad);
        }
      }
    }
  }
  return stats;
}

ParamVector outer_gradient(const Policy& policy, const ParamVector& theta,
                           const std::vector<AdaptedParams>& adapted,
                           const std::vector<std::vector<Trajectory>>& tau_pre,
                           const std::vector<std::vector<Trajectory>>& tau_post,
                           const TrainConfig& cfg) {
  if (adapted.size() != tau_pre.size() || adapted.size() != tau_post.size())
    throw DimensionError("outer_gradient: one trajectory pair per agent");
  ParamVector grad(theta.size(), 0.0);
  for (std::size_t i = 0; i < adapted.size(); ++i) {
    const double ref =
        adapted[i].step_loss.empty() ? 0.0 : adapted[i].step_loss.back();
    accumulate_outer_gradient(policy, theta, adapted[i], tau_pre[i],
                              tau_post[i], cfg, grad, nullptr, ref);
  }
  return grad;
}

ParamVector central_update(const ParamVector& theta, const ParamVector& grad,
                           double epsilon) {
  ParamVector out = add_scaled(theta, grad, epsilon);
  if (!all_finite(out))
    throw NumericError("central_update: non-finite parameters after step");
  return out;
}

Trainer::Trainer(MultiAgentEnv& env, std::vector<PolicySpec> specs,
                 TrainConfig cfg)
    : env_(env), cfg_(cfg) {
  cfg_.validate();
  const int pops = env_.num_populations();
  if (cfg_.populations != pops)
    throw ConfigError("trainer: config says populations = " +
                      std::to_string(cfg_.populations) +
                      " but the environment has " + std::to_string(pops));
  if (static_cast<int>(specs.size()) != pops)
    throw ConfigError("trainer: got " + std::to_string(specs.size()) +
                      " policy specs for " + std::to_string(pops) +
                      " populations");
  for (int p = 0; p < pops; ++p) {
    PolicySpec& spec = specs[static_cast<std::size_t>(p)];
    spec.validate();
    if (spec.net.input_dim != env_.obs_dim())
      throw DimensionError("trainer: policy input dim " +
                           std::to_string(spec.net.input_dim) +
                           " != observation dim " +
                           std::to_string(env_.obs_dim()));
    const ActionSpec want = env_.action_spec(p);
    if (spec.head != want.head || spec.action_dim != want.dim)
      throw DimensionError("trainer: population " + std::to_string(p) +
                           " policy head/action dim does not match the "
                           "environment's action spec");
    policies_.emplace_back(spec);
    RandomStream init_rng(derive_seed(cfg_.seed, {kPhaseInit, u(p)}));
    theta_.push_back(policies_.back().init(init_rng));
  }
}

void Trainer::set_central(int pop, ParamVector theta) {
  ParamVector& dst = theta_.at(static_cast<std::size_t>(pop));
  if (theta.size() != dst.size())
    throw DimensionError("set_central: parameter length " +
                         std::to_string(theta.size()) + " != " +
                         std::to_string(dst.size()));
  dst = std::move(theta);
}

std::vector<int> Trainer::plan_agents(int iteration) const {
  const int total = env_.num_agents();
  if (cfg_.single_agent) return {0};
  std::vector<int> agents(static_cast<std::size_t>(total));
  std::iota(agents.begin(), agents.end(), 0);
  const int want = cfg_.sample_agents;
  if (want <= 0 || want >= total) return agents;
  // Uniform subsample without replacement (partial Fisher-Yates), then
  // sorted so the reduction order is by agent index.
  RandomStream rng(derive_seed(cfg_.seed, {u(iteration), kPhaseSample}));
  for (int i = 0; i < want; ++i) {
    const int j = i + rng.uniform_int(total - i);
    std::swap(agents[static_cast<std::size_t>(i)],
              agents[static_cast<std::size_t>(j)]);
  }
  agents.resize(static_cast<std::size_t>(want));
  std::sort(agents.begin(), agents.end());
  return agents;
}

IterationRecord Trainer::run_iteration(int iteration) {
  const auto started = std::chrono::steady_clock::now();
  const std::vector<int> agents = plan_agents(iteration);

  std::vector<const Policy*> pop_policies;
  std::vector<const ParamVector*> pop_theta;
  for (int p = 0; p < populations(); ++p) {
    pop_policies.push_back(&policies_[static_cast<std::size_t>(p)]);
    pop_theta.push_back(&theta_[static_cast<std::size_t>(p)]);
  }

  // Per-population membership lists, needed only for the widened term B.
  std::vector<std::vector<int>> members;
  if (cfg_.score_all_agents) {
    members.resize(static_cast<std::size_t>(populations()));
    for (int i = 0; i < env_.num_agents(); ++i)
      members[static_cast<std::size_t>(env_.population_of(i))].push_back(i);
  }

  std::vector<ParamVector> grad;
  std::vector<int> contributors(static_cast<std::size_t>(populations()), 0);
  for (int p = 0; p < populations(); ++p)
    grad.emplace_back(theta_[static_cast<std::size_t>(p)].size(), 0.0);

  double loss_pre_sum = 0.0, loss_post_sum = 0.0;
  double return_sum = 0.0, min_return_sum = 0.0;
  long long return_count = 0;

  std::vector<const Policy*> assigned_policies;
  std::vector<const ParamVector*> assigned_params;
  for (const int n : agents) {
    const int pop = env_.population_of(n);

    // Line 4: batch under the central parameters everywhere.
    build_assignment(env_, pop_policies, pop_theta, -1, nullptr,
                     assigned_policies, assigned_params);
    const auto pre = collect_trajectories(
        env_, assigned_policies, assigned_params, cfg_.n_traj, cfg_.horizon,
        derive_seed(cfg_.seed, {u(iteration), u(n), kPhasePre}));
    episodes_ += static_cast<long long>(pre.size());

    // Line 5: adapt this agent, everyone else frozen.
    const AdaptedParams ad =
        inner_adapt(env_, pop_policies, pop_theta, n, cfg_,
                    derive_seed(cfg_.seed, {u(iteration), u(n), kPhaseInner}));
    episodes_ += static_cast<long long>(cfg_.k) * cfg_.n_traj;

    // Line 6: batch with the adapted agent swapped in.
    build_assignment(env_, pop_policies, pop_theta, n, &ad.theta_n,
                     assigned_policies, assigned_params);
    const auto post = collect_trajectories(
        env_, assigned_policies, assigned_params, cfg_.n_traj, cfg_.horizon,
        derive_seed(cfg_.seed, {u(iteration), u(n), kPhasePost}),
        AssignmentTag::adapted_agent, n);
    episodes_ += static_cast<long long>(post.size());

    // Term B reads the line-4 batch unless a dedicated one was requested.
    const std::vector<Trajectory>* pre_for_b = &pre;
    std::vector<Trajectory> fresh;
    if (cfg_.fresh_pre_trajectories) {
      build_assignment(env_, pop_policies, pop_theta, -1, nullptr,
                       assigned_policies, assigned_params);
      fresh = collect_trajectories(
          env_, assigned_policies, assigned_params, cfg_.n_traj, cfg_.horizon,
          derive_seed(cfg_.seed, {u(iteration), u(n), kPhaseFreshPre}));
      episodes_ += static_cast<long long>(fresh.size());
      pre_for_b = &fresh;
    }

    const std::vector<int>* score_agents =
        cfg_.score_all_agents ? &members[static_cast<std::size_t>(pop)]
                              : nullptr;
    const double term_b_ref =
        ad.step_loss.empty() ? loss_ref_ : ad.step_loss.back();
    const OuterStats stats = accumulate_outer_gradient(
        policies_[static_cast<std::size_t>(pop)],
        theta_[static_cast<std::size_t>(pop)], ad, *pre_for_b, post, cfg_,
        grad[static_cast<std::size_t>(pop)], score_agents, term_b_ref);
    ++contributors[static_cast<std::size_t>(pop)];

    loss_pre_sum += estimate_loss(pre, n, cfg_.gamma);
    loss_post_sum += stats.loss_post;
    for (const Trajectory& tr : pre) {
      return_sum += tr.mean_return(1.0);
      min_return_sum += tr.min_agent_return(1.0);
      ++return_count;
    }
  }

  // Line 9: consolidate and step each population; agents implicitly project
  // back onto the new central vector (their slots always read theta_).
  double norm_sq = 0.0;
  for (int p = 0; p < populations(); ++p) {
    ParamVector& g = grad[static_cast<std::size_t>(p)];
    const int count = contributors[static_cast<std::size_t>(p)];
    if (cfg_.average_agents && count > 0) scale_inplace(g, 1.0 / count);
    const double norm = l2_norm(g);
    norm_sq += norm * norm;
    theta_[static_cast<std::size_t>(p)] =
        central_update(theta_[static_cast<std::size_t>(p)], g, cfg_.epsilon);
  }

  IterationRecord rec;
  rec.iteration = iteration;
  rec.episodes = episodes_;
  const auto sampled = static_cast<double>(agents.size());
  rec.mean_return = return_count ? return_sum / static_cast<double>(return_count) : 0.0;
  rec.min_agent_return =
      return_count ? min_return_sum / static_cast<double>(return_count) : 0.0;
  rec.loss_pre = agents.empty() ? 0.0 : loss_pre_sum / sampled;
  rec.loss_post = agents.empty() ? 0.0 : loss_post_sum / sampled;
  loss_ref_ = rec.loss_post;
  rec.grad_norm = std::sqrt(norm_sq);
  rec.wallclock_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  return rec;
}

void Trainer::train(
    const std::function<void(const IterationRecord&)>& on_iteration) {
  for (int it = 0; it < cfg_.iterations; ++it) {
    IterationRecord rec;
    try {
      rec = run_iteration(it);
    } catch (const NumericError& e) {
      throw NumericError("iteration " + std::to_string(it) + ": " + e.what());
    } catch (const DimensionError& e) {
      throw DimensionError("iteration " + std::to_string(it) + ": " +
                           e.what());
    }
    if (on_iteration) on_iteration(rec);
  }
}

AdaptedParams Trainer::adapt(int agent, std::uint64_t seed) const {
  std::vector<const Policy*> pop_policies;
  std::vector<const ParamVector*> pop_theta;
  for (int p = 0; p < populations(); ++p) {
    pop_policies.push_back(&policies_[static_cast<std::size_t>(p)]);
    pop_theta.push_back(&theta_[static_cast<std::size_t>(p)]);
  }
  return inner_adapt(env_, pop_policies, pop_theta, agent, cfg_, seed);
}

}  // namespace dimapg
