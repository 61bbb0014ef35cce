#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "core/env.hpp"
#include "core/pg.hpp"
#include "core/policy.hpp"
#include "core/trajectory.hpp"
#include "core/vec.hpp"

namespace dimapg {

// Algorithm-level knobs. The file-format config (harness) folds the
// environment block on top of this.
struct TrainConfig {
  double alpha1 = 0.01;   // inner step size, first step
  double alpha2 = 0.01;   // inner step size, later steps
  double epsilon = 0.05;  // central step size
  int k = 3;              // inner adaptation steps
  int sample_agents = 0;  // agents adapted per iteration; 0 = every agent
  int n_traj = 25;        // episodes per gradient estimate
  int horizon = 200;
  double gamma = 0.99;
  int iterations = 500;
  std::uint64_t seed = 0;
  bool first_order = true;
  int populations = 1;

  bool use_baseline = true;
  bool trajectory_level_returns = false;  // weight scores by R(tau), not G_t
  bool score_all_agents = false;  // term B over every co-policy agent's factors
  bool average_agents = false;    // divide the consolidated gradient by N
  bool fresh_pre_trajectories = false;  // own all-central batch for term B
  bool single_agent = false;            // fine-tune baseline: train agent 0 only

  // Throws ConfigError on out-of-range fields. first_order=false is rejected:
  // the training loop only implements the first-order estimator (the exact
  // composite gradient exists as a micro-scale check in the test oracles).
  void validate() const;

  PgOptions pg_options() const;

  bool operator==(const TrainConfig&) const = default;
};

// Result of the k inner steps. trace.front() is the central vector the agent
// started from and trace.back() == theta_n, so trace always has k+1 entries.
struct AdaptedParams {
  int agent = -1;
  ParamVector theta_n;
  std::vector<ParamVector> trace;
  std::vector<double> step_loss;  // batch loss estimate before each step
};

// Per-agent assignment tables: agent i runs pop_policies[population(i)] at
// *pop_theta[population(i)], except `agent` (if >= 0), which runs
// *override_params instead.
void build_assignment(const MultiAgentEnv& env,
                      const std::vector<const Policy*>& pop_policies,
                      const std::vector<const ParamVector*>& pop_theta,
                      int agent, const ParamVector* override_params,
                      std::vector<const Policy*>& policies,
                      std::vector<const ParamVector*>& params);

// k REINFORCE ascent steps on the agent's own return with every other agent
// frozen at its population's central parameters. Each step collects a fresh
// batch of cfg.n_traj episodes. Central vectors are never written; k=0 or
// zero step sizes return the central vector bit-for-bit.
AdaptedParams inner_adapt(MultiAgentEnv& env,
                          const std::vector<const Policy*>& pop_policies,
                          const std::vector<const ParamVector*>& pop_theta,
                          int agent, const TrainConfig& cfg,
                          std::uint64_t seed);

struct OuterStats {
  double loss_pre = 0.0;   // mean discounted return on tau_pre
  double loss_post = 0.0;  // mean discounted return on tau_post
};

// Two-term outer gradient for one agent, added into grad (sized like theta):
//   term A: advantage-weighted REINFORCE of the agent's own action factors,
//           evaluated at theta_n on tau_post; first-order, so the result is
//           applied to the central vector as-is;
//   term B: score of the agent's factors at theta on tau_pre, weighted by
//           the scalar post-adaptation loss estimate from tau_post, centered
//           on term_b_reference.
// The score over tau_pre has zero mean, so any term_b_reference that does not
// depend on tau_pre leaves the estimator's expectation unchanged; a reference
// near the loss level cancels most of the term's variance, which otherwise
// scales with the absolute loss and destabilizes the central update. Callers
// should pass the loss estimate from the last inner-adaptation batch (or a
// running loss level when k = 0); the default 0 is the uncentered estimator.
// With cfg.score_all_agents, term B widens to the factors of every agent in
// score_agents (or of every agent in the trajectory when null); pass the
// agent's co-population there when two populations are trained.
OuterStats accumulate_outer_gradient(const Policy& policy,
                                     const ParamVector& theta,
                                     const AdaptedParams& adapted,
                                     const std::vector<Trajectory>& tau_pre,
                                     const std::vector<Trajectory>& tau_post,
                                     const TrainConfig& cfg, ParamVector& grad,
                                     const std::vector<int>* score_agents =
                                         nullptr,
                                     double term_b_reference = 0.0);

// Sum of accumulate_outer_gradient over the sampled agents of one
// population; tau_pre[i]/tau_post[i] belong to adapted[i]. Reduction runs in
// input order, so per-agent calls summed by hand match bit-for-bit. Term B's
// reference is each agent's final inner-step batch loss (0 when k = 0).
ParamVector outer_gradient(const Policy& policy, const ParamVector& theta,
                           const std::vector<AdaptedParams>& adapted,
                           const std::vector<std::vector<Trajectory>>& tau_pre,
                           const std::vector<std::vector<Trajectory>>& tau_post,
                           const TrainConfig& cfg);

// theta' = theta + epsilon * grad with a finiteness check.
ParamVector central_update(const ParamVector& theta, const ParamVector& grad,
                           double epsilon);

// One row of the training metrics stream.
struct IterationRecord {
  int iteration = 0;
  long long episodes = 0;  // cumulative episodes sampled since construction
  double mean_return = 0.0;  // undiscounted, over the all-central batches
  double min_agent_return = 0.0;  // per-episode worst agent, averaged
  double loss_pre = 0.0;   // mean L_n estimate before adaptation
  double loss_post = 0.0;  // mean L_n estimate after adaptation
  double grad_norm = 0.0;  // norm of the applied consolidated gradient
  double wallclock_s = 0.0;
};

// The training loop. Holds one central parameter vector per population and
// advances them in place. Every stochastic choice derives from (cfg.seed,
// iteration, agent, phase), so identical configs replay bit-for-bit and
// per-agent work could be farmed out without changing results; consolidation
// is the single serial point, reduced in agent-index order.
class Trainer {
 public:
  // The environment must outlive the trainer. One PolicySpec per population,
  // checked against the environment's dimensions.
  Trainer(MultiAgentEnv& env, std::vector<PolicySpec> specs, TrainConfig cfg);

  int populations() const { return static_cast<int>(theta_.size()); }
  const ParamVector& central(int pop) const { return theta_.at(pop); }
  void set_central(int pop, ParamVector theta);
  const MlpPolicy& policy(int pop) const { return policies_.at(pop); }
  const TrainConfig& config() const { return cfg_; }
  long long episodes() const { return episodes_; }

  // Agents adapted at the given iteration: ascending, no repeats. All agents
  // by default, a seeded subsample when cfg.sample_agents cuts the count,
  // agent 0 alone in single_agent mode.
  std::vector<int> plan_agents(int iteration) const;

  // One pass of the algorithm: per planned agent collect the all-central
  // batch, adapt, collect the adapted batch, accumulate the outer gradient;
  // then consolidate per population and step the central vectors. After the
  // update every agent slot reads the new vector (the projection step).
  IterationRecord run_iteration(int iteration);

  // cfg.iterations passes; on_iteration (if set) sees each record. Failures
  // are rethrown with the iteration prepended.
  void train(const std::function<void(const IterationRecord&)>& on_iteration);

  // inner_adapt for one agent from the current central vectors.
  AdaptedParams adapt(int agent, std::uint64_t seed) const;

 private:
  MultiAgentEnv& env_;
  TrainConfig cfg_;
  std::vector<MlpPolicy> policies_;
  std::vector<ParamVector> theta_;
  long long episodes_ = 0;
  // Term B reference level when an agent has no inner-step batches (k = 0):
  // the previous iteration's mean post-adaptation loss. Depends only on past
  // iterations, so the current tau_pre stays independent of it.
  double loss_ref_ = 0.0;
};

}  // namespace dimapg
