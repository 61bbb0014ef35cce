#include "core/rollout.hpp"

#include "core/error.hpp"

namespace dimapg {

Trajectory rollout_joint(MultiAgentEnv& env,
                         const std::vector<const Policy*>& policies,
                         const std::vector<const ParamVector*>& params, int T,
                         RandomStream& rng, AssignmentTag tag,
                         int adapted_agent) {
  const int n = env.num_agents();
  if (static_cast<int>(policies.size()) != n ||
      static_cast<int>(params.size()) != n)
    throw DimensionError("rollout_joint: assignment must cover all agents");
  for (int i = 0; i < n; ++i) {
    if (policies[static_cast<std::size_t>(i)]->obs_dim() != env.obs_dim())
      throw DimensionError("rollout_joint: policy/env observation mismatch");
  }

  Trajectory traj;
  traj.tag = tag;
  traj.adapted_agent = adapted_agent;
  traj.obs.reserve(static_cast<std::size_t>(T));

  std::vector<std::vector<double>> obs = env.reset(rng);
  std::vector<std::uint8_t> active(static_cast<std::size_t>(n), 1);

  for (int t = 0; t < T; ++t) {
    std::vector<Action> acts(static_cast<std::size_t>(n));
    std::vector<double> lps(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
      const auto d = policies[static_cast<std::size_t>(i)]->distribution(
          *params[static_cast<std::size_t>(i)], obs[static_cast<std::size_t>(i)]);
      auto [a, lp] = sample_and_logp(d, rng);
      acts[static_cast<std::size_t>(i)] = std::move(a);
      lps[static_cast<std::size_t>(i)] = lp;
    }

    StepResult r = env.step(acts);
    if (!r.active.empty()) active = r.active;
    traj.total_collisions += r.predator_prey_collisions;
    traj.total_food_eaten += r.food_eaten;
    traj.total_deaths += r.deaths;

    traj.obs.push_back(std::move(obs));
    traj.actions.push_back(std::move(acts));
    traj.logps.push_back(std::move(lps));
    traj.rewards.push_back(std::move(r.rewards));
    traj.active.push_back(active);

    obs = std::move(r.obs);
    if (r.done) break;
  }
  return traj;
}

std::vector<Trajectory> collect_trajectories(
    MultiAgentEnv& env, const std::vector<const Policy*>& policies,
    const std::vector<const ParamVector*>& params, int n_traj, int T,
    std::uint64_t batch_seed, AssignmentTag tag, int adapted_agent) {
  std::vector<Trajectory> out;
  out.reserve(static_cast<std::size_t>(n_traj));
  for (int i = 0; i < n_traj; ++i) {
    RandomStream rng(derive_seed(batch_seed, {static_cast<std::uint64_t>(i)}));
    out.push_back(
        rollout_joint(env, policies, params, T, rng, tag, adapted_agent));
  }
  return out;
}

}  // namespace dimapg
