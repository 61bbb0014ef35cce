#pragma once

#include <cstdint>
#include <vector>

#include "core/env.hpp"
#include "core/trajectory.hpp"

namespace dimapg {

// Plays one episode: every agent i samples from policies[i] evaluated at
// *params[i]. Episode stochasticity (reset and action noise) comes entirely
// from rng, so a seed pins the whole trajectory.
Trajectory rollout_joint(MultiAgentEnv& env,
                         const std::vector<const Policy*>& policies,
                         const std::vector<const ParamVector*>& params, int T,
                         RandomStream& rng,
                         AssignmentTag tag = AssignmentTag::all_central,
                         int adapted_agent = -1);

// n_traj episodes with per-episode streams derived from batch_seed, so the
// batch is reproducible and order-independent.
std::vector<Trajectory> collect_trajectories(
    MultiAgentEnv& env, const std::vector<const Policy*>& policies,
    const std::vector<const ParamVector*>& params, int n_traj, int T,
    std::uint64_t batch_seed, AssignmentTag tag = AssignmentTag::all_central,
    int adapted_agent = -1);

}  // namespace dimapg
