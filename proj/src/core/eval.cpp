#include "core/eval.hpp"

#include <algorithm>

#include "core/error.hpp"
#include "core/rollout.hpp"

namespace dimapg {

namespace {

// Seed-path tags, distinct from the training phases in dimapg.cpp so an
// evaluation never replays a training batch.
constexpr std::uint64_t kEvalAdapt = 7;
constexpr std::uint64_t kEvalEpisode = 8;

std::uint64_t u(int v) { return static_cast<std::uint64_t>(v); }

}  // namespace

EvalMode parse_eval_mode(const std::string& name) {
  if (name == "central") return EvalMode::central;
  if (name == "adapted") return EvalMode::adapted;
  if (name == "finetune") return EvalMode::finetune;
  throw ConfigError("unknown eval mode '" + name +
                    "' (expected central, adapted or finetune)");
}

const char* eval_mode_name(EvalMode mode) {
  switch (mode) {
    case EvalMode::central:
      return "central";
    case EvalMode::adapted:
      return "adapted";
    case EvalMode::finetune:
      return "finetune";
  }
  return "?";
}

EvalResult evaluate(MultiAgentEnv& env,
                    const std::vector<MlpPolicy>& pop_policies,
                    const std::vector<ParamVector>& central, EvalMode mode,
                    const TrainConfig& cfg, int episodes, std::uint64_t seed) {
  if (episodes < 1) throw ConfigError("eval: episodes must be >= 1");
  const int pops = env.num_populations();
  if (static_cast<int>(pop_policies.size()) != pops ||
      static_cast<int>(central.size()) != pops)
    throw DimensionError(
        "eval: one policy and one central vector per population required");

  const int n_agents = env.num_agents();
  std::vector<const Policy*> policies(static_cast<std::size_t>(n_agents));
  std::vector<const ParamVector*> params(static_cast<std::size_t>(n_agents));
  for (int i = 0; i < n_agents; ++i) {
    const std::size_t p = static_cast<std::size_t>(env.population_of(i));
    policies[static_cast<std::size_t>(i)] = &pop_policies[p];
    params[static_cast<std::size_t>(i)] = &central[p];
  }

  // Adapted mode: every agent adapts from the central parameters (others
  // frozen), then all of them deploy their own vectors at once.
  std::vector<ParamVector> own;
  if (mode == EvalMode::adapted) {
    std::vector<const Policy*> pol_ptrs;
    std::vector<const ParamVector*> theta_ptrs;
    for (int p = 0; p < pops; ++p) {
      pol_ptrs.push_back(&pop_policies[static_cast<std::size_t>(p)]);
      theta_ptrs.push_back(&central[static_cast<std::size_t>(p)]);
    }
    own.reserve(static_cast<std::size_t>(n_agents));
    for (int n = 0; n < n_agents; ++n) {
      AdaptedParams a = inner_adapt(env, pol_ptrs, theta_ptrs, n, cfg,
                                    derive_seed(seed, {kEvalAdapt, u(n)}));
      own.push_back(std::move(a.theta_n));
    }
    for (int i = 0; i < n_agents; ++i)
      params[static_cast<std::size_t>(i)] = &own[static_cast<std::size_t>(i)];
  }

  EvalResult result;
  result.mode = mode;
  result.episodes.reserve(static_cast<std::size_t>(episodes));
  for (int ep = 0; ep < episodes; ++ep) {
    RandomStream rng(derive_seed(seed, {kEvalEpisode, u(ep)}));
    const Trajectory tr =
        rollout_joint(env, policies, params, cfg.horizon, rng);
    EpisodeStats st;
    st.mean_return = tr.mean_return(1.0);
    st.min_agent_return = tr.min_agent_return(1.0);
    st.collisions = tr.total_collisions;
    st.food_eaten = tr.total_food_eaten;
    st.deaths = tr.total_deaths;
    result.mean_return += st.mean_return;
    result.min_agent_return += st.min_agent_return;
    result.mean_collisions += st.collisions;
    result.mean_food_eaten += st.food_eaten;
    result.mean_deaths += st.deaths;
    result.episodes.push_back(st);
  }
  const double inv = 1.0 / episodes;
  result.mean_return *= inv;
  result.min_agent_return *= inv;
  result.mean_collisions *= inv;
  result.mean_food_eaten *= inv;
  result.mean_deaths *= inv;
  return result;
}

}  // namespace dimapg
