#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/dimapg.hpp"
#include "core/env.hpp"

namespace dimapg {

// How agents are parameterized during evaluation rollouts.
//   central:  every agent runs its population's central parameters.
//   adapted:  each agent first runs k inner steps, then deploys its own
//             adapted vector; all agents play adapted simultaneously.
//   finetune: same rollout as central; the caller points it at a checkpoint
//             that was trained in single-agent mode.
enum class EvalMode { central, adapted, finetune };

EvalMode parse_eval_mode(const std::string& name);
const char* eval_mode_name(EvalMode mode);

struct EpisodeStats {
  double mean_return = 0.0;       // undiscounted, averaged over agents
  double min_agent_return = 0.0;  // undiscounted, worst agent
  double collisions = 0.0;
  double food_eaten = 0.0;
  double deaths = 0.0;
};

struct EvalResult {
  EvalMode mode = EvalMode::central;
  std::vector<EpisodeStats> episodes;
  double mean_return = 0.0;
  double min_agent_return = 0.0;  // mean over episodes of the per-episode min
  double mean_collisions = 0.0;
  double mean_food_eaten = 0.0;
  double mean_deaths = 0.0;
};

// Plays `episodes` seeded episodes and averages the per-episode statistics.
// Returns are undiscounted; adaptation (adapted mode) draws its rollout
// batches from streams derived from `seed` but separate from the episode
// streams, so central and adapted with k=0 replay identically.
EvalResult evaluate(MultiAgentEnv& env,
                    const std::vector<MlpPolicy>& pop_policies,
                    const std::vector<ParamVector>& central, EvalMode mode,
                    const TrainConfig& cfg, int episodes, std::uint64_t seed);

}  // namespace dimapg
