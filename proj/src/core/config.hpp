#pragma once

#include <memory>
#include <string>
#include <vector>

#include "core/dimapg.hpp"
#include "core/env.hpp"
#include "core/mlp.hpp"
#include "core/policy.hpp"

namespace dimapg {

// Resolved run configuration: the algorithm knobs plus environment, policy
// and harness blocks. Defaults depend on the chosen environment (predprey
// trains two populations, survival subsamples its larger crowd), so parsing
// resolves the `env` key before applying the remaining assignments.
struct RunConfig {
  std::string env;  // coopnav | predprey | survival
  TrainConfig train;

  // policy head/network block
  std::vector<int> hidden = {100, 100};
  Activation activation = Activation::relu;
  double initial_log_std = -0.5;

  // coopnav / survival crowd size
  int n_agents = 3;
  // predprey
  int num_predators = 3;
  int num_prey = 1;
  double prey_speed_factor = 1.3;
  int num_obstacles = 2;
  bool team_reward = false;
  // survival
  int grid_width = 32;
  int grid_height = 32;
  int food = 160;
  int hp = 2;

  // harness
  int eval_episodes = 100;
  int checkpoint_every = 100;

  bool operator==(const RunConfig&) const = default;
};

// Baseline values for one environment. Throws ConfigError on a bad name.
RunConfig default_config(const std::string& env_name);

// `key = value` lines, `#` starts a comment, later assignments win. The env
// key must be present. Unknown keys, malformed lines and type mismatches
// raise ConfigError naming the offender.
RunConfig parse_config(const std::string& text);

// Canonical text form; parse_config(render_config(c)) == c.
std::string render_config(const RunConfig& cfg);

// One key assignment applied to an already-resolved config (used for
// command-line overrides). Rejects `env`: the environment fixes the defaults
// and must come from the file.
void apply_override(RunConfig& cfg, const std::string& key,
                    const std::string& value);

std::unique_ptr<MultiAgentEnv> make_environment(const RunConfig& cfg);

// One spec per population, shaped by the environment's dimensions.
std::vector<PolicySpec> make_policy_specs(const RunConfig& cfg,
                                          const MultiAgentEnv& env);

}  // namespace dimapg
