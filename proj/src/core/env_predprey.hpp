#pragma once

#include <vector>

#include "core/env.hpp"
#include "core/env_coopnav.hpp"  // particle constants

namespace dimapg {

struct PredPreyConfig {
  int num_predators = 3;
  int num_prey = 1;
  double prey_speed_factor = 1.3;  // prey max speed / predator max speed
  int num_obstacles = 2;
  double obstacle_radius = 0.2;
  int horizon = 200;
  bool team_reward = false;  // share each catch with the whole predator team
};

// Predator-prey pursuit with static obstacle discs. Agents are indexed
// predators first, then prey; predators are population 0, prey population 1.
class PredPreyEnv final : public MultiAgentEnv {
 public:
  struct State {
    std::vector<double> pos;        // 2(P+Q)
    std::vector<double> vel;        // 2(P+Q)
    std::vector<double> obstacles;  // 2(number of obstacles), centers
  };

  explicit PredPreyEnv(PredPreyConfig cfg) : cfg_(cfg) {}

  int num_agents() const override { return cfg_.num_predators + cfg_.num_prey; }
  int obs_dim() const override {
    return 4 + 4 * (num_agents() - 1) + 2 * cfg_.num_obstacles;
  }
  int horizon() const override { return cfg_.horizon; }
  int num_populations() const override { return 2; }
  int population_of(int agent) const override {
    return agent < cfg_.num_predators ? 0 : 1;
  }
  ActionSpec action_spec(int) const override { return {HeadKind::gaussian, 2}; }

  std::vector<std::vector<double>> reset(RandomStream& rng) override;
  StepResult step(const std::vector<Action>& joint_action) override;

  const State& state() const { return state_; }
  void set_state(const State& s);  // tests only
  const PredPreyConfig& config() const { return cfg_; }

 private:
  std::vector<double> observe(int agent) const;

  PredPreyConfig cfg_;
  State state_;
};

}  // namespace dimapg
