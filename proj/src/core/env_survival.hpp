#pragma once

#include <cstdint>
#include <vector>

#include "core/env.hpp"

namespace dimapg {

struct SurvivalConfig {
  int width = 32;
  int height = 32;
  int num_agents = 20;
  int food = 160;  // placed as a centered block at reset
  int horizon = 200;
  int hp = 2;
};

// Gridworld survival: agents move on a bounded grid, eat food, and can gang
// up on each other. Action space (23):
//   0..12   moves: stay + the 12 cells at L1 distance <= 2
//   13..20  attacks: the 8 Moore-neighborhood cells
//   21, 22  turn left / turn right (affects only the rotated local view)
// Per step: turns resolve first, then simultaneous attacks (1 damage each),
// then moves in agent-index order (blocked moves stay put; stepping onto a
// food cell consumes it).
class SurvivalEnv final : public MultiAgentEnv {
 public:
  static constexpr int kNumActions = 23;
  static constexpr int kView = 5;  // local view is kView x kView x 3

  struct AgentState {
    int x = 0, y = 0;
    int orient = 0;  // 0=N 1=E 2=S 3=W
    int hp = 0;
    bool alive = false;
    int last_action = -1;  // -1: none yet
    double last_reward = 0.0;
  };
  struct State {
    std::vector<AgentState> agents;
    std::vector<std::uint8_t> food;  // width*height cells, row-major [y*W+x]
    int food_remaining = 0;
  };

  explicit SurvivalEnv(SurvivalConfig cfg);

  int num_agents() const override { return cfg_.num_agents; }
  int obs_dim() const override { return kView * kView * 3 + 1 + (kNumActions + 1) + 1 + 2; }
  int horizon() const override { return cfg_.horizon; }
  ActionSpec action_spec(int) const override {
    return {HeadKind::categorical, kNumActions};
  }

  std::vector<std::vector<double>> reset(RandomStream& rng) override;
  StepResult step(const std::vector<Action>& joint_action) override;

  std::vector<double> build_observation(int agent) const;

  const State& state() const { return state_; }
  void set_state(const State& s);  // tests only
  const SurvivalConfig& config() const { return cfg_; }
  int initial_food() const { return cfg_.food; }
  int living_agents() const;

  // Pinned action tables (x, y offsets in world frame).
  static const int kMoveDelta[13][2];
  static const int kAttackDelta[8][2];

 private:
  int cell(int x, int y) const { return y * cfg_.width + x; }
  bool in_grid(int x, int y) const {
    return x >= 0 && x < cfg_.width && y >= 0 && y < cfg_.height;
  }
  void rebuild_occupancy();

  SurvivalConfig cfg_;
  State state_;
  std::vector<int> occupant_;  // agent index per cell, -1 if empty
};

}  // namespace dimapg
