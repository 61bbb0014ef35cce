#pragma once

#include <vector>

#include "core/env.hpp"

namespace dimapg {

struct CoopNavConfig {
  int num_agents = 3;  // goals match the agent count
  int horizon = 200;
};

// Cooperative navigation: N point-mass agents, N goals, shared reward
// -sum_j min_n ||p_n - g_j||^2, individual penalties for collisions and
// leaving the world, everything clipped to [-1, 1].
class CoopNavEnv final : public MultiAgentEnv {
 public:
  struct State {
    std::vector<double> pos;  // 2N, interleaved (x0,y0,x1,y1,...)
    std::vector<double> vel;  // 2N
    std::vector<double> goals;  // 2N
  };

  explicit CoopNavEnv(CoopNavConfig cfg) : cfg_(cfg) {}

  int num_agents() const override { return cfg_.num_agents; }
  int obs_dim() const override { return 2 + 4 * cfg_.num_agents; }
  int horizon() const override { return cfg_.horizon; }
  ActionSpec action_spec(int) const override { return {HeadKind::gaussian, 2}; }

  std::vector<std::vector<double>> reset(RandomStream& rng) override;
  StepResult step(const std::vector<Action>& joint_action) override;

  const State& state() const { return state_; }
  void set_state(const State& s);  // tests only

 private:
  std::vector<double> observe(int agent) const;

  CoopNavConfig cfg_;
  State state_;
};

// Shared point-mass physics constants for the particle environments.
namespace particle {
inline constexpr double kDt = 0.1;
inline constexpr double kDamping = 0.25;
inline constexpr double kCollisionRadius = 0.1;
inline constexpr double kMaxSpeed = 1.0;
inline constexpr double kWorld = 1.0;  // world is [-kWorld, kWorld]^2

// v <- (1 - damping) v + a dt, speed-capped; p <- p + v dt.
// Returns true if p left the world before clamping.
bool integrate(double& px, double& py, double& vx, double& vy, double ax,
               double ay, double max_speed);
}  // namespace particle

}  // namespace dimapg
