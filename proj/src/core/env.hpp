#pragma once

#include <cstdint>
#include <vector>

#include "core/policy.hpp"
#include "core/rng.hpp"

namespace dimapg {

// What kind of action each population's policy must produce.
struct ActionSpec {
  HeadKind head = HeadKind::gaussian;
  int dim = 1;  // gaussian: action components, categorical: action count
};

struct StepResult {
  std::vector<std::vector<double>> obs;  // one per agent (zeros if dead)
  std::vector<double> rewards;           // one per agent
  std::vector<std::uint8_t> active;      // alive at step start, one per agent
  bool done = false;                     // early termination (all dead)

  // Step diagnostics; environments fill what applies to them.
  int predator_prey_collisions = 0;
  int food_eaten = 0;
  int deaths = 0;
  int ignored_dead_actions = 0;
};

// Homogeneous-agent environment contract. Instances are single-owner; all
// stochasticity enters through reset's stream. step is deterministic given
// state and actions.
class MultiAgentEnv {
 public:
  virtual ~MultiAgentEnv() = default;

  virtual int num_agents() const = 0;
  virtual int obs_dim() const = 0;
  virtual int horizon() const = 0;
  virtual int num_populations() const { return 1; }
  virtual int population_of(int /*agent*/) const { return 0; }
  virtual ActionSpec action_spec(int population) const = 0;

  virtual std::vector<std::vector<double>> reset(RandomStream& rng) = 0;
  virtual StepResult step(const std::vector<Action>& joint_action) = 0;
};

}  // namespace dimapg
