#pragma once

#include <cstdint>
#include <vector>

#include "core/policy.hpp"

namespace dimapg {

// Which parameter assignment generated a trajectory: every agent on the
// central parameters, or one designated agent on its adapted copy.
enum class AssignmentTag { all_central, adapted_agent };

// One episode of joint experience. Everything needed to recompute per-agent
// log-probability gradients afterwards is retained (observations, actions,
// per-agent rewards, activity masks for environments with deaths).
struct Trajectory {
  AssignmentTag tag = AssignmentTag::all_central;
  int adapted_agent = -1;  // meaningful when tag == adapted_agent

  std::vector<std::vector<std::vector<double>>> obs;  // [t][agent][dim]
  std::vector<std::vector<Action>> actions;           // [t][agent]
  std::vector<std::vector<double>> rewards;           // [t][agent]
  std::vector<std::vector<double>> logps;             // [t][agent]
  std::vector<std::vector<std::uint8_t>> active;      // [t][agent]

  // Episode totals of the environments' step diagnostics.
  int total_collisions = 0;
  int total_food_eaten = 0;
  int total_deaths = 0;

  int length() const { return static_cast<int>(rewards.size()); }
  int num_agents() const {
    return rewards.empty() ? 0 : static_cast<int>(rewards[0].size());
  }

  // Total discounted return of one agent.
  double agent_return(int agent, double gamma) const {
    double g = 0.0;
    for (int t = length() - 1; t >= 0; --t)
      g = rewards[static_cast<std::size_t>(t)][static_cast<std::size_t>(agent)] +
          gamma * g;
    return g;
  }

  // Mean over agents of the total discounted return.
  double mean_return(double gamma) const {
    const int n = num_agents();
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += agent_return(i, gamma);
    return n > 0 ? s / n : 0.0;
  }

  double min_agent_return(double gamma) const {
    const int n = num_agents();
    double m = 0.0;
    for (int i = 0; i < n; ++i) {
      const double r = agent_return(i, gamma);
      if (i == 0 || r < m) m = r;
    }
    return m;
  }
};

}  // namespace dimapg
