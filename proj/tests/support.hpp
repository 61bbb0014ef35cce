#pragma once

// Shared fixtures for the algorithm-level tests: adapters that let the
// training loop run on enumerable TinyMDPs, and builders that turn
// enumerated trajectories into the batch type the estimators consume.

#include <utility>
#include <vector>

#include "core/env.hpp"
#include "core/oracle.hpp"
#include "core/rng.hpp"
#include "core/trajectory.hpp"

namespace dimapg::testing {

// Single-agent environment view of a TinyMDP. Transition noise is drawn from
// a stream seeded at reset, so episodes replay bit-for-bit from the reset
// stream alone.
class TinyMdpEnv final : public MultiAgentEnv {
 public:
  explicit TinyMdpEnv(oracle::TinyMDP mdp) : mdp_(std::move(mdp)) {
    mdp_.validate();
  }

  int num_agents() const override { return 1; }
  int obs_dim() const override { return 1; }
  int horizon() const override { return mdp_.horizon; }
  ActionSpec action_spec(int /*population*/) const override {
    return {HeadKind::categorical, mdp_.num_actions};
  }

  std::vector<std::vector<double>> reset(RandomStream& rng) override {
    noise_ = RandomStream(rng.next_u64());
    state_ = sample_index(mdp_.initial, rng);
    return {{static_cast<double>(state_)}};
  }

  StepResult step(const std::vector<Action>& joint_action) override {
    const int a = joint_action.at(0).discrete;
    StepResult r;
    r.rewards = {mdp_.r(state_, a)};
    std::vector<double> row(static_cast<std::size_t>(mdp_.num_states));
    for (int s2 = 0; s2 < mdp_.num_states; ++s2)
      row[static_cast<std::size_t>(s2)] = mdp_.p(state_, a, s2);
    state_ = sample_index(row, noise_);
    r.obs = {{static_cast<double>(state_)}};
    r.active = {1};
    return r;
  }

 private:
  static int sample_index(const std::vector<double>& probs, RandomStream& rng) {
    const double u = rng.uniform();
    double c = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      c += probs[i];
      if (u < c) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size()) - 1;
  }

  oracle::TinyMDP mdp_;
  RandomStream noise_{0};
  int state_ = 0;
};

// Single-agent tabular trajectory from explicit (state, action, reward)
// sequences. Log-probs are not replayed anywhere in the gradient path, so
// they are left at zero.
inline Trajectory make_tab_trajectory(const std::vector<int>& states,
                                      const std::vector<int>& actions,
                                      const std::vector<double>& rewards) {
  Trajectory tr;
  for (std::size_t t = 0; t < states.size(); ++t) {
    tr.obs.push_back({{static_cast<double>(states[t])}});
    Action a;
    a.discrete = actions[t];
    tr.actions.push_back({a});
    tr.rewards.push_back({rewards[t]});
    tr.logps.push_back({0.0});
    tr.active.push_back({1});
  }
  return tr;
}

inline Trajectory to_trajectory(const oracle::EnumeratedTrajectory& e) {
  return make_tab_trajectory(e.states, e.actions, e.rewards);
}

}  // namespace dimapg::testing
