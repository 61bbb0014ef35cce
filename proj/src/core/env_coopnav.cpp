#include "core/env_coopnav.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace dimapg {

namespace particle {

bool integrate(double& px, double& py, double& vx, double& vy, double ax,
               double ay, double max_speed) {
  vx = (1.0 - kDamping) * vx + ax * kDt;
  vy = (1.0 - kDamping) * vy + ay * kDt;
  const double speed = std::sqrt(vx * vx + vy * vy);
  if (speed > max_speed) {
    vx *= max_speed / speed;
    vy *= max_speed / speed;
  }
  px += vx * kDt;
  py += vy * kDt;
  const bool out = px < -kWorld || px > kWorld || py < -kWorld || py > kWorld;
  px = std::clamp(px, -kWorld, kWorld);
  py = std::clamp(py, -kWorld, kWorld);
  return out;
}

}  // namespace particle

std::vector<std::vector<double>> CoopNavEnv::reset(RandomStream& rng) {
  const int n = cfg_.num_agents;
  state_.pos.resize(static_cast<std::size_t>(2 * n));
  state_.vel.assign(static_cast<std::size_t>(2 * n), 0.0);
  state_.goals.resize(static_cast<std::size_t>(2 * n));
  for (double& v : state_.pos) v = rng.uniform(-1.0, 1.0);
  for (double& v : state_.goals) v = rng.uniform(-1.0, 1.0);

  std::vector<std::vector<double>> obs;
  obs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) obs.push_back(observe(i));
  return obs;
}

void CoopNavEnv::set_state(const State& s) {
  const std::size_t want = static_cast<std::size_t>(2 * cfg_.num_agents);
  if (s.pos.size() != want || s.vel.size() != want || s.goals.size() != want)
    throw DimensionError("CoopNavEnv::set_state: state size mismatch");
  state_ = s;
}

StepResult CoopNavEnv::step(const std::vector<Action>& joint_action) {
  const int n = cfg_.num_agents;
  if (static_cast<int>(joint_action.size()) != n)
    throw DimensionError("CoopNavEnv::step: joint action count");

  StepResult out;
  out.rewards.assign(static_cast<std::size_t>(n), 0.0);
  out.active.assign(static_cast<std::size_t>(n), 1);

  std::vector<bool> left(static_cast<std::size_t>(n), false);
  for (int i = 0; i < n; ++i) {
    const auto& a = joint_action[static_cast<std::size_t>(i)].continuous;
    if (a.size() != 2)
      throw DimensionError("CoopNavEnv::step: action must be 2-D");
    const double ax = std::clamp(a[0], -1.0, 1.0);
    const double ay = std::clamp(a[1], -1.0, 1.0);
    left[static_cast<std::size_t>(i)] = particle::integrate(
        state_.pos[static_cast<std::size_t>(2 * i)],
        state_.pos[static_cast<std::size_t>(2 * i + 1)],
        state_.vel[static_cast<std::size_t>(2 * i)],
        state_.vel[static_cast<std::size_t>(2 * i + 1)], ax, ay,
        particle::kMaxSpeed);
  }

  // Shared term: how well the team covers every goal.
  double goal_term = 0.0;
  for (int j = 0; j < n; ++j) {
    double best = 1e300;
    for (int i = 0; i < n; ++i) {
      const double dx = state_.pos[static_cast<std::size_t>(2 * i)] -
                        state_.goals[static_cast<std::size_t>(2 * j)];
      const double dy = state_.pos[static_cast<std::size_t>(2 * i + 1)] -
                        state_.goals[static_cast<std::size_t>(2 * j + 1)];
      best = std::min(best, dx * dx + dy * dy);
    }
    goal_term -= best;
  }

  for (int i = 0; i < n; ++i) {
    double r = goal_term;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dx = state_.pos[static_cast<std::size_t>(2 * i)] -
                        state_.pos[static_cast<std::size_t>(2 * j)];
      const double dy = state_.pos[static_cast<std::size_t>(2 * i + 1)] -
                        state_.pos[static_cast<std::size_t>(2 * j + 1)];
      if (std::sqrt(dx * dx + dy * dy) < particle::kCollisionRadius) r -= 1.0;
    }
    if (left[static_cast<std::size_t>(i)]) r -= 1.0;
    out.rewards[static_cast<std::size_t>(i)] = std::clamp(r, -1.0, 1.0);
  }

  out.obs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.obs.push_back(observe(i));
  return out;
}

std::vector<double> CoopNavEnv::observe(int agent) const {
  const int n = cfg_.num_agents;
  std::vector<double> o;
  o.reserve(static_cast<std::size_t>(obs_dim()));
  const double px = state_.pos[static_cast<std::size_t>(2 * agent)];
  const double py = state_.pos[static_cast<std::size_t>(2 * agent + 1)];
  o.push_back(px);
  o.push_back(py);
  o.push_back(state_.vel[static_cast<std::size_t>(2 * agent)]);
  o.push_back(state_.vel[static_cast<std::size_t>(2 * agent + 1)]);
  for (int j = 0; j < n; ++j) {
    o.push_back(state_.goals[static_cast<std::size_t>(2 * j)] - px);
    o.push_back(state_.goals[static_cast<std::size_t>(2 * j + 1)] - py);
  }
  for (int j = 0; j < n; ++j) {
    if (j == agent) continue;
    o.push_back(state_.pos[static_cast<std::size_t>(2 * j)] - px);
    o.push_back(state_.pos[static_cast<std::size_t>(2 * j + 1)] - py);
  }
  return o;
}

}  // namespace dimapg
