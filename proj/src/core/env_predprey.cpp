#include "core/env_predprey.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace dimapg {

namespace {

// Push a point to the boundary of any disc it landed inside.
void project_out(double& px, double& py, const std::vector<double>& obstacles,
                 double radius) {
  for (std::size_t o = 0; o + 1 < obstacles.size(); o += 2) {
    const double dx = px - obstacles[o];
    const double dy = py - obstacles[o + 1];
    const double d = std::sqrt(dx * dx + dy * dy);
    if (d >= radius) continue;
    if (d < 1e-12) {
      px = obstacles[o] + radius;  // degenerate center hit: push along +x
      py = obstacles[o + 1];
    } else {
      px = obstacles[o] + dx * radius / d;
      py = obstacles[o + 1] + dy * radius / d;
    }
  }
}

}  // namespace

std::vector<std::vector<double>> PredPreyEnv::reset(RandomStream& rng) {
  const int n = num_agents();
  state_.pos.resize(static_cast<std::size_t>(2 * n));
  state_.vel.assign(static_cast<std::size_t>(2 * n), 0.0);
  state_.obstacles.resize(static_cast<std::size_t>(2 * cfg_.num_obstacles));
  for (double& c : state_.obstacles) c = rng.uniform(-0.6, 0.6);

  for (int i = 0; i < n; ++i) {
    // Spawns may not start inside an obstacle.
    for (int attempt = 0; attempt < 1000; ++attempt) {
      const double x = rng.uniform(-1.0, 1.0);
      const double y = rng.uniform(-1.0, 1.0);
      bool inside = false;
      for (std::size_t o = 0; o + 1 < state_.obstacles.size(); o += 2) {
        const double dx = x - state_.obstacles[o];
        const double dy = y - state_.obstacles[o + 1];
        if (std::sqrt(dx * dx + dy * dy) < cfg_.obstacle_radius) {
          inside = true;
          break;
        }
      }
      if (!inside) {
        state_.pos[static_cast<std::size_t>(2 * i)] = x;
        state_.pos[static_cast<std::size_t>(2 * i + 1)] = y;
        break;
      }
    }
  }

  std::vector<std::vector<double>> obs;
  obs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) obs.push_back(observe(i));
  return obs;
}

void PredPreyEnv::set_state(const State& s) {
  const std::size_t want = static_cast<std::size_t>(2 * num_agents());
  if (s.pos.size() != want || s.vel.size() != want ||
      s.obstacles.size() != static_cast<std::size_t>(2 * cfg_.num_obstacles))
    throw DimensionError("PredPreyEnv::set_state: state size mismatch");
  state_ = s;
}

StepResult PredPreyEnv::step(const std::vector<Action>& joint_action) {
  const int n = num_agents();
  if (static_cast<int>(joint_action.size()) != n)
    throw DimensionError("PredPreyEnv::step: joint action count");

  StepResult out;
  out.rewards.assign(static_cast<std::size_t>(n), 0.0);
  out.active.assign(static_cast<std::size_t>(n), 1);

  for (int i = 0; i < n; ++i) {
    const auto& a = joint_action[static_cast<std::size_t>(i)].continuous;
    if (a.size() != 2)
      throw DimensionError("PredPreyEnv::step: action must be 2-D");
    const double max_speed = population_of(i) == 1
                                 ? particle::kMaxSpeed * cfg_.prey_speed_factor
                                 : particle::kMaxSpeed;
    particle::integrate(state_.pos[static_cast<std::size_t>(2 * i)],
                        state_.pos[static_cast<std::size_t>(2 * i + 1)],
                        state_.vel[static_cast<std::size_t>(2 * i)],
                        state_.vel[static_cast<std::size_t>(2 * i + 1)],
                        std::clamp(a[0], -1.0, 1.0), std::clamp(a[1], -1.0, 1.0),
                        max_speed);
    project_out(state_.pos[static_cast<std::size_t>(2 * i)],
                state_.pos[static_cast<std::size_t>(2 * i + 1)],
                state_.obstacles, cfg_.obstacle_radius);
  }

  for (int i = 0; i < cfg_.num_predators; ++i) {
    for (int j = cfg_.num_predators; j < n; ++j) {
      const double dx = state_.pos[static_cast<std::size_t>(2 * i)] -
                        state_.pos[static_cast<std::size_t>(2 * j)];
      const double dy = state_.pos[static_cast<std::size_t>(2 * i + 1)] -
                        state_.pos[static_cast<std::size_t>(2 * j + 1)];
      if (std::sqrt(dx * dx + dy * dy) >= particle::kCollisionRadius) continue;
      ++out.predator_prey_collisions;
      if (cfg_.team_reward) {
        for (int p = 0; p < cfg_.num_predators; ++p)
          out.rewards[static_cast<std::size_t>(p)] += 1.0;
      } else {
        out.rewards[static_cast<std::size_t>(i)] += 1.0;
      }
      out.rewards[static_cast<std::size_t>(j)] -= 1.0;
    }
  }
  for (double& r : out.rewards) r = std::clamp(r, -1.0, 1.0);

  out.obs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.obs.push_back(observe(i));
  return out;
}

std::vector<double> PredPreyEnv::observe(int agent) const {
  const int n = num_agents();
  std::vector<double> o;
  o.reserve(static_cast<std::size_t>(obs_dim()));
  const double px = state_.pos[static_cast<std::size_t>(2 * agent)];
  const double py = state_.pos[static_cast<std::size_t>(2 * agent + 1)];
  o.push_back(px);
  o.push_back(py);
  o.push_back(state_.vel[static_cast<std::size_t>(2 * agent)]);
  o.push_back(state_.vel[static_cast<std::size_t>(2 * agent + 1)]);
  for (int j = 0; j < n; ++j) {
    if (j == agent) continue;
    o.push_back(state_.pos[static_cast<std::size_t>(2 * j)] - px);
    o.push_back(state_.pos[static_cast<std::size_t>(2 * j + 1)] - py);
    o.push_back(state_.vel[static_cast<std::size_t>(2 * j)] -
                state_.vel[static_cast<std::size_t>(2 * agent)]);
    o.push_back(state_.vel[static_cast<std::size_t>(2 * j + 1)] -
                state_.vel[static_cast<std::size_t>(2 * agent + 1)]);
  }
  for (std::size_t c = 0; c + 1 < state_.obstacles.size(); c += 2) {
    o.push_back(state_.obstacles[c] - px);
    o.push_back(state_.obstacles[c + 1] - py);
  }
  return o;
}

}  // namespace dimapg
