#include "core/env_survival.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace dimapg {

// Stay, then the L1<=2 diamond ordered by (distance, y, x).
const int SurvivalEnv::kMoveDelta[13][2] = {
    {0, 0},
    {0, -1}, {-1, 0}, {1, 0}, {0, 1},
    {0, -2}, {-1, -1}, {1, -1}, {-2, 0}, {2, 0}, {-1, 1}, {1, 1}, {0, 2},
};

// Moore neighborhood ordered by (y, x).
const int SurvivalEnv::kAttackDelta[8][2] = {
    {-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1},
};

namespace {

// Heading vectors, orient 0..3 = N E S W (screen coordinates, y grows down).
constexpr int kForward[4][2] = {{0, -1}, {1, 0}, {0, 1}, {-1, 0}};

constexpr double kStepReward = -0.01;
constexpr double kLoneAttackPenalty = -0.1;
constexpr double kGroupAttackReward = 1.0;
constexpr double kDeathReward = -1.0;
constexpr double kFoodReward = 5.0;

}  // namespace

SurvivalEnv::SurvivalEnv(SurvivalConfig cfg) : cfg_(cfg) {
  if (cfg_.width < 5 || cfg_.height < 5)
    throw ConfigError("survival: grid must be at least 5x5");
  if (cfg_.num_agents < 1) throw ConfigError("survival: need at least 1 agent");
  const int side =
      static_cast<int>(std::ceil(std::sqrt(static_cast<double>(cfg_.food))));
  if (cfg_.food < 0 || side > std::min(cfg_.width, cfg_.height))
    throw ConfigError("survival: food block does not fit the grid");
  if (cfg_.num_agents + cfg_.food > cfg_.width * cfg_.height)
    throw ConfigError("survival: too many agents and food cells");
  if (cfg_.hp < 1) throw ConfigError("survival: hp must be positive");
}

std::vector<std::vector<double>> SurvivalEnv::reset(RandomStream& rng) {
  state_.food.assign(static_cast<std::size_t>(cfg_.width * cfg_.height), 0);
  state_.food_remaining = cfg_.food;

  // Centered food block, filled row-major.
  const int side =
      static_cast<int>(std::ceil(std::sqrt(static_cast<double>(cfg_.food))));
  const int x0 = (cfg_.width - side) / 2;
  const int y0 = (cfg_.height - side) / 2;
  int placed = 0;
  for (int y = y0; y < y0 + side && placed < cfg_.food; ++y)
    for (int x = x0; x < x0 + side && placed < cfg_.food; ++x) {
      state_.food[static_cast<std::size_t>(cell(x, y))] = 1;
      ++placed;
    }

  state_.agents.assign(static_cast<std::size_t>(cfg_.num_agents), AgentState{});
  std::vector<std::uint8_t> taken(static_cast<std::size_t>(cfg_.width * cfg_.height), 0);
  for (int i = 0; i < cfg_.num_agents; ++i) {
    AgentState& a = state_.agents[static_cast<std::size_t>(i)];
    while (true) {
      const int x = rng.uniform_int(cfg_.width);
      const int y = rng.uniform_int(cfg_.height);
      const int c = cell(x, y);
      if (taken[static_cast<std::size_t>(c)] || state_.food[static_cast<std::size_t>(c)])
        continue;
      taken[static_cast<std::size_t>(c)] = 1;
      a.x = x;
      a.y = y;
      break;
    }
    a.orient = 0;
    a.hp = cfg_.hp;
    a.alive = true;
    a.last_action = -1;
    a.last_reward = 0.0;
  }
  rebuild_occupancy();

  std::vector<std::vector<double>> obs;
  obs.reserve(static_cast<std::size_t>(cfg_.num_agents));
  for (int i = 0; i < cfg_.num_agents; ++i) obs.push_back(build_observation(i));
  return obs;
}

void SurvivalEnv::set_state(const State& s) {
  if (static_cast<int>(s.agents.size()) != cfg_.num_agents ||
      static_cast<int>(s.food.size()) != cfg_.width * cfg_.height)
    throw DimensionError("SurvivalEnv::set_state: state size mismatch");
  state_ = s;
  rebuild_occupancy();
}

void SurvivalEnv::rebuild_occupancy() {
  occupant_.assign(static_cast<std::size_t>(cfg_.width * cfg_.height), -1);
  for (int i = 0; i < cfg_.num_agents; ++i) {
    const AgentState& a = state_.agents[static_cast<std::size_t>(i)];
    if (a.alive) occupant_[static_cast<std::size_t>(cell(a.x, a.y))] = i;
  }
}

int SurvivalEnv::living_agents() const {
  int n = 0;
  for (const auto& a : state_.agents) n += a.alive ? 1 : 0;
  return n;
}

StepResult SurvivalEnv::step(const std::vector<Action>& joint_action) {
  const int n = cfg_.num_agents;
  if (static_cast<int>(joint_action.size()) != n)
    throw DimensionError("SurvivalEnv::step: joint action count");

  StepResult out;
  out.rewards.assign(static_cast<std::size_t>(n), 0.0);
  out.active.assign(static_cast<std::size_t>(n), 0);

  std::vector<int> act(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int a = joint_action[static_cast<std::size_t>(i)].discrete;
    if (a < 0 || a >= kNumActions)
      throw DimensionError("SurvivalEnv::step: action out of range");
    act[static_cast<std::size_t>(i)] = a;
    if (!state_.agents[static_cast<std::size_t>(i)].alive)
      ++out.ignored_dead_actions;
  }

  for (int i = 0; i < n; ++i) {
    if (state_.agents[static_cast<std::size_t>(i)].alive) {
      out.active[static_cast<std::size_t>(i)] = 1;
      out.rewards[static_cast<std::size_t>(i)] += kStepReward;
    }
  }

  // Phase 1: turns.
  for (int i = 0; i < n; ++i) {
    AgentState& a = state_.agents[static_cast<std::size_t>(i)];
    if (!a.alive) continue;
    if (act[static_cast<std::size_t>(i)] == 21) a.orient = (a.orient + 3) % 4;
    if (act[static_cast<std::size_t>(i)] == 22) a.orient = (a.orient + 1) % 4;
  }

  // Phase 2: simultaneous attacks against current positions.
  std::vector<int> hits(static_cast<std::size_t>(n), 0);
  std::vector<std::pair<int, int>> strikes;  // (attacker, target)
  for (int i = 0; i < n; ++i) {
    const AgentState& a = state_.agents[static_cast<std::size_t>(i)];
    const int ai = act[static_cast<std::size_t>(i)];
    if (!a.alive || ai < 13 || ai >= 21) continue;
    const int tx = a.x + kAttackDelta[ai - 13][0];
    const int ty = a.y + kAttackDelta[ai - 13][1];
    if (!in_grid(tx, ty)) continue;
    const int target = occupant_[static_cast<std::size_t>(cell(tx, ty))];
    if (target < 0) continue;
    ++hits[static_cast<std::size_t>(target)];
    strikes.emplace_back(i, target);
  }
  for (const auto& [attacker, target] : strikes) {
    out.rewards[static_cast<std::size_t>(attacker)] +=
        hits[static_cast<std::size_t>(target)] >= 2 ? kGroupAttackReward
                                                    : kLoneAttackPenalty;
  }
  for (int i = 0; i < n; ++i) {
    if (hits[static_cast<std::size_t>(i)] == 0) continue;
    AgentState& a = state_.agents[static_cast<std::size_t>(i)];
    a.hp -= hits[static_cast<std::size_t>(i)];
    if (a.alive && a.hp <= 0) {
      a.alive = false;
      out.rewards[static_cast<std::size_t>(i)] += kDeathReward;
      ++out.deaths;
      occupant_[static_cast<std::size_t>(cell(a.x, a.y))] = -1;
    }
  }

  // Phase 3: moves, agent-index order; blocked movers stay put.
  for (int i = 0; i < n; ++i) {
    AgentState& a = state_.agents[static_cast<std::size_t>(i)];
    const int ai = act[static_cast<std::size_t>(i)];
    if (!a.alive || ai >= 13 || ai == 0) continue;
    const int tx = a.x + kMoveDelta[ai][0];
    const int ty = a.y + kMoveDelta[ai][1];
    if (!in_grid(tx, ty)) continue;
    const int tc = cell(tx, ty);
    if (occupant_[static_cast<std::size_t>(tc)] >= 0) continue;
    occupant_[static_cast<std::size_t>(cell(a.x, a.y))] = -1;
    occupant_[static_cast<std::size_t>(tc)] = i;
    a.x = tx;
    a.y = ty;
    if (state_.food[static_cast<std::size_t>(tc)]) {
      state_.food[static_cast<std::size_t>(tc)] = 0;
      --state_.food_remaining;
      out.rewards[static_cast<std::size_t>(i)] += kFoodReward;
      ++out.food_eaten;
    }
  }

  for (int i = 0; i < n; ++i) {
    AgentState& a = state_.agents[static_cast<std::size_t>(i)];
    if (!out.active[static_cast<std::size_t>(i)]) continue;
    a.last_action = act[static_cast<std::size_t>(i)];
    a.last_reward = out.rewards[static_cast<std::size_t>(i)];
  }

  out.done = living_agents() == 0;
  out.obs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (state_.agents[static_cast<std::size_t>(i)].alive)
      out.obs.push_back(build_observation(i));
    else
      out.obs.emplace_back(static_cast<std::size_t>(obs_dim()), 0.0);
  }
  return out;
}

std::vector<double> SurvivalEnv::build_observation(int agent) const {
  const AgentState& a = state_.agents[static_cast<std::size_t>(agent)];
  std::vector<double> o(static_cast<std::size_t>(obs_dim()), 0.0);

  // Rotated local view. Row 0 is furthest ahead; (u, v) = (right, forward).
  const int fx = kForward[a.orient][0];
  const int fy = kForward[a.orient][1];
  const int rx = -fy;  // right = forward rotated 90 degrees clockwise
  const int ry = fx;
  const int half = kView / 2;
  for (int row = 0; row < kView; ++row) {
    for (int col = 0; col < kView; ++col) {
      const int v = half - row;
      const int u = col - half;
      const int wx = a.x + u * rx + v * fx;
      const int wy = a.y + u * ry + v * fy;
      const std::size_t base = static_cast<std::size_t>((row * kView + col) * 3);
      if (!in_grid(wx, wy)) {
        o[base + 2] = 1.0;  // wall
        continue;
      }
      const int occ = occupant_[static_cast<std::size_t>(cell(wx, wy))];
      if (occ >= 0 && occ != agent) o[base] = 1.0;
      if (state_.food[static_cast<std::size_t>(cell(wx, wy))]) o[base + 1] = 1.0;
    }
  }

  std::size_t k = static_cast<std::size_t>(kView * kView * 3);
  o[k++] = static_cast<double>(agent) / cfg_.num_agents;
  const int onehot = a.last_action < 0 ? kNumActions : a.last_action;
  o[k + static_cast<std::size_t>(onehot)] = 1.0;
  k += kNumActions + 1;
  o[k++] = a.last_reward;
  o[k++] = static_cast<double>(a.x) / cfg_.width;
  o[k++] = static_cast<double>(a.y) / cfg_.height;
  return o;
}

}  // namespace dimapg
