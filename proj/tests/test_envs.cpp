#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "core/env_coopnav.hpp"
#include "core/env_predprey.hpp"
#include "core/env_survival.hpp"
#include "core/rng.hpp"

using namespace dimapg;

namespace {

Action move2(double x, double y) {
  Action a;
  a.continuous = {x, y};
  return a;
}

Action disc(int k) {
  Action a;
  a.discrete = k;
  return a;
}

}  // namespace

// ---------------------------------------------------------------- coopnav

TEST_CASE("coopnav: agent on the goal, stationary -> reward 0") {
  CoopNavEnv env(CoopNavConfig{1, 10});
  RandomStream rng(1);
  env.reset(rng);
  CoopNavEnv::State s;
  s.pos = {0.3, -0.2};
  s.vel = {0.0, 0.0};
  s.goals = {0.3, -0.2};
  env.set_state(s);
  const auto r = env.step({move2(0.0, 0.0)});
  CHECK(r.rewards[0] == 0.0);
}

TEST_CASE("coopnav: co-located agents each take the collision penalty") {
  CoopNavEnv env(CoopNavConfig{2, 10});
  RandomStream rng(2);
  env.reset(rng);
  CoopNavEnv::State s;
  s.pos = {0.1, 0.1, 0.1, 0.1};
  s.vel = {0.0, 0.0, 0.0, 0.0};
  s.goals = {0.1, 0.1, 0.1, 0.1};  // goal term zero: goals on the agents
  env.set_state(s);
  const auto r = env.step({move2(0.0, 0.0), move2(0.0, 0.0)});
  CHECK(r.rewards[0] == -1.0);
  CHECK(r.rewards[1] == -1.0);
}

TEST_CASE("coopnav: boundary exit costs 1 before clipping") {
  CoopNavEnv env(CoopNavConfig{1, 10});
  RandomStream rng(3);
  env.reset(rng);
  CoopNavEnv::State s;
  s.pos = {1.0, 0.0};
  s.vel = {1.0, 0.0};  // will be pushed outside
  s.goals = {1.0, 0.0};
  env.set_state(s);
  const auto r = env.step({move2(1.0, 0.0)});
  CHECK(env.state().pos[0] == 1.0);  // clamped
  // goal term is tiny (agent clamped next to the goal), so the -1 dominates.
  CHECK(r.rewards[0] < -0.9);
}

TEST_CASE("coopnav: physics constants are as pinned") {
  CoopNavEnv env(CoopNavConfig{1, 10});
  RandomStream rng(4);
  env.reset(rng);
  CoopNavEnv::State s;
  s.pos = {0.0, 0.0};
  s.vel = {0.4, 0.0};
  s.goals = {0.0, 0.0};
  env.set_state(s);
  env.step({move2(1.0, 0.0)});
  // v' = 0.75*0.4 + 1.0*0.1 = 0.4 ; p' = 0 + 0.4*0.1 = 0.04
  CHECK(env.state().vel[0] == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(env.state().pos[0] == doctest::Approx(0.04).epsilon(1e-14));
}

TEST_CASE("coopnav: speed capped at 1") {
  CoopNavEnv env(CoopNavConfig{1, 10});
  RandomStream rng(5);
  env.reset(rng);
  CoopNavEnv::State s;
  s.pos = {-0.5, -0.5};
  s.vel = {2.0, 2.0};
  s.goals = {-0.5, -0.5};
  env.set_state(s);
  env.step({move2(1.0, 1.0)});
  const double vx = env.state().vel[0];
  const double vy = env.state().vel[1];
  CHECK(std::sqrt(vx * vx + vy * vy) <= 1.0 + 1e-12);
}

TEST_CASE("coopnav: permutation equivariance over 100 random pairs") {
  const int n = 3;
  RandomStream rng(606);
  for (int it = 0; it < 100; ++it) {
    CoopNavEnv::State s;
    for (int i = 0; i < 2 * n; ++i) {
      s.pos.push_back(rng.uniform(-1.0, 1.0));
      s.vel.push_back(rng.uniform(-0.5, 0.5));
      s.goals.push_back(rng.uniform(-1.0, 1.0));
    }
    std::vector<Action> acts;
    for (int i = 0; i < n; ++i)
      acts.push_back(move2(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)));

    // permutation sigma: i -> perm[i]
    std::vector<int> perm = {1, 2, 0};
    if (it % 2 == 0) perm = {2, 0, 1};

    CoopNavEnv env(CoopNavConfig{n, 10});
    RandomStream r0(1);
    env.reset(r0);
    env.set_state(s);
    const auto base = env.step(acts);

    CoopNavEnv::State ps;
    ps.pos.resize(s.pos.size());
    ps.vel.resize(s.vel.size());
    ps.goals = s.goals;  // goals are not agent-indexed
    std::vector<Action> pacts(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const int j = perm[static_cast<std::size_t>(i)];  // slot i holds old agent j
      ps.pos[static_cast<std::size_t>(2 * i)] = s.pos[static_cast<std::size_t>(2 * j)];
      ps.pos[static_cast<std::size_t>(2 * i + 1)] = s.pos[static_cast<std::size_t>(2 * j + 1)];
      ps.vel[static_cast<std::size_t>(2 * i)] = s.vel[static_cast<std::size_t>(2 * j)];
      ps.vel[static_cast<std::size_t>(2 * i + 1)] = s.vel[static_cast<std::size_t>(2 * j + 1)];
      pacts[static_cast<std::size_t>(i)] = acts[static_cast<std::size_t>(j)];
    }
    CoopNavEnv penv(CoopNavConfig{n, 10});
    penv.reset(r0);
    penv.set_state(ps);
    const auto permd = penv.step(pacts);

    for (int i = 0; i < n; ++i) {
      const int j = perm[static_cast<std::size_t>(i)];
      CHECK(permd.rewards[static_cast<std::size_t>(i)] ==
            base.rewards[static_cast<std::size_t>(j)]);
      CHECK(penv.state().pos[static_cast<std::size_t>(2 * i)] ==
            env.state().pos[static_cast<std::size_t>(2 * j)]);
      CHECK(penv.state().pos[static_cast<std::size_t>(2 * i + 1)] ==
            env.state().pos[static_cast<std::size_t>(2 * j + 1)]);
    }
  }
}

TEST_CASE("coopnav: rewards always within [-1,1]; obs dim as declared") {
  CoopNavEnv env(CoopNavConfig{3, 50});
  CHECK(env.obs_dim() == 14);
  RandomStream rng(7);
  auto obs = env.reset(rng);
  REQUIRE(obs.size() == 3);
  CHECK(obs[0].size() == 14);
  for (int t = 0; t < 200; ++t) {
    std::vector<Action> acts;
    for (int i = 0; i < 3; ++i)
      acts.push_back(move2(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)));
    const auto r = env.step(acts);
    for (double rw : r.rewards) {
      CHECK(rw >= -1.0);
      CHECK(rw <= 1.0);
    }
  }
}

TEST_CASE("coopnav: same seed and actions replay bitwise") {
  auto run = [] {
    CoopNavEnv env(CoopNavConfig{3, 20});
    RandomStream rng(4242);
    auto obs = env.reset(rng);
    std::vector<double> trace;
    RandomStream act_rng(99);
    for (int t = 0; t < 20; ++t) {
      std::vector<Action> acts;
      for (int i = 0; i < 3; ++i)
        acts.push_back(move2(act_rng.uniform(-1.0, 1.0), act_rng.uniform(-1.0, 1.0)));
      const auto r = env.step(acts);
      for (double v : r.rewards) trace.push_back(v);
      for (const auto& o : r.obs) trace.insert(trace.end(), o.begin(), o.end());
    }
    return trace;
  };
  CHECK(run() == run());
}

// --------------------------------------------------------------- predprey

TEST_CASE("predprey: no collision means all rewards are zero") {
  PredPreyEnv env(PredPreyConfig{});
  RandomStream rng(11);
  env.reset(rng);
  PredPreyEnv::State s = env.state();
  s.pos = {-0.9, -0.9, -0.9, 0.9, 0.9, -0.9, 0.9, 0.9};
  s.vel.assign(8, 0.0);
  env.set_state(s);
  const auto r = env.step({move2(0, 0), move2(0, 0), move2(0, 0), move2(0, 0)});
  for (double rw : r.rewards) CHECK(rw == 0.0);
  CHECK(r.predator_prey_collisions == 0);
}

TEST_CASE("predprey: co-located predator and prey exchange +1/-1") {
  PredPreyEnv env(PredPreyConfig{});
  RandomStream rng(12);
  env.reset(rng);
  PredPreyEnv::State s = env.state();
  // predator 0 on the prey; the other predators far away
  s.pos = {0.5, 0.5, -0.9, -0.9, -0.9, 0.9, 0.5, 0.5};
  s.vel.assign(8, 0.0);
  s.obstacles = {-0.5, -0.5, -0.5, 0.5};  // away from the collision site
  env.set_state(s);
  const auto r = env.step({move2(0, 0), move2(0, 0), move2(0, 0), move2(0, 0)});
  CHECK(r.rewards[0] == 1.0);
  CHECK(r.rewards[1] == 0.0);
  CHECK(r.rewards[2] == 0.0);
  CHECK(r.rewards[3] == -1.0);
  CHECK(r.predator_prey_collisions == 1);
}

TEST_CASE("predprey: team reward shares the catch") {
  PredPreyConfig cfg;
  cfg.team_reward = true;
  PredPreyEnv env(cfg);
  RandomStream rng(13);
  env.reset(rng);
  PredPreyEnv::State s = env.state();
  s.pos = {0.5, 0.5, -0.9, -0.9, -0.9, 0.9, 0.5, 0.5};
  s.vel.assign(8, 0.0);
  s.obstacles = {-0.5, -0.5, -0.5, 0.5};
  env.set_state(s);
  const auto r = env.step({move2(0, 0), move2(0, 0), move2(0, 0), move2(0, 0)});
  CHECK(r.rewards[0] == 1.0);
  CHECK(r.rewards[1] == 1.0);
  CHECK(r.rewards[2] == 1.0);
  CHECK(r.rewards[3] == -1.0);
}

TEST_CASE("predprey: prey outruns predators by the configured factor") {
  PredPreyEnv env(PredPreyConfig{});
  RandomStream rng(14);
  env.reset(rng);
  PredPreyEnv::State s = env.state();
  s.pos = {0.0, 0.0, 0.0, 0.5, -0.5, 0.0, 0.0, -0.5};
  s.vel = {9.0, 0.0, 9.0, 0.0, 9.0, 0.0, 9.0, 0.0};
  s.obstacles = {0.9, 0.9, 0.9, -0.9};
  env.set_state(s);
  env.step({move2(1, 0), move2(1, 0), move2(1, 0), move2(1, 0)});
  CHECK(env.state().vel[0] == doctest::Approx(1.0));   // predator cap
  CHECK(env.state().vel[6] == doctest::Approx(1.3));   // prey cap
}

TEST_CASE("predprey: obstacle projection pushes agents out of discs") {
  PredPreyEnv env(PredPreyConfig{});
  RandomStream rng(15);
  env.reset(rng);
  PredPreyEnv::State s = env.state();
  s.pos = {0.05, 0.0, -0.9, -0.9, -0.9, 0.9, 0.9, 0.9};
  s.vel.assign(8, 0.0);
  s.obstacles = {0.0, 0.0, -0.5, -0.5};
  env.set_state(s);
  env.step({move2(0, 0), move2(0, 0), move2(0, 0), move2(0, 0)});
  const double d = std::hypot(env.state().pos[0], env.state().pos[1]);
  CHECK(d >= env.config().obstacle_radius - 1e-12);
}

TEST_CASE("predprey: spawn positions avoid obstacles") {
  PredPreyConfig cfg;
  cfg.num_obstacles = 3;
  PredPreyEnv env(cfg);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    RandomStream rng(seed);
    env.reset(rng);
    const auto& s = env.state();
    for (int i = 0; i < env.num_agents(); ++i)
      for (std::size_t o = 0; o + 1 < s.obstacles.size(); o += 2) {
        const double d = std::hypot(s.pos[static_cast<std::size_t>(2 * i)] - s.obstacles[o],
                                    s.pos[static_cast<std::size_t>(2 * i + 1)] - s.obstacles[o + 1]);
        CHECK(d >= cfg.obstacle_radius);
      }
  }
}

TEST_CASE("predprey: replay with same seed and actions is bitwise identical") {
  auto run = [] {
    PredPreyEnv env(PredPreyConfig{});
    RandomStream rng(888);
    env.reset(rng);
    std::vector<double> trace;
    RandomStream act_rng(3);
    for (int t = 0; t < 25; ++t) {
      std::vector<Action> acts;
      for (int i = 0; i < 4; ++i)
        acts.push_back(move2(act_rng.normal(), act_rng.normal()));
      const auto r = env.step(acts);
      trace.insert(trace.end(), r.rewards.begin(), r.rewards.end());
      for (const auto& o : r.obs) trace.insert(trace.end(), o.begin(), o.end());
    }
    return trace;
  };
  CHECK(run() == run());
}

TEST_CASE("predprey: populations and obs layout") {
  PredPreyEnv env(PredPreyConfig{});
  CHECK(env.num_populations() == 2);
  CHECK(env.population_of(0) == 0);
  CHECK(env.population_of(2) == 0);
  CHECK(env.population_of(3) == 1);
  CHECK(env.obs_dim() == 4 + 4 * 3 + 2 * 2);
  RandomStream rng(16);
  const auto obs = env.reset(rng);
  REQUIRE(obs.size() == 4);
  for (const auto& o : obs) CHECK(o.size() == static_cast<std::size_t>(env.obs_dim()));
}

// --------------------------------------------------------------- survival

namespace {

SurvivalConfig small_cfg(int n, int food, int w = 12, int h = 12) {
  SurvivalConfig c;
  c.width = w;
  c.height = h;
  c.num_agents = n;
  c.food = food;
  c.horizon = 50;
  return c;
}

// A state with every agent parked on a distinct cell and no food.
SurvivalEnv::State blank_state(const SurvivalConfig& cfg,
                               std::vector<std::pair<int, int>> cells) {
  SurvivalEnv::State s;
  s.food.assign(static_cast<std::size_t>(cfg.width * cfg.height), 0);
  s.food_remaining = 0;
  for (auto [x, y] : cells) {
    SurvivalEnv::AgentState a;
    a.x = x;
    a.y = y;
    a.orient = 0;
    a.hp = cfg.hp;
    a.alive = true;
    a.last_action = -1;
    a.last_reward = 0.0;
    s.agents.push_back(a);
  }
  return s;
}

}  // namespace

TEST_CASE("survival: lone agent staying earns the step reward") {
  SurvivalEnv env(small_cfg(1, 0));
  RandomStream rng(21);
  env.reset(rng);
  env.set_state(blank_state(env.config(), {{5, 5}}));
  const auto r = env.step({disc(0)});
  CHECK(r.rewards[0] == doctest::Approx(-0.01).epsilon(1e-14));
}

TEST_CASE("survival: moving onto food nets 4.99") {
  SurvivalEnv env(small_cfg(1, 0));
  RandomStream rng(22);
  env.reset(rng);
  auto s = blank_state(env.config(), {{5, 5}});
  s.food[static_cast<std::size_t>(6 * 12 + 5)] = 1;  // cell (5,6), south
  s.food_remaining = 1;
  env.set_state(s);
  const auto r = env.step({disc(4)});  // move (0,1)
  CHECK(r.rewards[0] == doctest::Approx(4.99).epsilon(1e-14));
  CHECK(r.food_eaten == 1);
  CHECK(env.state().food_remaining == 0);
  CHECK(env.state().agents[0].x == 5);
  CHECK(env.state().agents[0].y == 6);
}

TEST_CASE("survival: two attackers on one target form a group") {
  SurvivalEnv env(small_cfg(3, 0));
  RandomStream rng(23);
  env.reset(rng);
  // target at (5,5); attackers directly west (4,5) and east (6,5)
  env.set_state(blank_state(env.config(), {{4, 5}, {6, 5}, {5, 5}}));
  // attacker 0 attacks (1,0)->action 17; attacker 1 attacks (-1,0)->action 16
  const auto r = env.step({disc(17), disc(16), disc(0)});
  CHECK(r.rewards[0] == doctest::Approx(0.99).epsilon(1e-12));
  CHECK(r.rewards[1] == doctest::Approx(0.99).epsilon(1e-12));
  // target: step cost, two hits kill it at hp=2 -> death reward
  CHECK(r.rewards[2] == doctest::Approx(-1.01).epsilon(1e-12));
  CHECK(r.deaths == 1);
  CHECK_FALSE(env.state().agents[2].alive);
}

TEST_CASE("survival: a lone attack is penalized and wounds the target") {
  SurvivalEnv env(small_cfg(2, 0));
  RandomStream rng(24);
  env.reset(rng);
  env.set_state(blank_state(env.config(), {{4, 5}, {5, 5}}));
  const auto r = env.step({disc(17), disc(0)});  // attack east
  CHECK(r.rewards[0] == doctest::Approx(-0.11).epsilon(1e-12));
  CHECK(r.rewards[1] == doctest::Approx(-0.01).epsilon(1e-12));
  CHECK(env.state().agents[1].hp == 1);
  CHECK(env.state().agents[1].alive);
}

TEST_CASE("survival: attacking an empty cell only costs the step") {
  SurvivalEnv env(small_cfg(1, 0));
  RandomStream rng(25);
  env.reset(rng);
  env.set_state(blank_state(env.config(), {{5, 5}}));
  const auto r = env.step({disc(13)});
  CHECK(r.rewards[0] == doctest::Approx(-0.01).epsilon(1e-14));
}

TEST_CASE("survival: move conflicts resolve by lowest index") {
  SurvivalEnv env(small_cfg(2, 0));
  RandomStream rng(26);
  env.reset(rng);
  env.set_state(blank_state(env.config(), {{4, 5}, {6, 5}}));
  // both try to enter (5,5): 0 moves east (action 3), 1 moves west (action 2)
  env.step({disc(3), disc(2)});
  CHECK(env.state().agents[0].x == 5);
  CHECK(env.state().agents[0].y == 5);
  CHECK(env.state().agents[1].x == 6);  // blocked, stayed
  CHECK(env.state().agents[1].y == 5);
}

TEST_CASE("survival: dead agents are inert and flagged") {
  SurvivalEnv env(small_cfg(3, 0));
  RandomStream rng(27);
  env.reset(rng);
  auto s = blank_state(env.config(), {{4, 5}, {6, 5}, {5, 5}});
  s.agents[2].hp = 1;
  env.set_state(s);
  env.step({disc(17), disc(16), disc(0)});  // kills agent 2 (group attack)
  const auto r = env.step({disc(0), disc(0), disc(5)});
  CHECK(r.ignored_dead_actions == 1);
  CHECK(r.active[0] == 1);
  CHECK(r.active[2] == 0);
  CHECK(r.rewards[2] == 0.0);
  for (double v : r.obs[2]) CHECK(v == 0.0);
  // the dead agent's cell is free to enter now
  env.step({disc(3), disc(0), disc(0)});
  CHECK(env.state().agents[0].x == 5);
}

TEST_CASE("survival: observation layout") {
  SurvivalEnv env(small_cfg(2, 0));
  CHECK(env.obs_dim() == 103);
  RandomStream rng(28);
  env.reset(rng);
  env.set_state(blank_state(env.config(), {{5, 5}, {9, 9}}));
  const auto o = env.build_observation(0);
  REQUIRE(o.size() == 103);
  // empty surroundings: all three channels zero everywhere in view
  for (int i = 0; i < 75; ++i) CHECK(o[static_cast<std::size_t>(i)] == 0.0);
  CHECK(o[75] == 0.0);            // id 0
  CHECK(o[76 + 23] == 1.0);       // one-hot "no action yet"
  CHECK(o[100] == 0.0);           // last reward
  CHECK(o[101] == doctest::Approx(5.0 / 12.0));
  CHECK(o[102] == doctest::Approx(5.0 / 12.0));

  const auto o1 = env.build_observation(1);
  CHECK(o1[75] == doctest::Approx(0.5));  // id 1 of 2
}

TEST_CASE("survival: neighbors and walls appear in the local view") {
  SurvivalEnv env(small_cfg(2, 0));
  RandomStream rng(29);
  env.reset(rng);
  auto s = blank_state(env.config(), {{0, 0}, {1, 0}});
  s.food[static_cast<std::size_t>(1 * 12 + 0)] = 1;  // food at (0,1)
  s.food_remaining = 1;
  env.set_state(s);
  const auto o = env.build_observation(0);
  // Facing north at the corner: rows 0-1 (ahead) and cols 0-1 (west) are wall.
  auto at = [&](int row, int col, int ch) {
    return o[static_cast<std::size_t>((row * 5 + col) * 3 + ch)];
  };
  CHECK(at(0, 2, 2) == 1.0);  // two cells ahead: outside
  CHECK(at(2, 1, 2) == 1.0);  // one cell west: outside
  CHECK(at(2, 2, 0) == 0.0);  // own cell not marked as agent
  CHECK(at(2, 3, 0) == 1.0);  // neighbor east at (1,0)
  CHECK(at(3, 2, 1) == 1.0);  // food south at (0,1)
  CHECK(at(3, 2, 2) == 0.0);
}

TEST_CASE("survival: rotated world and heading leave the view unchanged") {
  const int W = 12;
  RandomStream rng(3030);
  for (int it = 0; it < 40; ++it) {
    SurvivalEnv env(small_cfg(4, 0, W, W));
    SurvivalEnv env_rot(small_cfg(4, 0, W, W));
    RandomStream r0(1);
    env.reset(r0);
    RandomStream r1(1);
    env_rot.reset(r1);

    // random state on distinct cells
    std::set<std::pair<int, int>> used;
    std::vector<std::pair<int, int>> cells;
    while (cells.size() < 4) {
      const int x = rng.uniform_int(W);
      const int y = rng.uniform_int(W);
      if (used.insert({x, y}).second) cells.push_back({x, y});
    }
    auto s = blank_state(env.config(), cells);
    for (auto& a : s.agents) a.orient = rng.uniform_int(4);
    for (int f = 0; f < 10; ++f) {
      const int x = rng.uniform_int(W);
      const int y = rng.uniform_int(W);
      if (!used.count({x, y}) && !s.food[static_cast<std::size_t>(y * W + x)]) {
        s.food[static_cast<std::size_t>(y * W + x)] = 1;
        ++s.food_remaining;
      }
    }
    env.set_state(s);

    // rotate 90 degrees clockwise: (x, y) -> (W-1-y, x); heading advances N->E
    SurvivalEnv::State rs = s;
    for (std::size_t i = 0; i < s.agents.size(); ++i) {
      rs.agents[i].x = W - 1 - s.agents[i].y;
      rs.agents[i].y = s.agents[i].x;
      rs.agents[i].orient = (s.agents[i].orient + 1) % 4;
    }
    rs.food.assign(s.food.size(), 0);
    for (int y = 0; y < W; ++y)
      for (int x = 0; x < W; ++x)
        if (s.food[static_cast<std::size_t>(y * W + x)])
          rs.food[static_cast<std::size_t>(x * W + (W - 1 - y))] = 1;
    env_rot.set_state(rs);

    for (int i = 0; i < 4; ++i) {
      const auto a = env.build_observation(i);
      const auto b = env_rot.build_observation(i);
      for (int k = 0; k < 75; ++k)
        CHECK(a[static_cast<std::size_t>(k)] == b[static_cast<std::size_t>(k)]);
    }
  }
}

TEST_CASE("survival: conservation and occupancy over 1000 random steps") {
  SurvivalConfig cfg = small_cfg(8, 20);
  SurvivalEnv env(cfg);
  RandomStream rng(505);
  env.reset(rng);

  int eaten_total = 0;
  int prev_remaining = env.state().food_remaining;
  CHECK(prev_remaining == 20);
  for (int t = 0; t < 1000; ++t) {
    std::vector<Action> acts;
    for (int i = 0; i < cfg.num_agents; ++i)
      acts.push_back(disc(rng.uniform_int(SurvivalEnv::kNumActions)));
    const auto r = env.step(acts);
    eaten_total += r.food_eaten;

    // conservation
    CHECK(eaten_total + env.state().food_remaining == 20);
    CHECK(env.state().food_remaining <= prev_remaining);
    prev_remaining = env.state().food_remaining;
    int grid_food = 0;
    for (auto f : env.state().food) grid_food += f;
    CHECK(grid_food == env.state().food_remaining);

    // single occupancy among the living
    std::set<std::pair<int, int>> occ;
    for (const auto& a : env.state().agents) {
      if (!a.alive) continue;
      CHECK(occ.insert({a.x, a.y}).second);
    }
    if (r.done) {
      RandomStream rr(static_cast<std::uint64_t>(t));
      env.reset(rr);
      eaten_total = 0;
      prev_remaining = env.state().food_remaining;
    }
  }
}

TEST_CASE("survival: reset places the configured food block off the agents") {
  SurvivalEnv env(small_cfg(6, 25));
  RandomStream rng(31);
  env.reset(rng);
  int count = 0;
  for (auto f : env.state().food) count += f;
  CHECK(count == 25);
  CHECK(env.state().food_remaining == 25);
  for (const auto& a : env.state().agents) {
    CHECK(a.alive);
    CHECK(a.hp == 2);
    CHECK_FALSE(env.state().food[static_cast<std::size_t>(a.y * 12 + a.x)]);
  }
}

TEST_CASE("survival: out-of-range actions are rejected") {
  SurvivalEnv env(small_cfg(1, 0));
  RandomStream rng(32);
  env.reset(rng);
  CHECK_THROWS(env.step({disc(23)}));
  CHECK_THROWS(env.step({disc(-1)}));
}

TEST_CASE("survival: turning rotates the view, not the world") {
  SurvivalEnv env(small_cfg(2, 0));
  RandomStream rng(33);
  env.reset(rng);
  env.set_state(blank_state(env.config(), {{5, 5}, {5, 4}}));  // neighbor north
  auto o = env.build_observation(0);
  auto at = [&](const std::vector<double>& v, int row, int col, int ch) {
    return v[static_cast<std::size_t>((row * 5 + col) * 3 + ch)];
  };
  CHECK(at(o, 1, 2, 0) == 1.0);  // ahead when facing north
  env.step({disc(22), disc(0)}); // turn right -> facing east
  CHECK(env.state().agents[0].orient == 1);
  CHECK(env.state().agents[0].x == 5);
  o = env.build_observation(0);
  CHECK(at(o, 2, 1, 0) == 1.0);  // the same neighbor is now to the left
}
