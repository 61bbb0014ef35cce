#include "core/config.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "core/env_coopnav.hpp"
#include "core/env_predprey.hpp"
#include "core/env_survival.hpp"
#include "core/error.hpp"
#include "core/text.hpp"

namespace dimapg {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const char* want,
                            const std::string& got) {
  throw ConfigError("key '" + key + "': expected " + want + ", got '" + got +
                    "'");
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) bad_value(key, "a number", v);
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  int out = 0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) bad_value(key, "an integer", v);
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end)
    bad_value(key, "an unsigned integer", v);
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad_value(key, "true or false", v);
}

Activation to_activation(const std::string& key, const std::string& v) {
  if (v == "relu") return Activation::relu;
  if (v == "tanh") return Activation::tanh;
  bad_value(key, "relu or tanh", v);
}

std::vector<int> to_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  if (trim(v).empty()) return out;  // no hidden layers
  std::size_t start = 0;
  while (start <= v.size()) {
    const std::size_t comma = v.find(',', start);
    const std::string tok =
        trim(comma == std::string::npos ? v.substr(start)
                                        : v.substr(start, comma - start));
    if (tok.empty()) bad_value(key, "a comma-separated integer list", v);
    out.push_back(to_int(key, tok));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string fmt_double(double v) { return format_double(v); }

const char* fmt_bool(bool v) { return v ? "true" : "false"; }

std::string fmt_int_list(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

void apply_key(RunConfig& cfg, const std::string& key,
               const std::string& value) {
  TrainConfig& t = cfg.train;
  if (key == "env") {
    if (value != "coopnav" && value != "predprey" && value != "survival")
      bad_value(key, "coopnav, predprey or survival", value);
    cfg.env = value;
  } else if (key == "alpha1") {
    t.alpha1 = to_double(key, value);
  } else if (key == "alpha2") {
    t.alpha2 = to_double(key, value);
  } else if (key == "epsilon") {
    t.epsilon = to_double(key, value);
  } else if (key == "k") {
    t.k = to_int(key, value);
  } else if (key == "N") {
    t.sample_agents = to_int(key, value);
  } else if (key == "n_traj") {
    t.n_traj = to_int(key, value);
  } else if (key == "T") {
    t.horizon = to_int(key, value);
  } else if (key == "gamma") {
    t.gamma = to_double(key, value);
  } else if (key == "iterations") {
    t.iterations = to_int(key, value);
  } else if (key == "seed") {
    t.seed = to_u64(key, value);
  } else if (key == "first_order") {
    t.first_order = to_bool(key, value);
  } else if (key == "populations") {
    t.populations = to_int(key, value);
  } else if (key == "use_baseline") {
    t.use_baseline = to_bool(key, value);
  } else if (key == "trajectory_level_returns") {
    t.trajectory_level_returns = to_bool(key, value);
  } else if (key == "score_all_agents") {
    t.score_all_agents = to_bool(key, value);
  } else if (key == "average_agents") {
    t.average_agents = to_bool(key, value);
  } else if (key == "fresh_pre_trajectories") {
    t.fresh_pre_trajectories = to_bool(key, value);
  } else if (key == "single_agent") {
    t.single_agent = to_bool(key, value);
  } else if (key == "hidden") {
    cfg.hidden = to_int_list(key, value);
  } else if (key == "activation") {
    cfg.activation = to_activation(key, value);
  } else if (key == "initial_log_std") {
    cfg.initial_log_std = to_double(key, value);
  } else if (key == "n_agents") {
    cfg.n_agents = to_int(key, value);
  } else if (key == "num_predators") {
    cfg.num_predators = to_int(key, value);
  } else if (key == "num_prey") {
    cfg.num_prey = to_int(key, value);
  } else if (key == "prey_speed_factor") {
    cfg.prey_speed_factor = to_double(key, value);
  } else if (key == "num_obstacles") {
    cfg.num_obstacles = to_int(key, value);
  } else if (key == "team_reward") {
    cfg.team_reward = to_bool(key, value);
  } else if (key == "grid_width") {
    cfg.grid_width = to_int(key, value);
  } else if (key == "grid_height") {
    cfg.grid_height = to_int(key, value);
  } else if (key == "food") {
    cfg.food = to_int(key, value);
  } else if (key == "hp") {
    cfg.hp = to_int(key, value);
  } else if (key == "eval_episodes") {
    cfg.eval_episodes = to_int(key, value);
  } else if (key == "checkpoint_every") {
    cfg.checkpoint_every = to_int(key, value);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

}  // namespace

RunConfig default_config(const std::string& env_name) {
  RunConfig cfg;
  if (env_name == "coopnav") {
    // struct defaults are the coopnav baseline
  } else if (env_name == "predprey") {
    cfg.train.populations = 2;
  } else if (env_name == "survival") {
    cfg.n_agents = 20;
    cfg.train.sample_agents = 5;  // adapt a subsample of the larger crowd
  } else {
    throw ConfigError("unknown env '" + env_name +
                      "' (expected coopnav, predprey or survival)");
  }
  cfg.env = env_name;
  return cfg;
}

RunConfig parse_config(const std::string& text) {
  struct Assign {
    std::string key, value;
    int line;
  };
  std::vector<Assign> assigns;
  std::string env_name;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const std::size_t hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected `key = value`, got '" + line + "'");
    Assign a{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no};
    if (a.key.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (a.key == "env") env_name = a.value;
    assigns.push_back(std::move(a));
  }

  if (env_name.empty())
    throw ConfigError(
        "config: missing env name (add `env = coopnav|predprey|survival`)");

  RunConfig cfg = default_config(env_name);
  for (const Assign& a : assigns) {
    try {
      apply_key(cfg, a.key, a.value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(a.line) + ": " + e.what());
    }
  }

  cfg.train.validate();
  if (cfg.eval_episodes < 1)
    throw ConfigError("key 'eval_episodes': must be >= 1");
  if (cfg.checkpoint_every < 1)
    throw ConfigError("key 'checkpoint_every': must be >= 1");
  if (!std::isfinite(cfg.initial_log_std))
    throw ConfigError("key 'initial_log_std': must be finite");
  for (int h : cfg.hidden)
    if (h < 1) throw ConfigError("key 'hidden': layer widths must be >= 1");
  return cfg;
}

void apply_override(RunConfig& cfg, const std::string& key,
                    const std::string& value) {
  if (key == "env")
    throw ConfigError(
        "override: env cannot be changed after parsing (set it in the config "
        "file)");
  apply_key(cfg, key, value);
}

std::string render_config(const RunConfig& cfg) {
  const TrainConfig& t = cfg.train;
  std::string out;
  auto put = [&out](const std::string& key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  put("env", cfg.env);
  out += "\n# algorithm\n";
  put("alpha1", fmt_double(t.alpha1));
  put("alpha2", fmt_double(t.alpha2));
  put("epsilon", fmt_double(t.epsilon));
  put("k", std::to_string(t.k));
  put("N", std::to_string(t.sample_agents));
  put("n_traj", std::to_string(t.n_traj));
  put("T", std::to_string(t.horizon));
  put("gamma", fmt_double(t.gamma));
  put("iterations", std::to_string(t.iterations));
  put("seed", std::to_string(t.seed));
  put("first_order", fmt_bool(t.first_order));
  put("populations", std::to_string(t.populations));
  put("use_baseline", fmt_bool(t.use_baseline));
  put("trajectory_level_returns", fmt_bool(t.trajectory_level_returns));
  put("score_all_agents", fmt_bool(t.score_all_agents));
  put("average_agents", fmt_bool(t.average_agents));
  put("fresh_pre_trajectories", fmt_bool(t.fresh_pre_trajectories));
  put("single_agent", fmt_bool(t.single_agent));
  out += "\n# policy\n";
  put("hidden", fmt_int_list(cfg.hidden));
  put("activation", cfg.activation == Activation::relu ? "relu" : "tanh");
  put("initial_log_std", fmt_double(cfg.initial_log_std));
  out += "\n# environment\n";
  put("n_agents", std::to_string(cfg.n_agents));
  put("num_predators", std::to_string(cfg.num_predators));
  put("num_prey", std::to_string(cfg.num_prey));
  put("prey_speed_factor", fmt_double(cfg.prey_speed_factor));
  put("num_obstacles", std::to_string(cfg.num_obstacles));
  put("team_reward", fmt_bool(cfg.team_reward));
  put("grid_width", std::to_string(cfg.grid_width));
  put("grid_height", std::to_string(cfg.grid_height));
  put("food", std::to_string(cfg.food));
  put("hp", std::to_string(cfg.hp));
  out += "\n# harness\n";
  put("eval_episodes", std::to_string(cfg.eval_episodes));
  put("checkpoint_every", std::to_string(cfg.checkpoint_every));
  return out;
}

std::unique_ptr<MultiAgentEnv> make_environment(const RunConfig& cfg) {
  if (cfg.env == "coopnav") {
    CoopNavConfig c;
    c.num_agents = cfg.n_agents;
    c.horizon = cfg.train.horizon;
    return std::make_unique<CoopNavEnv>(c);
  }
  if (cfg.env == "predprey") {
    PredPreyConfig c;
    c.num_predators = cfg.num_predators;
    c.num_prey = cfg.num_prey;
    c.prey_speed_factor = cfg.prey_speed_factor;
    c.num_obstacles = cfg.num_obstacles;
    c.horizon = cfg.train.horizon;
    c.team_reward = cfg.team_reward;
    return std::make_unique<PredPreyEnv>(c);
  }
  if (cfg.env == "survival") {
    SurvivalConfig c;
    c.width = cfg.grid_width;
    c.height = cfg.grid_height;
    c.num_agents = cfg.n_agents;
    c.food = cfg.food;
    c.horizon = cfg.train.horizon;
    c.hp = cfg.hp;
    return std::make_unique<SurvivalEnv>(c);
  }
  throw ConfigError("unknown env '" + cfg.env + "'");
}

std::vector<PolicySpec> make_policy_specs(const RunConfig& cfg,
                                          const MultiAgentEnv& env) {
  std::vector<PolicySpec> specs;
  for (int p = 0; p < env.num_populations(); ++p) {
    const ActionSpec as = env.action_spec(p);
    PolicySpec spec;
    spec.net = MlpSpec{env.obs_dim(), cfg.hidden, as.dim, cfg.activation};
    spec.head = as.head;
    spec.action_dim = as.dim;
    spec.initial_log_std = cfg.initial_log_std;
    specs.push_back(std::move(spec));
  }
  return specs;
}

}  // namespace dimapg
