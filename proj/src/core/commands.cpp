#include "core/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "core/checkpoint.hpp"
#include "core/error.hpp"
#include "core/metrics.hpp"
#include "core/rollout.hpp"
#include "core/text.hpp"

namespace dimapg {

namespace {

namespace fs = std::filesystem;

void make_dirs(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string periodic_checkpoint_name(int completed) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "checkpoint_%06d.dmpg", completed);
  return buf;
}

Checkpoint snapshot(const Trainer& trainer, int completed,
                    std::uint64_t seed) {
  Checkpoint ckpt;
  ckpt.iteration = completed;
  ckpt.seed = seed;
  for (int p = 0; p < trainer.populations(); ++p) {
    const PolicySpec& spec = trainer.policy(p).spec();
    CheckpointPolicy cp;
    cp.head = spec.head;
    cp.action_dim = spec.action_dim;
    cp.net = spec.net;
    cp.params = trainer.central(p);
    ckpt.policies.push_back(std::move(cp));
  }
  return ckpt;
}

}  // namespace

std::vector<std::string> cmd_train(const RunConfig& cfg,
                                   const std::string& out_dir, int runs) {
  if (runs < 1) throw ConfigError("train: runs must be >= 1");
  cfg.train.validate();

  std::vector<std::string> run_dirs;
  std::vector<std::vector<IterationRecord>> all_records;
  for (int r = 0; r < runs; ++r) {
    RunConfig rc = cfg;
    rc.train.seed = cfg.train.seed + static_cast<std::uint64_t>(r);
    const std::string dir =
        runs == 1 ? out_dir : out_dir + "/run" + std::to_string(r);
    make_dirs(dir);
    write_file(dir + "/resolved_config", render_config(rc));

    std::unique_ptr<MultiAgentEnv> env = make_environment(rc);
    Trainer trainer(*env, make_policy_specs(rc, *env), rc.train);
    MetricsWriter metrics(dir + "/metrics.csv");

    std::vector<IterationRecord> records;
    trainer.train([&](const IterationRecord& rec) {
      metrics.write(rec);
      records.push_back(rec);
      const int completed = rec.iteration + 1;
      if (completed % rc.checkpoint_every == 0 &&
          completed != rc.train.iterations)
        save_checkpoint(snapshot(trainer, completed, rc.train.seed),
                        dir + "/" + periodic_checkpoint_name(completed));
    });
    save_checkpoint(snapshot(trainer, rc.train.iterations, rc.train.seed),
                    dir + "/checkpoint.dmpg");
    all_records.push_back(std::move(records));
    run_dirs.push_back(dir);
  }

  if (runs > 1) {
    std::ofstream mean(out_dir + "/mean_metrics.csv", std::ios::trunc);
    if (!mean) throw IoError("cannot open mean_metrics.csv for writing");
    mean << metrics_header() << '\n';
    const std::size_t iters = all_records[0].size();
    for (std::size_t it = 0; it < iters; ++it) {
      IterationRecord avg = all_records[0][it];
      double episodes = 0.0;
      avg.mean_return = avg.min_agent_return = avg.loss_pre = avg.loss_post =
          avg.grad_norm = avg.wallclock_s = 0.0;
      for (const auto& records : all_records) {
        const IterationRecord& rec = records[it];
        episodes += static_cast<double>(rec.episodes);
        avg.mean_return += rec.mean_return;
        avg.min_agent_return += rec.min_agent_return;
        avg.loss_pre += rec.loss_pre;
        avg.loss_post += rec.loss_post;
        avg.grad_norm += rec.grad_norm;
        avg.wallclock_s += rec.wallclock_s;
      }
      const double inv = 1.0 / static_cast<double>(runs);
      // episodes may average to a fraction; keep the row numeric anyway.
      mean << avg.iteration << ',' << format_double(episodes * inv) << ','
           << format_double(avg.mean_return * inv) << ','
           << format_double(avg.min_agent_return * inv) << ','
           << format_double(avg.loss_pre * inv) << ','
           << format_double(avg.loss_post * inv) << ','
           << format_double(avg.grad_norm * inv) << ','
           << format_double(deterministic_mode() ? 0.0
                                                 : avg.wallclock_s * inv)
           << '\n';
    }
    if (!mean) throw IoError("failed writing mean_metrics.csv");
  }
  return run_dirs;
}

EvalOutput cmd_eval(const std::string& checkpoint_path,
                    const std::string& config_path, EvalMode mode,
                    int episodes, std::uint64_t seed) {
  const Checkpoint ckpt = load_checkpoint(checkpoint_path);

  std::string cfg_path = config_path;
  if (cfg_path.empty()) {
    const fs::path sibling =
        fs::path(checkpoint_path).parent_path() / "resolved_config";
    std::error_code ec;
    if (!fs::exists(sibling, ec))
      throw ConfigError(
          "eval: no --config given and no resolved_config next to the "
          "checkpoint");
    cfg_path = sibling.string();
  }
  const RunConfig cfg = parse_config(read_file(cfg_path));

  std::unique_ptr<MultiAgentEnv> env = make_environment(cfg);
  if (static_cast<int>(ckpt.policies.size()) != env->num_populations())
    throw DimensionError("eval: checkpoint has " +
                         std::to_string(ckpt.policies.size()) +
                         " populations but the environment needs " +
                         std::to_string(env->num_populations()));

  // The checkpoint's stored shapes are authoritative for the network; the
  // environment only has to agree on observation and action interfaces.
  std::vector<MlpPolicy> policies;
  std::vector<ParamVector> central;
  for (int p = 0; p < env->num_populations(); ++p) {
    const CheckpointPolicy& cp = ckpt.policies[static_cast<std::size_t>(p)];
    const ActionSpec as = env->action_spec(p);
    if (cp.net.input_dim != env->obs_dim())
      throw DimensionError("eval: checkpoint expects obs dim " +
                           std::to_string(cp.net.input_dim) +
                           " but the environment produces " +
                           std::to_string(env->obs_dim()));
    if (cp.head != as.head || cp.action_dim != as.dim)
      throw DimensionError(
          "eval: checkpoint action head/dim does not match the environment");
    PolicySpec spec;
    spec.net = cp.net;
    spec.head = cp.head;
    spec.action_dim = cp.action_dim;
    spec.initial_log_std = cfg.initial_log_std;
    policies.emplace_back(std::move(spec));
    central.push_back(cp.params);
  }

  EvalOutput out;
  out.result =
      evaluate(*env, policies, central, mode, cfg.train, episodes, seed);

  const EvalResult& res = out.result;
  std::string csv =
      "mode,episodes,mean_return,min_agent_return,mean_collisions,"
      "mean_food_eaten,mean_deaths\n";
  csv += eval_mode_name(mode);
  csv += ',';
  csv += std::to_string(episodes);
  csv += ',';
  csv += format_double(res.mean_return);
  csv += ',';
  csv += format_double(res.min_agent_return);
  csv += ',';
  csv += format_double(res.mean_collisions);
  csv += ',';
  csv += format_double(res.mean_food_eaten);
  csv += ',';
  csv += format_double(res.mean_deaths);
  csv += '\n';
  out.csv = std::move(csv);

  std::string summary = "eval[";
  summary += eval_mode_name(mode);
  summary += "] over " + std::to_string(episodes) + " episodes: mean return " +
             format_double(res.mean_return) + ", min-agent return " +
             format_double(res.min_agent_return) + ", collisions " +
             format_double(res.mean_collisions) + ", food eaten " +
             format_double(res.mean_food_eaten) + ", deaths " +
             format_double(res.mean_deaths);
  out.summary = std::move(summary);
  return out;
}

std::string cmd_dump_env(const RunConfig& cfg, int steps) {
  RunConfig rc = cfg;
  if (steps > 0) rc.train.horizon = steps;
  rc.train.validate();

  std::unique_ptr<MultiAgentEnv> env = make_environment(rc);
  Trainer trainer(*env, make_policy_specs(rc, *env), rc.train);

  std::vector<const Policy*> policies;
  std::vector<const ParamVector*> params;
  for (int i = 0; i < env->num_agents(); ++i) {
    const int p = env->population_of(i);
    policies.push_back(&trainer.policy(p));
    params.push_back(&trainer.central(p));
  }
  RandomStream rng(derive_seed(rc.train.seed, {77}));
  const Trajectory tr =
      rollout_joint(*env, policies, params, rc.train.horizon, rng);

  std::string out = "step,agent,active,reward,action,obs\n";
  auto join = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ';';
      s += format_double(v[i]);
    }
    return s;
  };
  for (int t = 0; t < tr.length(); ++t) {
    const auto ts = static_cast<std::size_t>(t);
    for (int i = 0; i < tr.num_agents(); ++i) {
      const auto is = static_cast<std::size_t>(i);
      out += std::to_string(t);
      out += ',';
      out += std::to_string(i);
      out += ',';
      out += tr.active[ts][is] ? '1' : '0';
      out += ',';
      out += format_double(tr.rewards[ts][is]);
      out += ',';
      const Action& a = tr.actions[ts][is];
      out += a.continuous.empty() ? std::to_string(a.discrete)
                                  : join(a.continuous);
      out += ',';
      out += join(tr.obs[ts][is]);
      out += '\n';
    }
  }
  return out;
}

}  // namespace dimapg
