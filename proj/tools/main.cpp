// Command-line front end. Talks to the trainer exclusively through the C API
// in dimapg.h; the exit code is the dimapg_status of the failing call.
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dimapg.h"

namespace {

int fail(dimapg_status status) {
  std::fprintf(stderr, "error [%s]: %s\n", dimapg_status_name(status),
               dimapg_last_error());
  return static_cast<int>(status);
}

// Splits "key=value" and applies it to the config. A missing '=' is treated
// as an empty value, so the C API reports the offending key by name.
dimapg_status apply_set(dimapg_config* cfg, const std::string& kv) {
  const std::size_t eq = kv.find('=');
  const std::string key = eq == std::string::npos ? kv : kv.substr(0, eq);
  const std::string value = eq == std::string::npos ? "" : kv.substr(eq + 1);
  return dimapg_config_set(cfg, key.c_str(), value.c_str());
}

struct ConfigHandle {
  dimapg_config* ptr = nullptr;
  ~ConfigHandle() { dimapg_config_free(ptr); }
};

dimapg_status load_with_overrides(const std::string& path,
                                  const std::vector<std::string>& sets,
                                  bool seed_given, std::uint64_t seed,
                                  ConfigHandle& out) {
  dimapg_status st = dimapg_config_load(path.c_str(), &out.ptr);
  if (st != DIMAPG_OK) return st;
  for (const std::string& kv : sets) {
    st = apply_set(out.ptr, kv);
    if (st != DIMAPG_OK) return st;
  }
  if (seed_given) {
    st = dimapg_config_set(out.ptr, "seed", std::to_string(seed).c_str());
    if (st != DIMAPG_OK) return st;
  }
  return DIMAPG_OK;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dimapg: distributed multi-agent policy-gradient trainer"};
  app.require_subcommand(1);

  // train
  std::string train_config, train_out;
  std::uint64_t train_seed = 0;
  bool train_seed_given = false;
  int runs = 1;
  std::vector<std::string> train_sets;
  CLI::App* train = app.add_subcommand("train", "Train from a config file");
  train->add_option("--config", train_config, "Config file")->required();
  train->add_option("--out", train_out, "Output directory")->required();
  train->add_option("--seed", train_seed, "Base seed (overrides the config)")
      ->each([&](const std::string&) { train_seed_given = true; });
  train->add_option("--runs", runs, "Independent runs (seed, seed+1, ...)");
  train->add_option("--set", train_sets, "Override config key=value");

  // eval
  std::string eval_checkpoint, eval_config, eval_mode = "central";
  int eval_episodes = 100;
  std::uint64_t eval_seed = 0;
  CLI::App* eval = app.add_subcommand("eval", "Evaluate a checkpoint");
  eval->add_option("--checkpoint", eval_checkpoint, "Checkpoint file")
      ->required();
  eval->add_option("--mode", eval_mode, "central | adapted | finetune");
  eval->add_option("--episodes", eval_episodes, "Evaluation episodes");
  eval->add_option("--seed", eval_seed, "Evaluation seed");
  eval->add_option("--config", eval_config,
                   "Config file (default: resolved_config next to the "
                   "checkpoint)");

  // dump-env
  std::string dump_config, dump_out;
  int dump_steps = 0;
  std::uint64_t dump_seed = 0;
  bool dump_seed_given = false;
  std::vector<std::string> dump_sets;
  CLI::App* dump =
      app.add_subcommand("dump-env", "Dump one seeded episode as CSV");
  dump->add_option("--config", dump_config, "Config file")->required();
  dump->add_option("--steps", dump_steps, "Steps to play (0 = full horizon)");
  dump->add_option("--seed", dump_seed, "Seed (overrides the config)")
      ->each([&](const std::string&) { dump_seed_given = true; });
  dump->add_option("--set", dump_sets, "Override config key=value");
  dump->add_option("--out", dump_out, "Output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  if (train->parsed()) {
    ConfigHandle cfg;
    dimapg_status st = load_with_overrides(train_config, train_sets,
                                           train_seed_given, train_seed, cfg);
    if (st != DIMAPG_OK) return fail(st);
    st = dimapg_train(cfg.ptr, train_out.c_str(), runs);
    if (st != DIMAPG_OK) return fail(st);
    std::printf("trained %d run%s into %s\n", runs, runs == 1 ? "" : "s",
                train_out.c_str());
    return 0;
  }

  if (eval->parsed()) {
    dimapg_eval_summary summary;
    std::string text(4096, '\0');
    const dimapg_status st = dimapg_eval(
        eval_checkpoint.c_str(),
        eval_config.empty() ? nullptr : eval_config.c_str(), eval_mode.c_str(),
        eval_episodes, eval_seed, &summary, text.data(), text.size());
    if (st != DIMAPG_OK) return fail(st);
    std::printf("%s", text.c_str());
    return 0;
  }

  // dump-env
  ConfigHandle cfg;
  dimapg_status st = load_with_overrides(dump_config, dump_sets,
                                         dump_seed_given, dump_seed, cfg);
  if (st != DIMAPG_OK) return fail(st);
  st = dimapg_dump_env(cfg.ptr, dump_steps,
                       dump_out.empty() ? nullptr : dump_out.c_str());
  if (st != DIMAPG_OK) return fail(st);
  return 0;
}
