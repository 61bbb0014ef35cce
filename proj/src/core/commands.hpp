#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/eval.hpp"

namespace dimapg {

// Trains `runs` independent runs of the given config under out_dir. A single
// run writes directly into out_dir; multiple runs write into out_dir/run{r}
// (run r uses seed cfg.train.seed + r) plus an out_dir/mean_metrics.csv with
// per-iteration column means. Each run directory receives resolved_config,
// metrics.csv, periodic checkpoint_NNNNNN.dmpg files and a final
// checkpoint.dmpg.
// Returns the run directories in order.
std::vector<std::string> cmd_train(const RunConfig& cfg,
                                   const std::string& out_dir, int runs);

struct EvalOutput {
  EvalResult result;
  std::string csv;      // header + one row
  std::string summary;  // one human-readable line
};

// Evaluates a checkpoint. If config_path is empty, the resolved_config next
// to the checkpoint is used. Network shapes come from the checkpoint itself
// and are validated against the environment the config describes.
EvalOutput cmd_eval(const std::string& checkpoint_path,
                    const std::string& config_path, EvalMode mode,
                    int episodes, std::uint64_t seed);

// Plays one seeded episode with freshly initialized policies and returns it
// as CSV (step,agent,active,reward,action,obs); composite fields are
// semicolon-joined. steps <= 0 means the config's horizon.
std::string cmd_dump_env(const RunConfig& cfg, int steps);

}  // namespace dimapg
