#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/mlp.hpp"
#include "core/policy.hpp"
#include "core/vec.hpp"

namespace dimapg {

// One population's policy as stored on disk: enough to rebuild the network
// and its parameter vector without the original config file.
struct CheckpointPolicy {
  HeadKind head = HeadKind::categorical;
  int action_dim = 1;
  MlpSpec net;
  ParamVector params;

  bool operator==(const CheckpointPolicy&) const = default;
};

struct Checkpoint {
  int iteration = 0;
  std::uint64_t seed = 0;
  std::vector<CheckpointPolicy> policies;  // one per population

  bool operator==(const Checkpoint&) const = default;
};

// Binary layout (all integers little-endian u32, all parameters f64):
//   "DMPG" | version | num_populations | iteration | seed_lo | seed_hi
//   per policy: head | action_dim | input_dim | activation
//               | num_hidden | hidden[0..H) | param_count
//   then every policy's parameters back-to-back.
std::vector<std::uint8_t> serialize_checkpoint(const Checkpoint& ckpt);
Checkpoint deserialize_checkpoint(const std::vector<std::uint8_t>& bytes);

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

// Exact on-disk size of the layout above; pinned by tests so the format
// cannot drift silently.
std::size_t checkpoint_file_size(const Checkpoint& ckpt);

}  // namespace dimapg
