#include "core/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "core/error.hpp"

namespace dimapg {

namespace {

constexpr char kMagic[4] = {'D', 'M', 'P', 'G'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kMaxHiddenLayers = 1024;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
  const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i)
    out.push_back(static_cast<std::uint8_t>((bits >> (8 * i)) & 0xff));
}

struct Reader {
  const std::vector<std::uint8_t>& data;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (pos + n > data.size()) throw FormatError("checkpoint: truncated");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(data[pos + static_cast<std::size_t>(i)])
           << (8 * i);
    pos += 4;
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i)
      bits |= static_cast<std::uint64_t>(data[pos + static_cast<std::size_t>(i)])
              << (8 * i);
    pos += 8;
    return std::bit_cast<double>(bits);
  }
};

int expected_param_count(const CheckpointPolicy& p) {
  int n = p.net.param_count();
  if (p.head == HeadKind::gaussian) n += p.action_dim;
  return n;
}

void check_policy(const CheckpointPolicy& p, const char* when) {
  if (p.net.output_dim != p.action_dim)
    throw DimensionError(std::string("checkpoint ") + when +
                         ": network output dim does not match action dim");
  if (static_cast<int>(p.params.size()) != expected_param_count(p))
    throw DimensionError(std::string("checkpoint ") + when +
                         ": parameter vector length does not match the "
                         "network spec");
}

}  // namespace

std::vector<std::uint8_t> serialize_checkpoint(const Checkpoint& ckpt) {
  for (const CheckpointPolicy& p : ckpt.policies) check_policy(p, "save");

  std::vector<std::uint8_t> out;
  out.reserve(checkpoint_file_size(ckpt));
  out.insert(out.end(), kMagic, kMagic + 4);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(ckpt.policies.size()));
  put_u32(out, static_cast<std::uint32_t>(ckpt.iteration));
  put_u32(out, static_cast<std::uint32_t>(ckpt.seed & 0xffffffffu));
  put_u32(out, static_cast<std::uint32_t>(ckpt.seed >> 32));
  for (const CheckpointPolicy& p : ckpt.policies) {
    put_u32(out, p.head == HeadKind::gaussian ? 0u : 1u);
    put_u32(out, static_cast<std::uint32_t>(p.action_dim));
    put_u32(out, static_cast<std::uint32_t>(p.net.input_dim));
    put_u32(out, p.net.activation == Activation::relu ? 0u : 1u);
    put_u32(out, static_cast<std::uint32_t>(p.net.hidden_dims.size()));
    for (int h : p.net.hidden_dims) put_u32(out, static_cast<std::uint32_t>(h));
    put_u32(out, static_cast<std::uint32_t>(p.params.size()));
  }
  for (const CheckpointPolicy& p : ckpt.policies)
    for (double v : p.params) put_f64(out, v);
  return out;
}

Checkpoint deserialize_checkpoint(const std::vector<std::uint8_t>& bytes) {
  Reader r{bytes};
  r.need(4);
  if (std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw FormatError("checkpoint: bad magic (not a checkpoint file)");
  r.pos = 4;
  const std::uint32_t version = r.u32();
  if (version != kVersion)
    throw FormatError("checkpoint: unsupported version " +
                      std::to_string(version));

  Checkpoint ckpt;
  const std::uint32_t num_pops = r.u32();
  if (num_pops == 0) throw FormatError("checkpoint: zero populations");
  ckpt.iteration = static_cast<int>(r.u32());
  const std::uint64_t seed_lo = r.u32();
  const std::uint64_t seed_hi = r.u32();
  ckpt.seed = seed_lo | (seed_hi << 32);

  std::vector<std::uint32_t> counts;
  for (std::uint32_t i = 0; i < num_pops; ++i) {
    CheckpointPolicy p;
    const std::uint32_t head = r.u32();
    if (head > 1) throw FormatError("checkpoint: unknown head kind");
    p.head = head == 0 ? HeadKind::gaussian : HeadKind::categorical;
    p.action_dim = static_cast<int>(r.u32());
    p.net.input_dim = static_cast<int>(r.u32());
    const std::uint32_t act = r.u32();
    if (act > 1) throw FormatError("checkpoint: unknown activation");
    p.net.activation = act == 0 ? Activation::relu : Activation::tanh;
    const std::uint32_t num_hidden = r.u32();
    if (num_hidden > kMaxHiddenLayers)
      throw FormatError("checkpoint: implausible hidden layer count");
    for (std::uint32_t h = 0; h < num_hidden; ++h)
      p.net.hidden_dims.push_back(static_cast<int>(r.u32()));
    p.net.output_dim = p.action_dim;
    counts.push_back(r.u32());
    if (p.action_dim < 1 || p.net.input_dim < 1)
      throw FormatError("checkpoint: non-positive dimension");
    for (int h : p.net.hidden_dims)
      if (h < 1) throw FormatError("checkpoint: non-positive hidden width");
    if (static_cast<int>(counts.back()) != expected_param_count(p))
      throw FormatError("checkpoint: parameter count does not match the "
                        "network spec");
    ckpt.policies.push_back(std::move(p));
  }
  for (std::size_t i = 0; i < ckpt.policies.size(); ++i) {
    CheckpointPolicy& p = ckpt.policies[i];
    p.params.resize(counts[i]);
    for (std::uint32_t j = 0; j < counts[i]; ++j) p.params[j] = r.f64();
  }
  if (r.pos != bytes.size())
    throw FormatError("checkpoint: trailing bytes after parameters");
  return ckpt;
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  const std::vector<std::uint8_t> bytes = serialize_checkpoint(ckpt);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing checkpoint to '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw IoError("cannot open checkpoint '" + path + "'");
  const std::streamsize size = in.tellg();
  in.seekg(0);
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
  if (size > 0 &&
      !in.read(reinterpret_cast<char*>(bytes.data()), size))
    throw IoError("failed reading checkpoint '" + path + "'");
  return deserialize_checkpoint(bytes);
}

std::size_t checkpoint_file_size(const Checkpoint& ckpt) {
  std::size_t n = 4 + 5 * 4;  // magic + version/pops/iteration/seed words
  for (const CheckpointPolicy& p : ckpt.policies) {
    n += 6 * 4 + 4 * p.net.hidden_dims.size();
    n += 8 * p.params.size();
  }
  return n;
}

}  // namespace dimapg
