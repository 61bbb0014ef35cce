#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace dimapg {

// All sampling goes through RandomStream so that results are reproducible
// bit-for-bit across platforms. std::mt19937_64 has a fully specified output
// sequence; the distribution transforms below are hand-rolled because the
// standard library's distribution objects are implementation-defined.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // [0, 1)
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // [0, n)
  int uniform_int(int n) {
    return static_cast<int>(gen_() % static_cast<std::uint64_t>(n));
  }

  // Standard normal via Box-Muller; the spare value is consumed first.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace detail

// Derives an independent child seed from a base seed and a path of indices
// (iteration, agent, phase, ...). Used to give every rollout its own stream
// so that collection order and thread count never affect the results.
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = detail::splitmix64(base);
  for (std::uint64_t p : path) h = detail::splitmix64(h ^ p);
  return h;
}

}  // namespace dimapg
