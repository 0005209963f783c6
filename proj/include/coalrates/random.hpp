#pragma once

#include <cstdint>
#include <cmath>

namespace coalrates {

// splitmix64, used both as a seed mixer and to derive independent
// per-replicate streams from (master_seed, replicate, stream) triples.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replicate,
                                 std::uint64_t stream) {
  return splitmix64(splitmix64(splitmix64(master) ^ replicate) ^ stream);
}

// xoshiro256++ (Blackman & Vigna), seeded through splitmix64.
class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256pp(std::uint64_t seed = 0) {
    std::uint64_t x = seed;
    for (auto& w : state_) {
      x = splitmix64(x);
      w = x;
    }
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~0ULL; }

  result_type operator()() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // uniform in [0, 1), 53 random bits
  double uniform() { return double((*this)() >> 11) * 0x1.0p-53; }

  // unit-mean exponential
  double exponential() { return -std::log1p(-uniform()); }

  // exponential of mean 1 conditioned to be < t, via inverse CDF:
  // x = -ln(1 - U (1 - e^{-t}))
  double truncated_exponential(double t) {
    return -std::log1p(-uniform() * (1.0 - std::exp(-t)));
  }

  std::uint64_t uniform_index(std::uint64_t n) { return (*this)() % n; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t state_[4];
};

}  // namespace coalrates
