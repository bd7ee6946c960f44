#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace edsa {

// Deterministic PRNG used everywhere randomness is needed. std's
// distribution objects are implementation-defined, so every draw here is
// spelled out explicitly and reproduces bit-for-bit across toolchains.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Unbiased enough for our purposes: fixed-point multiply, no rejection
  // loop, fully deterministic.
  uint64_t below(uint64_t bound) {
    return static_cast<uint64_t>(
        (static_cast<__uint128_t>(next_u64()) * bound) >> 64);
  }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Marsaglia polar method; deterministic pair consumption.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = uniform(-1.0, 1.0);
      v = uniform(-1.0, 1.0);
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double mul = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * mul;
    have_spare_ = true;
    return u * mul;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

constexpr uint64_t fnv1a64(std::string_view s,
                           uint64_t h = 0xcbf29ce484222325ULL) {
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// All randomness flows from one root seed, expanded per module by a labeled
// hash so partial pipeline reruns see stable streams.
inline uint64_t derive_seed(uint64_t root, std::string_view label) {
  SplitMix64 mix(root ^ fnv1a64(label));
  return mix.next_u64();
}

}  // namespace edsa
