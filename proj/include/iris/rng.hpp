#pragma once

#include <cstdint>
#include <vector>

namespace iris {

// Deterministic, platform-independent RNG (splitmix64-seeded xoshiro256**).
// std:: distributions are implementation-defined, which would break the
// byte-identical-metrics guarantee, so all sampling goes through this class.
class Rng {
public:
  explicit Rng(uint64_t seed) {
    uint64_t x = seed;
    for (auto& word : state_) {
      word = splitmix64(x);
    }
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n), rejection-sampled to avoid modulo bias.
  uint64_t next_below(uint64_t n) {
    if (n == 0) return 0;
    const uint64_t threshold = (0 - n) % n;
    for (;;) {
      const uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform integer in [lo, hi], inclusive.
  int next_int(int lo, int hi) {
    return lo + static_cast<int>(next_below(static_cast<uint64_t>(hi - lo + 1)));
  }

  bool next_bool() { return (next_u64() & 1) != 0; }

  // Derives an independent, reproducible stream for a worker or sub-task.
  Rng split(uint64_t stream_id) {
    uint64_t x = next_u64() ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1));
    return Rng(splitmix64(x));
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(next_below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  // Index draw proportional to non-negative weights (assumed to sum to ~1).
  size_t next_weighted(const std::vector<double>& weights) {
    const double u = next_double();
    double cum = 0.0;
    for (size_t i = 0; i < weights.size(); ++i) {
      cum += weights[i];
      if (u < cum) return i;
    }
    return weights.empty() ? 0 : weights.size() - 1;
  }

private:
  static uint64_t splitmix64(uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static uint64_t rotl(uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

  uint64_t state_[4];
};

}  // namespace iris
