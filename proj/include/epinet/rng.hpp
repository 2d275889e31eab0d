#pragma once

#include <cmath>
#include <cstdint>

namespace epinet {

// SplitMix64 finalizer; also used as the seed-expansion step for RngStream.
inline uint64_t mix64(uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

// Deterministic seed derivation for keys like (base_seed, replication, stream).
// Every simulation entity that needs randomness gets its seed through here,
// so batches, coupled runs and strategy draws replay exactly.
inline uint64_t derive_seed(uint64_t base, uint64_t a, uint64_t b = 0) {
  uint64_t h = base + 0x9e3779b97f4a7c15ULL;
  h = mix64(h ^ (a + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
  h = mix64(h ^ (b + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
  return h;
}

// Fixed stream ids hung off a run seed.
enum RngStreamId : uint64_t {
  kStreamEvents = 0,
  kStreamStrategy = 1,
  kStreamInitialSet = 2,
};

// xoshiro256++ with splitmix64 state expansion. Self-contained so that
// trajectories are bit-reproducible independent of the standard library.
class RngStream {
 public:
  explicit RngStream(uint64_t seed) {
    uint64_t sm = seed;
    for (auto& word : state_) {
      sm += 0x9e3779b97f4a7c15ULL;
      word = mix64(sm);
    }
  }

  uint64_t next() {
    const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0,1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in (0,1]; safe argument for log().
  double uniform_pos() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

  // Unbiased integer in [0, bound); bound > 0.
  uint64_t below(uint64_t bound) {
    const uint64_t threshold = (-bound) % bound;
    for (;;) {
      const uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  uint64_t state_[4];
};

}  // namespace epinet
