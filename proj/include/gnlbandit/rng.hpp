#pragma once

#include <cstdint>

namespace gnl {

// Deterministic random stream built on SplitMix64 (Steele, Lea & Flood,
// "Fast splittable pseudorandom number generators", constants from the
// published reference implementation).
//
// A stream is identified by (seed, stream, substream); the k-th variate is a
// pure function of that triple and k, using only 64-bit integer arithmetic,
// so sequences reproduce bit-exactly across platforms and runs.  Experiment
// repetitions use the repetition index as the stream id, with substream 0
// for environment draws and substream 1 for learner sampling, so swapping
// the learner never perturbs the environment's variates.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0,
                     std::uint64_t substream = 0)
      : state_(derive(seed, stream, substream)) {}

  std::uint64_t next_u64() {
    state_ += kGamma;
    return mix(state_);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t substream) {
    std::uint64_t z = mix(seed + kGamma);
    z = mix(z ^ (stream + kGamma));
    z = mix(z ^ (substream + kGamma));
    return z;
  }

  std::uint64_t state_;
};

}  // namespace gnl
