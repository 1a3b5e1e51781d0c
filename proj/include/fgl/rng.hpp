#pragma once

#include <cstdint>

namespace fgl {

// Every random choice in the project flows from one of these, seeded from a
// single 64-bit value, so instances reproduce bit-exactly across runs and
// across language ports. The generator is splitmix64:
//
//   state := state + 0x9E3779B97F4A7C15
//   z := state
//   z := (z xor (z >> 30)) * 0xBF58476D1CE4E5B9
//   z := (z xor (z >> 27)) * 0x94D049BB133111EB
//   output := z xor (z >> 31)
//
// Bounded draws use the multiply-high reduction
//   below(n) = floor(next() * n / 2^64)
// A port that reproduces these two rules reproduces every generated instance.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform value in [0, n). n must be nonzero.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  // Uniform value in [lo, hi], inclusive.
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span =
        static_cast<std::uint64_t>(hi - lo) + 1;  // hi >= lo
    return lo + static_cast<std::int64_t>(below(span));
  }

 private:
  std::uint64_t state_;
};

}  // namespace fgl
