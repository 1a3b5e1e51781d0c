#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fgl/instances.hpp"

namespace fgl {

class SplitMix64;

// Multiply-shift hash from w-bit words to [R], R = 2^s: top s bits of
// (multiplier * x') mod 2^w. Negative inputs are canonicalized by their
// two's-complement residue mod 2^w, which keeps the family almost-linear.
struct HashFn {
  u64 multiplier = 1;  // odd
  int w = 63;
  int s = 3;

  u64 R() const { return u64(1) << s; }
};

void validate(const HashFn& h);
HashFn draw_hash(SplitMix64& g, int s, int w = 63);

u64 hash_eval(const HashFn& h, i64 x);

// The complete set D with (h(x) + h(x') - h(x+x')) mod R in D for all
// in-range x, x'. For multiply-shift this is {0, R-1} (just {0} when w = s).
std::vector<u64> linearity_offsets(const HashFn& h);

// Derived from linearity_offsets: if x + x' = x'' then
// h(x'') = (h(x) + h(x') + e) mod R for some e in this set.
std::vector<u64> sum_target_offsets(const HashFn& h);

// {"mult":...,"w":...,"s":...}
std::string to_json(const HashFn& h);
HashFn hash_from_json(const std::string& text);

// Hash-induced partition of instance indices into R buckets plus the set of
// indices living in buckets that exceed the 3n/R threshold.
struct BucketDecomposition {
  u64 R = 0;
  i64 threshold = 0;  // ceil(overflow_factor * n / R), overflow_factor = 3
  std::vector<std::vector<i64>> buckets;  // bucket -> sorted indices
  std::vector<i64> overflow;              // sorted indices, overloaded buckets
};

inline constexpr i64 kOverflowFactor = 3;  // the 3 in 3n/R, kept as a knob

BucketDecomposition build_buckets(const ConvInstance& inst, const HashFn& h,
                                  i64 overflow_factor = kOverflowFactor);

// Checks every overflow index i against all j in both addend roles:
// A[i] + A[j] = A[i+j]. Returns a verified witness if one exists.
std::optional<SolutionWitness> scan_overflow(const ConvInstance& inst,
                                             const BucketDecomposition& dec);

}  // namespace fgl
