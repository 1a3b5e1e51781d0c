#include "fgl/hashing.hpp"

#include <algorithm>
#include <iostream>
#include <stdexcept>

#include "fgl/rng.hpp"
#include "json.hpp"

namespace fgl {

void validate(const HashFn& h) {
  if ((h.multiplier & 1) == 0) {
    throw std::invalid_argument("hash multiplier must be odd");
  }
  if (h.s <= 0 || h.w < h.s || h.w > 63) {
    throw std::invalid_argument("hash requires 0 < s <= w <= 63");
  }
}

HashFn draw_hash(SplitMix64& g, int s, int w) {
  HashFn h;
  h.multiplier = g.next() | 1;
  h.w = w;
  h.s = s;
  validate(h);
  return h;
}

u64 hash_eval(const HashFn& h, i64 x) {
  validate(h);
  const i64 half = i64(1) << (h.w - 1);
  if (x < -half || x >= half) {
    throw std::out_of_range("hash_eval: input outside the w-bit word range");
  }
  const u64 mask = (u64(1) << h.w) - 1;  // w <= 63
  const u64 xw = static_cast<u64>(x) & mask;  // x mod 2^w
  const u64 prod = (h.multiplier * xw) & mask;
  return prod >> (h.w - h.s);
}

std::vector<u64> linearity_offsets(const HashFn& h) {
  validate(h);
  // h(x) + h(x') = h(x+x') + R*c - g with c, g in {0,1}: c is the word-level
  // wrap of the two products, g the carry out of the discarded low bits. The
  // low-bit carry can only occur when w > s.
  if (h.w == h.s) return {0};
  return {0, h.R() - 1};
}

std::vector<u64> sum_target_offsets(const HashFn& h) {
  std::vector<u64> out;
  for (u64 d : linearity_offsets(h)) {
    out.push_back((h.R() - d) % h.R());
  }
  return out;
}

std::string to_json(const HashFn& h) {
  nlohmann::json j{{"mult", h.multiplier}, {"w", h.w}, {"s", h.s}};
  return j.dump();
}

HashFn hash_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  HashFn h;
  h.multiplier = j.at("mult").get<u64>();
  h.w = j.at("w").get<int>();
  h.s = j.at("s").get<int>();
  validate(h);
  return h;
}

BucketDecomposition build_buckets(const ConvInstance& inst, const HashFn& h,
                                  i64 overflow_factor) {
  validate_instance(inst);
  validate(h);
  const i64 n = inst.n();
  const u64 R = h.R();
  if (R > static_cast<u64>(n)) {
    std::cerr << "fgl: warning: R=" << R << " exceeds n=" << n
              << " (R <= n recommended)\n";
  }
  BucketDecomposition dec;
  dec.R = R;
  dec.threshold = (overflow_factor * n + static_cast<i64>(R) - 1) /
                  static_cast<i64>(R);
  dec.buckets.assign(R, {});
  for (i64 i = 0; i < n; ++i) {
    dec.buckets[hash_eval(h, inst.a[i])].push_back(i);
  }
  for (const auto& b : dec.buckets) {
    if (static_cast<i64>(b.size()) > dec.threshold) {
      dec.overflow.insert(dec.overflow.end(), b.begin(), b.end());
    }
  }
  std::sort(dec.overflow.begin(), dec.overflow.end());
  return dec;
}

std::optional<SolutionWitness> scan_overflow(const ConvInstance& inst,
                                             const BucketDecomposition& dec) {
  const i64 n = inst.n();
  for (i64 i : dec.overflow) {
    for (i64 j = 0; i + j <= n - 1; ++j) {
      if (inst.a[i] + inst.a[j] == inst.a[i + j]) {
        SolutionWitness w{WitnessKind::conv, {std::min(i, j), std::max(i, j),
                                              -1}};
        return w;
      }
    }
  }
  return std::nullopt;
}

}  // namespace fgl
