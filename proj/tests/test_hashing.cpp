#include <set>

#include <stdexcept>

#include "doctest.h"
#include "fgl/hashing.hpp"
#include "fgl/rng.hpp"

using namespace fgl;

TEST_CASE("hash_eval worked example") {
  HashFn h{5, 8, 3};
  // (5 * 100) mod 256 = 244, 244 >> 5 = 7
  CHECK(hash_eval(h, 100) == 7);
  CHECK(hash_eval(h, 0) == 0);
  CHECK(hash_eval(h, 100) == hash_eval(h, 100));
}

TEST_CASE("linearity offsets are complete and tight at small word size") {
  SplitMix64 g(1);
  for (int trial = 0; trial < 4; ++trial) {
    const HashFn h = draw_hash(g, 3, 10);
    const auto offsets = linearity_offsets(h);
    const std::set<u64> allowed(offsets.begin(), offsets.end());
    std::set<u64> observed;
    const i64 half = i64(1) << (h.w - 1);
    for (i64 x = -half; x < half; x += 3) {
      for (i64 y = -half; y < half; y += 7) {
        if (x + y < -half || x + y >= half) continue;
        const u64 d =
            (hash_eval(h, x) + hash_eval(h, y) + 2 * h.R() -
             hash_eval(h, x + y)) %
            h.R();
        observed.insert(d);
        REQUIRE(allowed.count(d) == 1);
      }
    }
    CHECK(observed == allowed);  // the returned set is exactly what occurs
  }
}

TEST_CASE("offset soundness at w = 32 by sampling") {
  SplitMix64 g(2);
  const HashFn h = draw_hash(g, 5, 32);
  const auto offsets = linearity_offsets(h);
  const std::set<u64> allowed(offsets.begin(), offsets.end());
  const i64 half = i64(1) << 31;
  for (int t = 0; t < 1000000; ++t) {
    const i64 x = static_cast<i64>(g.below(1u << 30)) - (1 << 29);
    const i64 y = static_cast<i64>(g.below(1u << 30)) - (1 << 29);
    REQUIRE(x + y >= -half);
    REQUIRE(x + y < half);
    const u64 d = (hash_eval(h, x) + hash_eval(h, y) + 2 * h.R() -
                   hash_eval(h, x + y)) %
                  h.R();
    REQUIRE(allowed.count(d) == 1);
  }
}

TEST_CASE("bucket decomposition partitions and overflows") {
  SUBCASE("constant input collapses into one overflowing bucket") {
    ConvInstance inst;
    inst.a.assign(8, 42);
    HashFn h{0x9e3779b97f4a7c15ULL | 1, 63, 3};
    const auto dec = build_buckets(inst, h);
    CHECK(dec.threshold == 3);  // ceil(3*8/8)
    CHECK(dec.overflow.size() == 8);
  }

  SUBCASE("bucket contents equal per-element evaluation") {
    SplitMix64 g(3);
    const ConvInstance inst = generate(8, 1 << 16, 4, PlantKind::none);
    const HashFn h = draw_hash(g, 2);
    const auto dec = build_buckets(inst, h);
    i64 seen = 0;
    for (u64 a = 0; a < dec.R; ++a) {
      for (i64 i : dec.buckets[a]) {
        CHECK(hash_eval(h, inst.a[i]) == a);
        ++seen;
      }
    }
    CHECK(seen == inst.n());  // partition property
  }

  SUBCASE("no overflow when all buckets are small") {
    ConvInstance inst;
    inst.universe = i64(1) << 40;
    for (i64 i = 0; i < 64; ++i) inst.a.push_back(i * 1315423911LL);
    SplitMix64 g(4);
    const HashFn h = draw_hash(g, 3);
    const auto dec = build_buckets(inst, h);
    i64 max_bucket = 0;
    for (const auto& b : dec.buckets) {
      max_bucket = std::max<i64>(max_bucket, b.size());
    }
    if (max_bucket <= dec.threshold) CHECK(dec.overflow.empty());
  }
}

TEST_CASE("almost-balance on an adversarial arithmetic progression") {
  // 50 hash draws over the same progression; the mean overflow count stays
  // within a generous constant factor of R.
  const i64 n = 4096;
  const int s = 6;  // R = 64
  ConvInstance inst;
  for (i64 i = 0; i < n; ++i) inst.a.push_back(i * 12345);
  SplitMix64 g(99);
  double total_overflow = 0;
  for (int t = 0; t < 50; ++t) {
    const HashFn h = draw_hash(g, s);
    total_overflow += static_cast<double>(build_buckets(inst, h).overflow.size());
  }
  const double mean = total_overflow / 50.0;
  CHECK(mean <= 16.0 * 64.0);
}

TEST_CASE("scan_overflow finds planted overflow witnesses") {
  // Constant sequences force every index into one bucket; plant a witness.
  ConvInstance inst;
  inst.a.assign(32, 5);
  inst.a[1] = 2;
  inst.a[2] = 3;
  inst.a[3] = 5;  // 2 + 3 = 5 at indices (1, 2)
  HashFn h{12345678901234567ULL | 1, 63, 2};
  const auto dec = build_buckets(inst, h);
  REQUIRE_FALSE(dec.overflow.empty());
  const auto w = scan_overflow(inst, dec);
  REQUIRE(w.has_value());
  CHECK(validate_witness(inst, *w));
}

TEST_CASE("hash json round trip") {
  const HashFn h{987654321ULL | 1, 63, 4};
  const HashFn back = hash_from_json(to_json(h));
  CHECK(back.multiplier == h.multiplier);
  CHECK(back.w == h.w);
  CHECK(back.s == h.s);
}
