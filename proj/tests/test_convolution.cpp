#include <stdexcept>

#include "doctest.h"
#include "fgl/convolution.hpp"
#include "fgl/rng.hpp"

using namespace fgl;

TEST_CASE("convolve_naive worked examples") {
  CHECK(convolve_naive({{1, 0, 1}}, {{1, 1}}) == DenseVector{{1, 1, 1, 1}});
  CHECK(convolve_naive({{0, 0, 0}}, {{3, 4}}) ==
        DenseVector{{0, 0, 0, 0}});
  CHECK(convolve_naive({{1}}, {{5, 7}}) == DenseVector{{5, 7}});
}

TEST_CASE("all-ones ramp") {
  DenseVector ones{{1, 1, 1, 1, 1, 1, 1, 1}};
  const DenseVector w = convolve_fast(ones, ones);
  const std::vector<i64> expect{1, 2, 3, 4, 5, 6, 7, 8, 7, 6, 5, 4, 3, 2, 1};
  CHECK(w.entries == expect);
}

TEST_CASE("fast convolution is bitwise-identical to naive") {
  SplitMix64 g(2024);
  for (int t = 0; t < 200; ++t) {
    DenseVector u, v;
    const i64 nu = 1 + g.below(257);
    const i64 nv = 1 + g.below(257);
    for (i64 i = 0; i < nu; ++i) u.entries.push_back(g.below(1 << 20));
    for (i64 i = 0; i < nv; ++i) v.entries.push_back(g.below(1 << 20));
    const DenseVector a = convolve_naive(u, v);
    const DenseVector b = convolve_fast(u, v);
    REQUIRE(a == b);
    CHECK(convolve_fast(v, u) == b);  // commutativity
  }
}

TEST_CASE("overflow policy rejects dangerous inputs") {
  DenseVector big;
  big.entries.assign(8, i64(1) << 31);
  CHECK_THROWS_AS(convolve_naive(big, big), std::overflow_error);
  CHECK_THROWS_AS(convolve_fast(big, big), std::overflow_error);
  DenseVector neg{{-1, 2}};
  CHECK_THROWS_AS(convolve_naive(neg, neg), std::invalid_argument);
}

TEST_CASE("witnesses_at oracle") {
  SparseBitVector u{4, {0, 1, 3}};  // 1101
  SparseBitVector v{3, {0, 2}};     // 101
  CHECK(witnesses_at(u, v, 2) ==
        std::vector<std::pair<i64, i64>>{{0, 2}});
  CHECK(witnesses_at(u, v, 0) ==
        std::vector<std::pair<i64, i64>>{{0, 0}});
  CHECK(witnesses_at(u, v, 5) ==
        std::vector<std::pair<i64, i64>>{{3, 2}});
  CHECK_THROWS_AS(witnesses_at(u, v, 6), std::out_of_range);
  CHECK_THROWS_AS(witnesses_at(u, v, -1), std::out_of_range);
}

TEST_CASE("witness counts equal convolution entries for binary vectors") {
  SplitMix64 g(7);
  for (int t = 0; t < 50; ++t) {
    const i64 n = 8 + g.below(120);
    SparseBitVector u{n, {}}, v{n, {}};
    for (i64 i = 0; i < n; ++i) {
      if (g.below(4) == 0) u.ones.push_back(i);
      if (g.below(4) == 0) v.ones.push_back(i);
    }
    const DenseVector w = convolve_fast(dense(u), dense(v));
    for (i64 k = 0; k < static_cast<i64>(w.entries.size()); ++k) {
      REQUIRE(static_cast<i64>(witnesses_at(u, v, k).size()) == w.entries[k]);
    }
  }
}

TEST_CASE("characteristic vectors") {
  CHECK(characteristic_vector({0, 3}, 4).ones == std::vector<i64>{0, 3});
  CHECK(characteristic_vector({}, 4).ones.empty());
  const auto full = characteristic_vector({0, 1, 2, 3}, 4);
  CHECK(full.ones.size() == 4);
  CHECK_THROWS_AS(characteristic_vector({4}, 4), std::invalid_argument);
}

TEST_CASE("sparse and dense json round trips") {
  const SparseBitVector v{10, {1, 4, 9}};
  const SparseBitVector back = sparse_from_json(to_json(v));
  CHECK(back.length == v.length);
  CHECK(back.ones == v.ones);
  const DenseVector d{{1, 0, 2, 5}};
  CHECK(dense_from_json(to_json(d)) == d);
}
