#include <set>
#include <stdexcept>

#include "doctest.h"
#include "fgl/histogram.hpp"
#include "fgl/rng.hpp"

using namespace fgl;

namespace {

struct Setup {
  ConvInstance inst;
  HashFn h;
  EncodedInstance enc;
  HistogramIndex whole;
};

Setup make_setup(i64 n, u64 seed) {
  Setup s;
  s.inst = generate(n, 1 << 20, seed, PlantKind::diff);
  SplitMix64 g(seed ^ 0xabcdef);
  s.h = draw_hash(g, 6);  // R = 64 = 4^3
  s.enc = encode(s.inst, s.h, 64, 3, 1);
  s.whole = hist_build(s.enc.S, 3);
  return s;
}

// every query vector the reporting reduction would issue
std::vector<ParikhVector> reduction_queries(const Setup& s) {
  std::vector<ParikhVector> out;
  for (i64 k = 1; k < s.inst.n(); ++k) {
    for (const CarrySet& cs :
         query_carry_sets(k, s.enc.hashed[k], s.h, 3, 1)) {
      for (const auto& m : cs.members) {
        if (m.total() >= 1 && m.total() <= static_cast<i64>(s.enc.S.size())) {
          out.push_back(m);
        }
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("alpha = 0 inserts no splitting characters at level 0") {
  const Setup s = make_setup(24, 5);
  const SplitStructure ss = build_split_structure(s.enc, 0.0, 1);
  REQUIRE(ss.levels == 1);
  REQUIRE(ss.parts_by_level[0].size() == 1);
  CHECK(ss.parts[ss.parts_by_level[0][0]].stars.empty());
  CHECK(ss.parts[ss.parts_by_level[0][0]].content == s.enc.S);

  for (const auto& v : reduction_queries(s)) {
    REQUIRE(split_query(ss, v, 0) == hist_report(s.whole, v));
  }
}

TEST_CASE("split transparency at alpha 0.5 and 1 across levels") {
  SplitMix64 g(6);
  for (int t = 0; t < 6; ++t) {
    const Setup s = make_setup(16 + g.below(48), g.next());
    for (double alpha : {0.5, 1.0}) {
      const SplitStructure ss = build_split_structure(s.enc, alpha);
      for (const auto& v : reduction_queries(s)) {
        REQUIRE(split_query(ss, v, 0) == hist_report(s.whole, v));
      }
    }
  }
}

TEST_CASE("split transparency for arbitrary window vectors") {
  // not just reduction queries: any window's own Parikh vector must be found
  const Setup s = make_setup(40, 77);
  const SplitStructure ss = build_split_structure(s.enc, 1.0);
  SplitMix64 g(8);
  for (int q = 0; q < 300; ++q) {
    const i64 n = static_cast<i64>(s.enc.S.size());
    const i64 m = 1 + g.below(n);
    const i64 p = g.below(n - m + 1);
    const ParikhVector v = parikh(s.enc.S.substr(p, m), 3);
    REQUIRE(split_query(ss, v, 0) == hist_report(s.whole, v));
  }
}

TEST_CASE("parts reconstruct contiguous regions ending at block boundaries") {
  const Setup s = make_setup(32, 9);
  const SplitStructure ss = build_split_structure(s.enc, 0.7);
  std::set<i64> block_ends;
  for (const auto& b : s.enc.blocks) block_ends.insert(b.end);
  block_ends.insert(0);

  for (const auto& part : ss.parts) {
    // stripped of splitting characters the content is exactly the S region
    std::string stripped = part.content;
    const char star = symbol_char(3);
    stripped.erase(std::remove(stripped.begin(), stripped.end(), star),
                   stripped.end());
    REQUIRE(stripped ==
            s.enc.S.substr(part.s_begin, part.s_end - part.s_begin));
    // cut positions sit on encoding-block boundaries
    CHECK(block_ends.count(part.s_begin) == 1);
    CHECK(block_ends.count(part.s_end) == 1);
    // stars themselves were placed at block boundaries within the part
    i64 stars_seen = 0;
    for (i64 q : part.stars) {
      const i64 s_pos = part.s_begin + (q - stars_seen);
      ++stars_seen;
      CHECK(block_ends.count(s_pos) == 1);
    }
  }

  // part counts grow like 2^level
  for (int lvl = 0; lvl < ss.levels; ++lvl) {
    CHECK(static_cast<i64>(ss.parts_by_level[lvl].size()) <=
          2 * (i64(1) << lvl));
  }
}

TEST_CASE("split_query input validation") {
  const Setup s = make_setup(16, 11);
  const SplitStructure ss = build_split_structure(s.enc, 0.5);
  CHECK_THROWS_AS(split_query(ss, ParikhVector{{0, 0, 0}}, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(split_query(ss, ParikhVector{{1, 0}}, 0),
                  std::invalid_argument);
  CHECK(split_query(ss, ParikhVector{{i64(s.enc.S.size()) + 5, 0, 0}}, 0)
            .empty());
  CHECK_THROWS_AS(build_split_structure(s.enc, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(build_split_structure(s.enc, 1.5), std::invalid_argument);
}
