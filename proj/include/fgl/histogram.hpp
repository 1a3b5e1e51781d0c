#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fgl/hashing.hpp"
#include "fgl/instances.hpp"

namespace fgl {

// Characters are 'a' + symbol. Symbol ell is the dedicated splitting
// character of the multi-level split structure.
char symbol_char(int symbol);
int char_symbol(char c, int alphabet);

struct ParikhVector {
  std::vector<i64> counts;

  i64 total() const;
  friend bool operator==(const ParikhVector&, const ParikhVector&) = default;
  friend auto operator<=>(const ParikhVector&, const ParikhVector&) = default;
};

ParikhVector parikh(const std::string& text, int ell);

enum class HistMode { prefix, binary_interval };

// Histogram (jumbled) index over a fixed text. The prefix mode stores
// per-position character counts and answers a query by scanning the
// N - m + 1 windows of the query's length; when the first ell - 1 counts fit
// in one machine word the scan compares packed words. The binary-interval
// mode (ell = 2 only) stores, for every window length, the reachable range
// of sigma_0 counts and decides in O(1).
class HistogramIndex {
 public:
  HistogramIndex() = default;
  HistogramIndex(std::string text, int ell, HistMode mode = HistMode::prefix);

  int ell() const { return ell_; }
  i64 size() const { return static_cast<i64>(text_.size()); }
  const std::string& text() const { return text_; }
  HistMode mode() const { return mode_; }

  i64 prefix_count(i64 p, int symbol) const;  // occurrences in text[0, p)
  bool decide(const ParikhVector& psi) const;
  std::vector<i64> report(const ParikhVector& psi) const;

 private:
  bool packed() const { return pack_bits_ > 0; }
  u64 pack_query(const ParikhVector& psi, bool& representable) const;

  std::string text_;
  int ell_ = 0;
  HistMode mode_ = HistMode::prefix;
  int pack_bits_ = 0;               // bits per lane, 0 if not packed
  std::vector<u64> packed_;         // (N+1) packed prefix counts
  std::vector<unsigned> prefix_;    // (N+1) * ell row-major, fallback
  std::vector<std::pair<i64, i64>> interval_;  // per length m: min/max sigma_0
};

HistogramIndex hist_build(const std::string& text, int ell,
                          HistMode mode = HistMode::prefix);
bool hist_decide(const HistogramIndex& idx, const ParikhVector& psi);
std::vector<i64> hist_report(const HistogramIndex& idx,
                             const ParikhVector& psi);

// ---------------------------------------------------------------------------
// Encodings of a Diff-Convolution-3SUM instance into a string.

struct BlockBoundary {
  i64 start = 0;  // first payload character of the block
  i64 split = 0;  // the regular/complement split point
  i64 end = 0;    // one past the block (scheme 3: its trailing separator)
};

// Scheme 1: each block is complement-then-regular unary digit runs in base
// R^(1/ell), ell * R^(1/ell) characters per block. Scheme 2 spends the last
// character on padding every partial encoding to the same length. Scheme 3
// additionally reserves the last character as a separator between partial
// encodings, which kills encoding errors entirely.
struct EncodedInstance {
  int scheme = 1;
  u64 R = 0;
  int ell = 0;
  i64 r = 0;       // digit base R^(1/digits)
  int digits = 0;  // ell, ell-1 or ell-2 numeric digits
  HashFn h;
  std::string S;
  std::vector<u64> hashed;  // h(A[e]) per element
  std::vector<BlockBoundary> blocks;

  // Where a true match for blocks (i, j) begins and ends.
  i64 candidate_start(i64 block) const;
  i64 candidate_end(i64 block) const;

  std::string to_json() const;
};

EncodedInstance encode(const ConvInstance& inst, const HashFn& h, u64 R,
                       int ell, int scheme);

// The carry set V_k of the query for position difference k: base vector plus
// every digit-carry variant v_k + R^(1/d) * u - u^>>1 over binary u with the
// top numeric bit forced to zero. Padding and separator components follow
// the scheme so member totals stay consistent.
struct CarrySet {
  i64 k = 0;
  u64 base_hash = 0;
  int scheme = 1;
  int ell = 0;
  bool wrapped = false;  // top-digit wrap variant (mod-R hash wraparound)
  ParikhVector base;
  std::vector<ParikhVector> members;
};

CarrySet carry_set(i64 k, u64 h_of_xk, u64 R, int ell, int scheme);

// Internal variant used by the pipelines: the same set built for a base
// value with the top-digit borrow forced, covering hash wraparound.
CarrySet carry_set_wrapped(i64 k, u64 h_of_xk, u64 R, int ell, int scheme);

// All carry sets a pipeline must query for position difference k so that
// every true witness is covered under almost-linear (not exactly linear)
// hashing: bases (h_k + delta) mod R for delta in {0, 1}, each in plain and
// wrapped form.
std::vector<CarrySet> query_carry_sets(i64 k, u64 h_of_xk, const HashFn& h,
                                       int ell, int scheme);

struct MatchClass {
  bool candidate = false;
  i64 i = -1, j = -1;  // blocks, j = i + k, set when candidate
};

// A reported match is a candidate when it starts at block i's split point
// and ends at block (i+k)'s split point; anything else is an encoding error.
MatchClass classify_match(const EncodedInstance& enc, i64 start, i64 len,
                          i64 k);

struct FPReportRow {
  i64 k = 0;
  i64 queries = 0;  // member vectors queried
  i64 matches = 0;
  i64 candidates = 0;
  i64 false_candidates = 0;
  i64 encoding_errors = 0;
};

struct FPReport {
  std::vector<FPReportRow> rows;
  i64 carry_sets = 0;  // carry sets queried in total

  i64 total_matches() const;
  i64 total_false_positives() const;  // encoding errors + false candidates
  std::string to_csv() const;
};

struct ReportingOptions {
  bool exhaustive = false;  // keep querying after a verified witness
};

// Diff-Convolution-3SUM through histogram reporting: encode, hist_report
// every carry-set member, classify matches, verify candidates against the
// original values. Returns the first honest witness in (k, position) order.
std::optional<SolutionWitness> reporting_pipeline(const ConvInstance& inst,
                                                  u64 R, int ell, int scheme,
                                                  u64 seed,
                                                  FPReport* report = nullptr,
                                                  ReportingOptions opts = {});

struct DecisionConfig {
  int ell = 3;
  int trials = 0;  // 0 -> ceil(log2 n) + 4
  u64 seed = 0;
  double r_scale = 2.0;          // the scaled constant in R = c * n^(l/(l-2))
  i64 max_string_len = i64(1) << 20;  // compute guard on the encoded length
};

// Histogram decision queries amplified over independent hash draws;
// every surviving position difference is verified by an O(n) scan, so the
// output is sound unconditionally and complete because true witnesses match
// in every trial.
std::optional<SolutionWitness> decision_pipeline(const ConvInstance& inst,
                                                 const DecisionConfig& cfg);
std::optional<SolutionWitness> decision_pipeline(const ConvInstance& inst,
                                                 int ell, int trials,
                                                 u64 seed);

// ---------------------------------------------------------------------------
// Multi-level split structure.

struct SplitPart {
  int level = 0;
  int family = 1;           // 1: aligned cuts, 2: staggered cuts
  i64 s_begin = 0, s_end = 0;  // region of S
  std::string content;      // S[s_begin, s_end) with splitting chars added
  std::vector<i64> stars;   // splitting-char positions inside content
  HistogramIndex index;     // alphabet ell + 1
};

struct SplitStructure {
  int ell = 0;
  double alpha = 0;
  int levels = 0;
  i64 n = 0;  // blocks in the encoded instance
  i64 N = 0;  // |S|
  std::vector<SplitPart> parts;
  std::vector<std::vector<std::size_t>> parts_by_level;
  // Largest query total each level is guaranteed to answer exactly (windows
  // that long always fit inside some part of the level).
  std::vector<i64> level_guarantee;
};

// Splitting characters are inserted one at a time at positions rounded down
// to encoding-block boundaries; each level cuts S into two staggered part
// families so any short-enough window avoids the cuts of one family.
SplitStructure build_split_structure(const EncodedInstance& enc, double alpha,
                                     int levels = 0);

// Exactly hist_report(S, v): picks the level for the query total, expands v
// with every feasible splitting-character count, queries each part and maps
// hits back to S positions. k is carried for report bookkeeping only.
std::vector<i64> split_query(const SplitStructure& ss, const ParikhVector& v,
                             i64 k);

}  // namespace fgl
