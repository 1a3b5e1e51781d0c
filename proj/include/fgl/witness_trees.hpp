#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fgl/convolution.hpp"
#include "fgl/instances.hpp"

namespace fgl {

enum class TreeVariant {
  ones_split_binary,   // split u by ones counts, leaves hold <= ceil(X/R) ones
  length_split_binary, // split u by halving, leaves of length X
  length_split_quad,   // split both u and v by halving
  special_quad_direct, // the special-leaf quad tree, direct leaf convolutions
  special_quad_matmul, // same tree, leaves via shift-matrix products
};

std::string tree_variant_name(TreeVariant v);
TreeVariant tree_variant_from_name(const std::string& name);

// One node of a witness search tree. Node convolutions are stored in
// absolute output coordinates: vec[t] is the number of witness pairs (a, b)
// covered by this node with a + b = base + t. For a node covering the
// u-range [u_lo, u_hi) against all of v this equals the local rule
// w_A[k - a] with a = u_lo; the local combine identities are recoverable
// through `base`.
struct TreeNode {
  i64 u_lo = 0, u_hi = 0;  // covered u index range
  i64 v_lo = 0, v_hi = 0;  // covered v index range (quad variants)
  i64 base = 0;
  i64 ones_lo = 0, ones_hi = 0;  // leaf range into the real u ones list
  std::vector<i64> vec;
  std::vector<u64> nz;  // one bit per entry of vec, for cache-lean descent
  std::array<int, 4> child{-1, -1, -1, -1};
  bool is_leaf = true;

  i64 at(i64 k) const {  // absolute index, zero outside range
    const i64 t = k - base;
    return (t >= 0 && t < static_cast<i64>(vec.size())) ? vec[t] : 0;
  }

  bool nonzero_at(i64 k) const {
    const i64 t = k - base;
    if (t < 0 || t >= static_cast<i64>(vec.size())) return false;
    return (nz[t >> 6] >> (t & 63)) & 1;
  }

  void rebuild_nz() {
    nz.assign((vec.size() + 63) / 64, 0);
    for (std::size_t t = 0; t < vec.size(); ++t) {
      if (vec[t] != 0) nz[t >> 6] |= u64(1) << (t & 63);
    }
  }
};

struct WitnessTree {
  TreeVariant variant = TreeVariant::ones_split_binary;
  i64 X = 0, R = 0;
  SparseBitVector u, v;   // inputs as given
  i64 u_real_len = 0;     // lengths before any padding
  i64 v_real_len = 0;
  i64 leaf_ones_cap = 0;  // ones-split leaf parameter ceil(X/R)
  std::vector<i64> phantom_ones;  // sentinel positions (ones-split only)
  std::vector<TreeNode> nodes;
  int root = -1;

  const TreeNode& node(int id) const { return nodes[id]; }
  i64 output_range() const { return u_real_len + v_real_len - 1; }
  // Root convolution restricted to the real output range.
  DenseVector root_convolution() const;
};

// Ones-split construction. u must be ceil(n/R)-sparse (or max_ones-sparse
// when max_ones > 0 is passed); its ones count is padded to a power of two
// with phantom ones placed beyond every real output index, so the root
// convolution is exact on the real range and phantom witnesses are
// unreachable by in-range queries.
WitnessTree build_ones_tree(const SparseBitVector& u, const SparseBitVector& v,
                            i64 X, i64 R, i64 max_ones = 0);

// Length-split construction, binary or quad. |u| (and |v| for the quad
// variant) must be a power of two >= X; callers pad with zeros first.
WitnessTree build_length_tree(const SparseBitVector& u,
                              const SparseBitVector& v, i64 X,
                              TreeVariant variant);

// Exactly witnesses_at(u, v, k) as a set, ascending in a, truncated at
// limit. Traversal is depth first, left child first.
std::vector<std::pair<i64, i64>> enumerate_witnesses(
    const WitnessTree& tree, i64 k,
    std::optional<i64> limit = std::nullopt);

struct ReductionConfig {
  u64 R = 8;   // bucket count, power of two
  i64 X = 64;  // leaf parameter, power of two
  TreeVariant variant = TreeVariant::ones_split_binary;
  double fp_budget_factor = 2.0;  // budget = factor * n^2 / R
  int max_rehash = 8;
  u64 seed = 0;
};

struct PhaseTimings {
  double bucketing_ms = 0;
  double trees_ms = 0;
  double enumeration_ms = 0;
  double verification_ms = 0;
};

struct ReductionReport {
  std::string verdict;  // "found" | "none" | "rehash-exhausted"
  std::optional<SolutionWitness> witness;
  i64 candidates = 0;
  i64 false_positives = 0;
  int rehashes = 0;
  PhaseTimings timings;

  std::string to_json() const;
};

struct ReductionOptions {
  bool exhaustive = false;  // enumerate everything, never stop at a witness
  bool no_rehash = false;   // measurement mode: ignore the fp budget
};

// The full bucket reduction: hash into buckets, resolve overflow indices by
// direct scanning, then solve the O(R^2) sparse convolution-witness
// instances through the configured tree, verifying every candidate against
// the original values and rehashing when false positives blow the budget.
std::optional<SolutionWitness> reduce_conv3sum(const ConvInstance& inst,
                                               const ReductionConfig& cfg,
                                               ReductionReport* report = nullptr,
                                               ReductionOptions opts = {});

}  // namespace fgl
