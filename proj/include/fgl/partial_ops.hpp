#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fgl/convolution.hpp"
#include "fgl/instances.hpp"

namespace fgl {

using IndexSet = std::vector<i64>;  // sorted, distinct
using IndexSet2D = std::vector<std::pair<i64, i64>>;

enum class Semiring { integer, boolean };

// Order-preserving partition of S into chunks of at most cap entries.
std::vector<IndexSet> chunk_locations(const IndexSet& s, i64 cap);
std::vector<IndexSet2D> chunk_locations(const IndexSet2D& s, i64 cap);

enum class PartialConvStrategy { sparse_accumulate, full_transform };

// Convolution values at the indices in S only. Both strategies return
// identical maps; sparse_accumulate walks the nonzeros of u per index,
// full_transform computes the whole convolution and selects.
std::map<i64, i64> partial_convolution(
    const DenseVector& u, const DenseVector& v, const IndexSet& s,
    PartialConvStrategy strategy = PartialConvStrategy::sparse_accumulate);

// Preprocess u and S once, then answer partial convolutions against many v.
struct PCIndex {
  DenseVector u;
  IndexSet s;
  std::vector<i64> nonzeros;  // positions of nonzero entries of u
};

PCIndex pc_index_build(const DenseVector& u, const IndexSet& s);
std::map<i64, i64> pc_index_query(const PCIndex& idx, const DenseVector& v);

// Row-sparse integer matrix with a dense mirror below 64x64; the hardness
// regime is sparse input, so the sparse representation is primary.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(i64 rows, i64 cols);

  static SparseMatrix from_dense(const std::vector<std::vector<i64>>& rows);

  i64 rows() const { return rows_; }
  i64 cols() const { return cols_; }
  void set(i64 r, i64 c, i64 value);
  i64 get(i64 r, i64 c) const;
  const std::vector<std::pair<i64, i64>>& row(i64 r) const {
    return row_entries_[r];
  }
  i64 nnz() const;
  SparseMatrix transposed() const;

  std::string to_json() const;  // {"rows":..,"cols":..,"nonzeros":[[i,j,v],..]}
  static SparseMatrix from_json(const std::string& text);

 private:
  i64 rows_ = 0, cols_ = 0;
  std::vector<std::vector<std::pair<i64, i64>>> row_entries_;  // (col, value)
  bool dense_mirror_ = false;
  std::vector<i64> dense_;
};

// Product entries at S only, via per-entry sparse dot products. In the
// boolean semiring values are OR/AND (any overlap gives 1).
std::map<std::pair<i64, i64>, i64> partial_matmul(
    const SparseMatrix& a, const SparseMatrix& b, const IndexSet2D& s,
    Semiring semiring = Semiring::integer);

struct PMMIndex {
  SparseMatrix a;
  SparseMatrix a_by_col;  // transpose, so queries can dot without rescans
  std::vector<IndexSet2D> sets;
};

// Build cost is proportional to SIZE(S) plus the nonzeros of A.
PMMIndex pmm_index_build(const SparseMatrix& a,
                         const std::vector<IndexSet2D>& sets);
std::map<std::pair<i64, i64>, i64> pmm_index_query(
    const PMMIndex& idx, std::size_t which, const SparseMatrix& b,
    Semiring semiring = Semiring::integer);

// Shift matrices of a length-X binary sub-vector. Position 0 is least
// significant; "shift right by k" drops the k-1 low positions and appends
// k-1 zeros high, so right.row(k-1)[c] = u[c + k - 1], and symmetrically
// left.row(k-1)[c] = u[c - (k - 1)].
struct ShiftMatrixPair {
  i64 X = 0;
  std::vector<i64> u;  // the source sub-vector
  SparseMatrix right;  // U_i
  SparseMatrix left;   // U'_i
};

ShiftMatrixPair build_shift_matrices(const std::vector<i64>& u_i);

// The X x (q) matrix whose i-th column is the i-th padded sub-vector of v,
// tiled into X x X blocks.
struct VBlocks {
  i64 X = 0;
  i64 columns = 0;  // number of real sub-vector columns
  std::vector<SparseMatrix> blocks;
};

VBlocks build_v_blocks(const std::vector<std::vector<i64>>& subvectors);

// Convolutions of u_i with each column of V_j, reassembled from the two
// shift-matrix products. The product is taken against the row-reversed
// block: with row reversal, (U x JV)[r][c] covers convolution offsets
// X-1+r and (U' x JV)[r][c] covers offsets X-1-r; this derived index map is
// locked by the oracle tests. chunk_cap > 0 routes the product entries
// through partial_matmul in chunks of that size.
std::vector<std::vector<i64>> leaf_conv_via_matmul(
    const ShiftMatrixPair& pair, const SparseMatrix& v_block,
    Semiring semiring = Semiring::integer, i64 chunk_cap = 0);

enum class SpecialLeafBackend { direct, matmul };

// One padded sub-vector: original offset into the source vector, real
// (pre-padding) length, and local ones positions.
struct SpecialSubVector {
  i64 offset = 0;
  i64 real_len = 0;
  std::vector<i64> ones;  // local positions, all < real_len
};

struct SpecialQuadNode {
  i64 u_lo = 0, u_hi = 0;  // sub-vector slot ranges
  i64 v_lo = 0, v_hi = 0;
  i64 base = 0;  // vec[t] counts pairs with original sum base + t
  std::vector<i64> vec;
  std::array<int, 4> child{-1, -1, -1, -1};
  bool is_leaf = true;
};

// The special-leaf quad tree: vectors are cut into ones-bounded, length-X,
// zero-padded sub-vectors; leaves hold single sub-vector pairs; node
// convolutions are stored against original output indices so the root equals
// convolve(u, v) on the real range with padding transparently unmapped.
struct SpecialQuadTree {
  i64 X = 0, R = 0;
  SpecialLeafBackend backend = SpecialLeafBackend::direct;
  i64 u_real_len = 0, v_real_len = 0;
  i64 q_u = 0, q_v = 0;  // sub-vector counts before power-of-two padding
  std::vector<SpecialSubVector> u_subs, v_subs;  // padded to equal power of 2
  std::vector<SpecialQuadNode> nodes;
  int root = -1;

  i64 output_range() const { return u_real_len + v_real_len - 1; }
  DenseVector root_convolution() const;
};

SpecialQuadTree build_special_quad_tree(const SparseBitVector& u,
                                        const SparseBitVector& v, i64 X,
                                        i64 R, SpecialLeafBackend backend,
                                        i64 max_ones = 0);

std::vector<std::pair<i64, i64>> enumerate_witnesses(
    const SpecialQuadTree& tree, i64 k,
    std::optional<i64> limit = std::nullopt);

}  // namespace fgl
