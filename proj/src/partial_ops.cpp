#include "fgl/partial_ops.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

namespace fgl {

namespace {

template <typename Set>
std::vector<Set> chunk_impl(const Set& s, i64 cap) {
  if (cap < 1) throw std::invalid_argument("chunk_locations: cap must be >= 1");
  std::vector<Set> out;
  for (std::size_t i = 0; i < s.size(); i += cap) {
    out.emplace_back(s.begin() + i,
                     s.begin() + std::min<std::size_t>(i + cap, s.size()));
  }
  return out;
}

}  // namespace

std::vector<IndexSet> chunk_locations(const IndexSet& s, i64 cap) {
  return chunk_impl(s, cap);
}

std::vector<IndexSet2D> chunk_locations(const IndexSet2D& s, i64 cap) {
  return chunk_impl(s, cap);
}

std::map<i64, i64> partial_convolution(const DenseVector& u,
                                       const DenseVector& v, const IndexSet& s,
                                       PartialConvStrategy strategy) {
  validate(u);
  validate(v);
  const i64 out_len = u.size() + v.size() - 1;
  for (i64 i : s) {
    if (i < 0 || i >= out_len) {
      throw std::out_of_range("partial_convolution: index outside output");
    }
  }
  std::map<i64, i64> out;
  if (strategy == PartialConvStrategy::full_transform) {
    const DenseVector w = convolve_fast(u, v);
    for (i64 i : s) out[i] = w.entries[i];
    return out;
  }
  std::vector<i64> nz;
  for (i64 a = 0; a < u.size(); ++a) {
    if (u.entries[a] != 0) nz.push_back(a);
  }
  for (i64 i : s) {
    i64 acc = 0;
    for (i64 a : nz) {
      if (a > i) break;
      const i64 b = i - a;
      if (b < v.size()) acc += u.entries[a] * v.entries[b];
    }
    out[i] = acc;
  }
  return out;
}

PCIndex pc_index_build(const DenseVector& u, const IndexSet& s) {
  validate(u);
  PCIndex idx;
  idx.u = u;
  idx.s = s;
  for (i64 a = 0; a < u.size(); ++a) {
    if (u.entries[a] != 0) idx.nonzeros.push_back(a);
  }
  return idx;
}

std::map<i64, i64> pc_index_query(const PCIndex& idx, const DenseVector& v) {
  validate(v);
  if (v.size() > idx.u.size()) {
    throw std::invalid_argument(
        "pc_index_query: query vector longer than the preprocessed bound");
  }
  std::map<i64, i64> out;
  for (i64 i : idx.s) {
    if (i >= idx.u.size() + v.size() - 1) {
      out[i] = 0;
      continue;
    }
    i64 acc = 0;
    for (i64 a : idx.nonzeros) {
      if (a > i) break;
      const i64 b = i - a;
      if (b < v.size()) acc += idx.u.entries[a] * v.entries[b];
    }
    out[i] = acc;
  }
  return out;
}

SparseMatrix::SparseMatrix(i64 rows, i64 cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) {
    throw std::invalid_argument("matrix dimensions must be >= 0");
  }
  row_entries_.resize(rows);
  dense_mirror_ = rows < 64 && cols < 64;
  if (dense_mirror_) dense_.assign(rows * cols, 0);
}

SparseMatrix SparseMatrix::from_dense(
    const std::vector<std::vector<i64>>& rows) {
  const i64 r = static_cast<i64>(rows.size());
  const i64 c = r == 0 ? 0 : static_cast<i64>(rows[0].size());
  SparseMatrix m(r, c);
  for (i64 i = 0; i < r; ++i) {
    if (static_cast<i64>(rows[i].size()) != c) {
      throw std::invalid_argument("ragged dense matrix");
    }
    for (i64 j = 0; j < c; ++j) {
      if (rows[i][j] != 0) m.set(i, j, rows[i][j]);
    }
  }
  return m;
}

void SparseMatrix::set(i64 r, i64 c, i64 value) {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_) {
    throw std::out_of_range("SparseMatrix::set");
  }
  auto& row = row_entries_[r];
  auto it = std::lower_bound(
      row.begin(), row.end(), c,
      [](const std::pair<i64, i64>& e, i64 col) { return e.first < col; });
  if (it != row.end() && it->first == c) {
    if (value == 0) {
      row.erase(it);
    } else {
      it->second = value;
    }
  } else if (value != 0) {
    row.insert(it, {c, value});
  }
  if (dense_mirror_) dense_[r * cols_ + c] = value;
}

i64 SparseMatrix::get(i64 r, i64 c) const {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_) {
    throw std::out_of_range("SparseMatrix::get");
  }
  if (dense_mirror_) return dense_[r * cols_ + c];
  const auto& row = row_entries_[r];
  auto it = std::lower_bound(
      row.begin(), row.end(), c,
      [](const std::pair<i64, i64>& e, i64 col) { return e.first < col; });
  return (it != row.end() && it->first == c) ? it->second : 0;
}

i64 SparseMatrix::nnz() const {
  i64 total = 0;
  for (const auto& r : row_entries_) total += static_cast<i64>(r.size());
  return total;
}

SparseMatrix SparseMatrix::transposed() const {
  SparseMatrix t(cols_, rows_);
  for (i64 r = 0; r < rows_; ++r) {
    for (const auto& [c, v] : row_entries_[r]) t.set(c, r, v);
  }
  return t;
}

std::string SparseMatrix::to_json() const {
  nlohmann::json nz = nlohmann::json::array();
  for (i64 r = 0; r < rows_; ++r) {
    for (const auto& [c, v] : row_entries_[r]) {
      nz.push_back({r, c, v});
    }
  }
  nlohmann::json j{{"rows", rows_}, {"cols", cols_}, {"nonzeros", nz}};
  return j.dump();
}

SparseMatrix SparseMatrix::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  SparseMatrix m(j.at("rows").get<i64>(), j.at("cols").get<i64>());
  for (const auto& e : j.at("nonzeros")) {
    m.set(e.at(0).get<i64>(), e.at(1).get<i64>(), e.at(2).get<i64>());
  }
  return m;
}

namespace {

i64 sparse_dot(const std::vector<std::pair<i64, i64>>& x,
               const std::vector<std::pair<i64, i64>>& y, Semiring sr) {
  i64 acc = 0;
  auto ix = x.begin();
  auto iy = y.begin();
  while (ix != x.end() && iy != y.end()) {
    if (ix->first < iy->first) {
      ++ix;
    } else if (iy->first < ix->first) {
      ++iy;
    } else {
      if (sr == Semiring::boolean) return 1;
      acc += ix->second * iy->second;
      ++ix;
      ++iy;
    }
  }
  return acc;
}

}  // namespace

std::map<std::pair<i64, i64>, i64> partial_matmul(const SparseMatrix& a,
                                                  const SparseMatrix& b,
                                                  const IndexSet2D& s,
                                                  Semiring semiring) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("partial_matmul: dimension mismatch");
  }
  const SparseMatrix bt = b.transposed();
  std::map<std::pair<i64, i64>, i64> out;
  for (const auto& [i, j] : s) {
    if (i < 0 || i >= a.rows() || j < 0 || j >= b.cols()) {
      throw std::out_of_range("partial_matmul: entry outside the product");
    }
    out[{i, j}] = sparse_dot(a.row(i), bt.row(j), semiring);
  }
  return out;
}

PMMIndex pmm_index_build(const SparseMatrix& a,
                         const std::vector<IndexSet2D>& sets) {
  PMMIndex idx;
  idx.a = a;
  idx.a_by_col = a.transposed();
  idx.sets = sets;
  return idx;
}

std::map<std::pair<i64, i64>, i64> pmm_index_query(const PMMIndex& idx,
                                                   std::size_t which,
                                                   const SparseMatrix& b,
                                                   Semiring semiring) {
  if (which >= idx.sets.size()) {
    throw std::out_of_range("pmm_index_query: unknown set index");
  }
  return partial_matmul(idx.a, b, idx.sets[which], semiring);
}

ShiftMatrixPair build_shift_matrices(const std::vector<i64>& u_i) {
  const i64 x = static_cast<i64>(u_i.size());
  if (x == 0) throw std::invalid_argument("build_shift_matrices: empty input");
  ShiftMatrixPair p;
  p.X = x;
  p.u = u_i;
  p.right = SparseMatrix(x, x);
  p.left = SparseMatrix(x, x);
  for (i64 r = 0; r < x; ++r) {
    for (i64 c = 0; c < x; ++c) {
      if (c + r < x && u_i[c + r] != 0) p.right.set(r, c, u_i[c + r]);
      if (c - r >= 0 && u_i[c - r] != 0) p.left.set(r, c, u_i[c - r]);
    }
  }
  return p;
}

VBlocks build_v_blocks(const std::vector<std::vector<i64>>& subvectors) {
  if (subvectors.empty()) {
    throw std::invalid_argument("build_v_blocks: no sub-vectors");
  }
  const i64 x = static_cast<i64>(subvectors[0].size());
  VBlocks vb;
  vb.X = x;
  vb.columns = static_cast<i64>(subvectors.size());
  const i64 nblocks = (vb.columns + x - 1) / x;
  for (i64 blk = 0; blk < nblocks; ++blk) {
    SparseMatrix m(x, x);
    for (i64 c = 0; c < x; ++c) {
      const i64 col = blk * x + c;
      if (col >= vb.columns) break;
      const auto& sub = subvectors[col];
      if (static_cast<i64>(sub.size()) != x) {
        throw std::invalid_argument("build_v_blocks: ragged sub-vector");
      }
      for (i64 r = 0; r < x; ++r) {
        if (sub[r] != 0) m.set(r, c, sub[r]);
      }
    }
    vb.blocks.push_back(std::move(m));
  }
  return vb;
}

std::vector<std::vector<i64>> leaf_conv_via_matmul(const ShiftMatrixPair& pair,
                                                   const SparseMatrix& v_block,
                                                   Semiring semiring,
                                                   i64 chunk_cap) {
  const i64 x = pair.X;
  if (v_block.rows() != x || v_block.cols() != x) {
    throw std::invalid_argument("leaf_conv_via_matmul: block must be X x X");
  }
  // Row-reverse the block so shifted dot products become convolution
  // diagonals instead of correlation lags.
  SparseMatrix jv(x, x);
  for (i64 r = 0; r < x; ++r) {
    for (const auto& [c, v] : v_block.row(r)) jv.set(x - 1 - r, c, v);
  }

  IndexSet2D all;
  all.reserve(x * x);
  for (i64 r = 0; r < x; ++r) {
    for (i64 c = 0; c < x; ++c) all.emplace_back(r, c);
  }
  const auto chunks =
      chunk_locations(all, chunk_cap > 0 ? chunk_cap : static_cast<i64>(x * x));

  std::vector<std::vector<i64>> out(x, std::vector<i64>(2 * x - 1, 0));
  for (const auto& chunk : chunks) {
    const auto hi = partial_matmul(pair.right, jv, chunk, semiring);
    const auto lo = partial_matmul(pair.left, jv, chunk, semiring);
    for (const auto& [rc, value] : hi) {
      const auto [r, c] = rc;
      out[c][x - 1 + r] = value;  // (U x JV)[r][c] = w_c[X-1+r]
    }
    for (const auto& [rc, value] : lo) {
      const auto [r, c] = rc;
      out[c][x - 1 - r] = value;  // (U' x JV)[r][c] = w_c[X-1-r]
    }
  }
  return out;
}

namespace {

// Cuts a sparse vector into sub-vectors of length exactly X (zero padded)
// with at most ones_cap ones each, recording original offsets.
std::vector<SpecialSubVector> partition_special(const SparseBitVector& vec,
                                                i64 x, i64 ones_cap) {
  std::vector<SpecialSubVector> subs;
  // First cut by ones count, then cut every long piece into X-length slices.
  std::vector<std::pair<i64, i64>> pieces;  // [begin, end)
  i64 begin = 0;
  i64 count = 0;
  for (i64 one : vec.ones) {
    if (count == ones_cap) {  // close the current piece before this one
      pieces.emplace_back(begin, one);
      begin = one;
      count = 0;
    }
    ++count;
  }
  pieces.emplace_back(begin, std::max(vec.length, begin + 1));

  auto one_it = vec.ones.begin();
  for (const auto& [lo, hi] : pieces) {
    for (i64 s = lo; s < hi; s += x) {
      SpecialSubVector sub;
      sub.offset = s;
      sub.real_len = std::min(x, hi - s);
      while (one_it != vec.ones.end() && *one_it < s + sub.real_len) {
        sub.ones.push_back(*one_it - s);
        ++one_it;
      }
      subs.push_back(std::move(sub));
    }
  }
  return subs;
}

void pad_subvector_list(std::vector<SpecialSubVector>& subs, i64 target) {
  while (static_cast<i64>(subs.size()) < target) {
    SpecialSubVector empty;
    empty.offset = subs.empty() ? 0 : subs.back().offset + subs.back().real_len;
    empty.real_len = 0;
    subs.push_back(std::move(empty));
  }
}

std::vector<i64> sub_dense(const SpecialSubVector& sub, i64 x) {
  std::vector<i64> d(x, 0);
  for (i64 p : sub.ones) d[p] = 1;
  return d;
}

}  // namespace

DenseVector SpecialQuadTree::root_convolution() const {
  DenseVector out;
  out.entries.assign(output_range(), 0);
  const auto& r = nodes[root];
  for (i64 t = 0; t < static_cast<i64>(r.vec.size()); ++t) {
    const i64 k = r.base + t;
    if (k >= 0 && k < output_range()) out.entries[k] = r.vec[t];
  }
  return out;
}

SpecialQuadTree build_special_quad_tree(const SparseBitVector& u,
                                        const SparseBitVector& v, i64 X,
                                        i64 R, SpecialLeafBackend backend,
                                        i64 max_ones) {
  validate(u);
  validate(v);
  if (X < 1 || (X & (X - 1)) != 0) {
    throw std::invalid_argument("X must be a power of two");
  }
  if (R < 1 || (R & (R - 1)) != 0) {
    throw std::invalid_argument("R must be a power of two");
  }
  const i64 bound_u = max_ones > 0 ? max_ones : (u.length + R - 1) / R;
  const i64 bound_v = max_ones > 0 ? max_ones : (v.length + R - 1) / R;
  if (u.ones_count() > bound_u || v.ones_count() > bound_v) {
    throw std::invalid_argument("vector denser than declared sparsity");
  }

  SpecialQuadTree tree;
  tree.X = X;
  tree.R = R;
  tree.backend = backend;
  tree.u_real_len = u.length;
  tree.v_real_len = v.length;

  const i64 ones_cap = std::max<i64>(1, (X + R - 1) / R);
  tree.u_subs = partition_special(u, X, ones_cap);
  tree.v_subs = partition_special(v, X, ones_cap);
  tree.q_u = static_cast<i64>(tree.u_subs.size());
  tree.q_v = static_cast<i64>(tree.v_subs.size());
  i64 slots = 1;
  while (slots < std::max(tree.q_u, tree.q_v)) slots <<= 1;
  pad_subvector_list(tree.u_subs, slots);
  pad_subvector_list(tree.v_subs, slots);

  // Leaf convolutions, one per sub-vector pair, in original coordinates.
  std::vector<std::vector<i64>> leaf_vecs(slots * slots);
  if (backend == SpecialLeafBackend::direct) {
    for (i64 i = 0; i < slots; ++i) {
      for (i64 j = 0; j < slots; ++j) {
        std::vector<i64> w(2 * X - 1, 0);
        for (i64 a : tree.u_subs[i].ones) {
          for (i64 b : tree.v_subs[j].ones) w[a + b] += 1;
        }
        leaf_vecs[i * slots + j] = std::move(w);
      }
    }
  } else {
    std::vector<std::vector<i64>> v_cols;
    v_cols.reserve(slots);
    for (const auto& sub : tree.v_subs) v_cols.push_back(sub_dense(sub, X));
    const VBlocks vb = build_v_blocks(v_cols);
    const i64 chunk_cap = std::max<i64>(1, X * X / R);
    for (i64 i = 0; i < slots; ++i) {
      const auto pair = build_shift_matrices(sub_dense(tree.u_subs[i], X));
      for (i64 blk = 0; blk < static_cast<i64>(vb.blocks.size()); ++blk) {
        const auto convs = leaf_conv_via_matmul(pair, vb.blocks[blk],
                                                Semiring::integer, chunk_cap);
        for (i64 c = 0; c < X; ++c) {
          const i64 j = blk * X + c;
          if (j >= slots) break;
          leaf_vecs[i * slots + j] = convs[c];
        }
      }
    }
  }

  // Assemble the quad tree bottom-up over slot ranges.
  auto build = [&](auto&& self, i64 ulo, i64 uhi, i64 vlo, i64 vhi) -> int {
    SpecialQuadNode node;
    node.u_lo = ulo;
    node.u_hi = uhi;
    node.v_lo = vlo;
    node.v_hi = vhi;
    if (uhi - ulo == 1 && vhi - vlo == 1) {
      node.is_leaf = true;
      node.base = tree.u_subs[ulo].offset + tree.v_subs[vlo].offset;
      node.vec = std::move(leaf_vecs[ulo * slots + vlo]);
      tree.nodes.push_back(std::move(node));
      return static_cast<int>(tree.nodes.size()) - 1;
    }
    node.is_leaf = false;
    const i64 um = (ulo + uhi) / 2;
    const i64 vm = (vlo + vhi) / 2;
    node.child[0] = self(self, ulo, um, vlo, vm);
    node.child[1] = self(self, ulo, um, vm, vhi);
    node.child[2] = self(self, um, uhi, vlo, vm);
    node.child[3] = self(self, um, uhi, vm, vhi);
    i64 lo = INT64_MAX, hi = INT64_MIN;
    for (int c : node.child) {
      const auto& ch = tree.nodes[c];
      lo = std::min(lo, ch.base);
      hi = std::max(hi, ch.base + static_cast<i64>(ch.vec.size()));
    }
    node.base = lo;
    node.vec.assign(hi - lo, 0);
    for (int c : node.child) {
      const auto& ch = tree.nodes[c];
      for (i64 t = 0; t < static_cast<i64>(ch.vec.size()); ++t) {
        node.vec[ch.base - lo + t] += ch.vec[t];
      }
    }
    tree.nodes.push_back(std::move(node));
    return static_cast<int>(tree.nodes.size()) - 1;
  };
  tree.root = build(build, 0, slots, 0, slots);
  return tree;
}

std::vector<std::pair<i64, i64>> enumerate_witnesses(
    const SpecialQuadTree& tree, i64 k, std::optional<i64> limit) {
  if (k < 0 || k >= tree.output_range()) {
    throw std::out_of_range("enumerate_witnesses: k outside output range");
  }
  std::vector<std::pair<i64, i64>> out;
  auto visit = [&](auto&& self, int id) -> void {
    const auto& node = tree.nodes[id];
    const i64 t = k - node.base;
    if (t < 0 || t >= static_cast<i64>(node.vec.size()) || node.vec[t] == 0) {
      return;
    }
    if (!node.is_leaf) {
      for (int c : node.child) self(self, c);
      return;
    }
    const auto& us = tree.u_subs[node.u_lo];
    const auto& vs = tree.v_subs[node.v_lo];
    for (i64 a : us.ones) {
      const i64 b_local = k - us.offset - a - vs.offset;
      if (b_local < 0 || b_local >= vs.real_len) continue;
      if (std::binary_search(vs.ones.begin(), vs.ones.end(), b_local)) {
        out.emplace_back(us.offset + a, vs.offset + b_local);
      }
    }
  };
  visit(visit, tree.root);
  std::sort(out.begin(), out.end());
  if (limit && static_cast<i64>(out.size()) > *limit) out.resize(*limit);
  return out;
}

}  // namespace fgl
