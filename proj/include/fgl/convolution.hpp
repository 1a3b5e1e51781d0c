#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fgl/instances.hpp"

namespace fgl {

// Non-negative integer vector. Entries must be small enough that any
// convolution entry fits in 63 bits; the convolution routines check the
// bound max(u) * max(v) * min(|u|,|v|) <= 2^62 before doing any work.
struct DenseVector {
  std::vector<i64> entries;

  i64 size() const { return static_cast<i64>(entries.size()); }
  friend bool operator==(const DenseVector&, const DenseVector&) = default;
};

// Binary vector stored as its sorted ones positions.
struct SparseBitVector {
  i64 length = 0;
  std::vector<i64> ones;  // strictly increasing, all in [0, length)

  i64 ones_count() const { return static_cast<i64>(ones.size()); }
  bool is_sparse(i64 r) const { return ones_count() <= r; }
};

void validate(const DenseVector& v);
void validate(const SparseBitVector& v);

DenseVector dense(const SparseBitVector& v);

// w[k] = sum_i u[i] * v[k-i], exact. Output length |u|+|v|-1.
DenseVector convolve_naive(const DenseVector& u, const DenseVector& v);

// Same contract, computed with number-theoretic transforms modulo three
// word-size primes and CRT reconstruction. Bitwise-identical to
// convolve_naive; a floating transform is deliberately not used anywhere.
DenseVector convolve_fast(const DenseVector& u, const DenseVector& v);

// All pairs (a, b) with a + b = k, u[a] = v[b] = 1, ascending in a. This is
// the brute-force oracle the witness trees are checked against.
std::vector<std::pair<i64, i64>> witnesses_at(const SparseBitVector& u,
                                              const SparseBitVector& v, i64 k);

// Ones exactly at the bucket members.
SparseBitVector characteristic_vector(const std::vector<i64>& bucket, i64 n);

// {"len":...,"ones":[...]} / {"entries":[...]}
std::string to_json(const SparseBitVector& v);
std::string to_json(const DenseVector& v);
SparseBitVector sparse_from_json(const std::string& text);
DenseVector dense_from_json(const std::string& text);

}  // namespace fgl
