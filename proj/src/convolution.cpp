#include "fgl/convolution.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

namespace fgl {

namespace {

constexpr i64 kEntryBudget = i64(1) << 62;

void check_convolution_bound(const DenseVector& u, const DenseVector& v) {
  validate(u);
  validate(v);
  i64 mu = 0, mv = 0;
  for (i64 x : u.entries) mu = std::max(mu, x);
  for (i64 x : v.entries) mv = std::max(mv, x);
  const i64 terms = std::min(u.size(), v.size());
  if (mu > 0 && mv > 0 && terms > 0) {
    const unsigned __int128 bound = static_cast<unsigned __int128>(mu) *
                                    static_cast<unsigned __int128>(mv) *
                                    static_cast<unsigned __int128>(terms);
    if (bound > static_cast<unsigned __int128>(kEntryBudget)) {
      throw std::overflow_error(
          "convolution entries could exceed 2^62 "
          "(max(u)*max(v)*min(|u|,|v|) too large)");
    }
  }
}

// Three NTT-friendly primes whose product exceeds 2^62 by a wide margin, so
// CRT reconstruction of any in-budget entry is exact.
struct NttPrime {
  u64 mod;
  u64 root;  // primitive root
};
constexpr NttPrime kPrimes[3] = {
    {998244353, 3}, {1004535809, 3}, {469762049, 3}};

u64 pow_mod(u64 base, u64 exp, u64 mod) {
  u64 r = 1;
  base %= mod;
  while (exp) {
    if (exp & 1) r = r * base % mod;
    base = base * base % mod;
    exp >>= 1;
  }
  return r;
}

void ntt(std::vector<u64>& a, bool invert, u64 mod, u64 root) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    u64 w = pow_mod(root, (mod - 1) / len, mod);
    if (invert) w = pow_mod(w, mod - 2, mod);
    for (std::size_t i = 0; i < n; i += len) {
      u64 wn = 1;
      for (std::size_t k = 0; k < len / 2; ++k) {
        const u64 x = a[i + k];
        const u64 y = a[i + k + len / 2] * wn % mod;
        a[i + k] = x + y < mod ? x + y : x + y - mod;
        a[i + k + len / 2] = x >= y ? x - y : x + mod - y;
        wn = wn * w % mod;
      }
    }
  }
  if (invert) {
    const u64 inv_n = pow_mod(n % mod, mod - 2, mod);
    for (auto& x : a) x = x * inv_n % mod;
  }
}

std::vector<u64> convolve_mod(const std::vector<i64>& u,
                              const std::vector<i64>& v, const NttPrime& p) {
  const std::size_t out = u.size() + v.size() - 1;
  std::size_t n = 1;
  while (n < out) n <<= 1;
  std::vector<u64> fa(n, 0), fb(n, 0);
  for (std::size_t i = 0; i < u.size(); ++i) fa[i] = u[i] % p.mod;
  for (std::size_t i = 0; i < v.size(); ++i) fb[i] = v[i] % p.mod;
  ntt(fa, false, p.mod, p.root);
  ntt(fb, false, p.mod, p.root);
  for (std::size_t i = 0; i < n; ++i) fa[i] = fa[i] * fb[i] % p.mod;
  ntt(fa, true, p.mod, p.root);
  fa.resize(out);
  return fa;
}

// Garner reconstruction of x < 2^62 from residues mod the three primes.
i64 crt3(u64 r0, u64 r1, u64 r2) {
  const u64 p0 = kPrimes[0].mod, p1 = kPrimes[1].mod, p2 = kPrimes[2].mod;
  const u64 inv_p0_p1 = pow_mod(p0 % p1, p1 - 2, p1);
  const u64 inv_p01_p2 = pow_mod(p0 % p2 * (p1 % p2) % p2, p2 - 2, p2);
  const u64 t1 = (r1 + p1 - r0 % p1) % p1 * inv_p0_p1 % p1;
  const unsigned __int128 x01 =
      static_cast<unsigned __int128>(t1) * p0 + r0;  // < p0*p1 < 2^61
  const u64 x01_mod_p2 = static_cast<u64>(x01 % p2);
  const u64 t2 = (r2 + p2 - x01_mod_p2) % p2 * inv_p01_p2 % p2;
  const unsigned __int128 full =
      x01 + static_cast<unsigned __int128>(t2) *
                (static_cast<unsigned __int128>(p0) * p1);
  return static_cast<i64>(full);
}

}  // namespace

void validate(const DenseVector& v) {
  for (i64 x : v.entries) {
    if (x < 0) throw std::invalid_argument("DenseVector entries must be >= 0");
  }
}

void validate(const SparseBitVector& v) {
  if (v.length < 0) throw std::invalid_argument("SparseBitVector length < 0");
  i64 prev = -1;
  for (i64 p : v.ones) {
    if (p <= prev || p < 0 || p >= v.length) {
      throw std::invalid_argument(
          "SparseBitVector ones must be strictly increasing in [0, length)");
    }
    prev = p;
  }
}

DenseVector dense(const SparseBitVector& v) {
  validate(v);
  DenseVector d;
  d.entries.assign(v.length, 0);
  for (i64 p : v.ones) d.entries[p] = 1;
  return d;
}

DenseVector convolve_naive(const DenseVector& u, const DenseVector& v) {
  check_convolution_bound(u, v);
  if (u.entries.empty() || v.entries.empty()) return {};
  DenseVector w;
  w.entries.assign(u.size() + v.size() - 1, 0);
  for (i64 i = 0; i < u.size(); ++i) {
    const i64 ui = u.entries[i];
    if (ui == 0) continue;
    for (i64 j = 0; j < v.size(); ++j) {
      w.entries[i + j] += ui * v.entries[j];
    }
  }
  return w;
}

DenseVector convolve_fast(const DenseVector& u, const DenseVector& v) {
  check_convolution_bound(u, v);
  if (u.entries.empty() || v.entries.empty()) return {};
  const auto m0 = convolve_mod(u.entries, v.entries, kPrimes[0]);
  const auto m1 = convolve_mod(u.entries, v.entries, kPrimes[1]);
  const auto m2 = convolve_mod(u.entries, v.entries, kPrimes[2]);
  DenseVector w;
  w.entries.resize(m0.size());
  for (std::size_t i = 0; i < m0.size(); ++i) {
    w.entries[i] = crt3(m0[i], m1[i], m2[i]);
  }
  return w;
}

std::vector<std::pair<i64, i64>> witnesses_at(const SparseBitVector& u,
                                              const SparseBitVector& v,
                                              i64 k) {
  validate(u);
  validate(v);
  if (k < 0 || k > u.length + v.length - 2) {
    throw std::out_of_range("witnesses_at: k outside output range");
  }
  std::vector<std::pair<i64, i64>> out;
  for (i64 a : u.ones) {
    const i64 b = k - a;
    if (b < 0) break;  // ones ascend, b only shrinks
    if (b >= v.length) continue;
    if (std::binary_search(v.ones.begin(), v.ones.end(), b)) {
      out.emplace_back(a, b);
    }
  }
  return out;
}

SparseBitVector characteristic_vector(const std::vector<i64>& bucket, i64 n) {
  SparseBitVector v;
  v.length = n;
  v.ones = bucket;
  std::sort(v.ones.begin(), v.ones.end());
  v.ones.erase(std::unique(v.ones.begin(), v.ones.end()), v.ones.end());
  validate(v);
  return v;
}

std::string to_json(const SparseBitVector& v) {
  nlohmann::json j{{"len", v.length}, {"ones", v.ones}};
  return j.dump();
}

std::string to_json(const DenseVector& v) {
  nlohmann::json j{{"entries", v.entries}};
  return j.dump();
}

SparseBitVector sparse_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  SparseBitVector v;
  v.length = j.at("len").get<i64>();
  v.ones = j.at("ones").get<std::vector<i64>>();
  validate(v);
  return v;
}

DenseVector dense_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  DenseVector v;
  v.entries = j.at("entries").get<std::vector<i64>>();
  validate(v);
  return v;
}

}  // namespace fgl
