#include "fgl/witness_trees.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <stdexcept>

#include "fgl/hashing.hpp"
#include "fgl/partial_ops.hpp"
#include "fgl/rng.hpp"
#include "json.hpp"

namespace fgl {

namespace {

bool is_pow2(i64 x) { return x > 0 && (x & (x - 1)) == 0; }

i64 pow2_ceil(i64 x) {
  i64 p = 1;
  while (p < x) p <<= 1;
  return p;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

std::string tree_variant_name(TreeVariant v) {
  switch (v) {
    case TreeVariant::ones_split_binary:
      return "ones-split";
    case TreeVariant::length_split_binary:
      return "length-split";
    case TreeVariant::length_split_quad:
      return "quad";
    case TreeVariant::special_quad_direct:
      return "special-direct";
    case TreeVariant::special_quad_matmul:
      return "special-matmul";
  }
  return "ones-split";
}

TreeVariant tree_variant_from_name(const std::string& name) {
  if (name == "ones-split") return TreeVariant::ones_split_binary;
  if (name == "length-split") return TreeVariant::length_split_binary;
  if (name == "quad") return TreeVariant::length_split_quad;
  if (name == "special-direct") return TreeVariant::special_quad_direct;
  if (name == "special-matmul") return TreeVariant::special_quad_matmul;
  throw std::invalid_argument("unknown tree variant: " + name);
}

DenseVector WitnessTree::root_convolution() const {
  DenseVector out;
  out.entries.assign(std::max<i64>(output_range(), 0), 0);
  if (root < 0) return out;
  const TreeNode& r = nodes[root];
  for (i64 t = 0; t < static_cast<i64>(r.vec.size()); ++t) {
    const i64 k = r.base + t;
    if (k >= 0 && k < output_range()) out.entries[k] = r.vec[t];
  }
  return out;
}

WitnessTree build_ones_tree(const SparseBitVector& u, const SparseBitVector& v,
                            i64 X, i64 R, i64 max_ones) {
  validate(u);
  validate(v);
  if (!is_pow2(X) || !is_pow2(R)) {
    throw std::invalid_argument("X and R must be powers of two");
  }
  const i64 declared =
      max_ones > 0 ? max_ones : (u.length + R - 1) / R;
  if (u.ones_count() > declared) {
    throw std::invalid_argument("build_ones_tree: u denser than declared");
  }

  WitnessTree tree;
  tree.variant = TreeVariant::ones_split_binary;
  tree.X = X;
  tree.R = R;
  tree.u = u;
  tree.v = v;
  tree.u_real_len = u.length;
  tree.v_real_len = v.length;
  tree.leaf_ones_cap = std::max<i64>(1, (X + R - 1) / R);

  // Pad the ones count to a power of two with phantoms placed beyond every
  // real output index, so phantom witnesses can never alias a real query.
  std::vector<i64> ones = u.ones;
  const i64 m = static_cast<i64>(ones.size());
  if (m > tree.leaf_ones_cap) {
    const i64 target = pow2_ceil(m);
    const i64 phantom_base = u.length + v.length;
    for (i64 t = 0; t < target - m; ++t) {
      tree.phantom_ones.push_back(phantom_base + t);
      ones.push_back(phantom_base + t);
    }
  }
  const i64 covered_len =
      ones.empty() ? u.length : std::max(u.length, ones.back() + 1);

  const i64 vlen = v.length;
  const i64 real_ones = u.ones_count();
  auto leaf_fill = [&](TreeNode& node) {
    node.vec.assign((node.u_hi - node.u_lo) + vlen - 1, 0);
    auto lo = std::lower_bound(ones.begin(), ones.end(), node.u_lo);
    auto hi = std::lower_bound(ones.begin(), ones.end(), node.u_hi);
    node.ones_lo = std::min<i64>(lo - ones.begin(), real_ones);
    node.ones_hi = std::min<i64>(hi - ones.begin(), real_ones);
    for (auto it = lo; it != hi; ++it) {
      for (i64 b : v.ones) node.vec[*it + b - node.base] += 1;
    }
  };

  auto build = [&](auto&& self, i64 o_lo, i64 o_hi, i64 p_lo, i64 p_hi)
      -> int {
    TreeNode node;
    node.u_lo = p_lo;
    node.u_hi = p_hi;
    node.base = p_lo;
    if (o_hi - o_lo <= tree.leaf_ones_cap) {
      node.is_leaf = true;
      leaf_fill(node);
      node.rebuild_nz();
      tree.nodes.push_back(std::move(node));
      return static_cast<int>(tree.nodes.size()) - 1;
    }
    node.is_leaf = false;
    const i64 o_mid = (o_lo + o_hi) / 2;
    const i64 p_mid = ones[o_mid];  // right child starts at its first one
    node.child[0] = self(self, o_lo, o_mid, p_lo, p_mid);
    node.child[1] = self(self, o_mid, o_hi, p_mid, p_hi);
    node.vec.assign((p_hi - p_lo) + vlen - 1, 0);
    for (int c : {node.child[0], node.child[1]}) {
      const TreeNode& ch = tree.nodes[c];
      for (i64 t = 0; t < static_cast<i64>(ch.vec.size()); ++t) {
        node.vec[ch.base - node.base + t] += ch.vec[t];
      }
    }
    node.rebuild_nz();
    tree.nodes.push_back(std::move(node));
    return static_cast<int>(tree.nodes.size()) - 1;
  };

  if (vlen == 0) {
    TreeNode node;
    node.u_lo = 0;
    node.u_hi = covered_len;
    node.is_leaf = true;
    node.rebuild_nz();
    tree.nodes.push_back(std::move(node));
    tree.root = 0;
    return tree;
  }
  tree.root = build(build, 0, static_cast<i64>(ones.size()), 0, covered_len);
  return tree;
}

WitnessTree build_length_tree(const SparseBitVector& u,
                              const SparseBitVector& v, i64 X,
                              TreeVariant variant) {
  validate(u);
  validate(v);
  if (variant != TreeVariant::length_split_binary &&
      variant != TreeVariant::length_split_quad) {
    throw std::invalid_argument("build_length_tree: not a length variant");
  }
  const bool quad = variant == TreeVariant::length_split_quad;
  if (!is_pow2(X)) throw std::invalid_argument("X must be a power of two");
  if (!is_pow2(u.length) || u.length < X) {
    throw std::invalid_argument(
        "build_length_tree: |u| must be a power of two >= X (pad first)");
  }
  if (quad && (!is_pow2(v.length) || v.length < X)) {
    throw std::invalid_argument(
        "build_length_tree: |v| must be a power of two >= X (pad first)");
  }

  WitnessTree tree;
  tree.variant = variant;
  tree.X = X;
  tree.u = u;
  tree.v = v;
  tree.u_real_len = u.length;
  tree.v_real_len = v.length;

  auto ones_range = [](const std::vector<i64>& ones, i64 lo, i64 hi) {
    return std::make_pair(std::lower_bound(ones.begin(), ones.end(), lo),
                          std::lower_bound(ones.begin(), ones.end(), hi));
  };

  if (!quad) {
    const i64 vlen = v.length;
    auto build = [&](auto&& self, i64 lo, i64 hi) -> int {
      TreeNode node;
      node.u_lo = lo;
      node.u_hi = hi;
      node.base = lo;
      node.vec.assign((hi - lo) + vlen - 1, 0);
      if (hi - lo == X) {
        node.is_leaf = true;
        auto [a0, a1] = ones_range(u.ones, lo, hi);
        node.ones_lo = a0 - u.ones.begin();
        node.ones_hi = a1 - u.ones.begin();
        for (auto it = a0; it != a1; ++it) {
          for (i64 b : v.ones) node.vec[*it + b - lo] += 1;
        }
        node.rebuild_nz();
        tree.nodes.push_back(std::move(node));
        return static_cast<int>(tree.nodes.size()) - 1;
      }
      node.is_leaf = false;
      const i64 mid = lo + (hi - lo) / 2;
      node.child[0] = self(self, lo, mid);
      node.child[1] = self(self, mid, hi);
      for (int c : {node.child[0], node.child[1]}) {
        const TreeNode& ch = tree.nodes[c];
        for (i64 t = 0; t < static_cast<i64>(ch.vec.size()); ++t) {
          node.vec[ch.base - node.base + t] += ch.vec[t];
        }
      }
      node.rebuild_nz();
      tree.nodes.push_back(std::move(node));
      return static_cast<int>(tree.nodes.size()) - 1;
    };
    tree.root = build(build, 0, u.length);
    return tree;
  }

  auto build = [&](auto&& self, i64 ulo, i64 uhi, i64 vlo, i64 vhi) -> int {
    TreeNode node;
    node.u_lo = ulo;
    node.u_hi = uhi;
    node.v_lo = vlo;
    node.v_hi = vhi;
    node.base = ulo + vlo;
    node.vec.assign((uhi - ulo) + (vhi - vlo) - 1, 0);
    if (uhi - ulo == X) {
      node.is_leaf = true;
      auto [a0, a1] = ones_range(u.ones, ulo, uhi);
      auto [b0, b1] = ones_range(v.ones, vlo, vhi);
      node.ones_lo = a0 - u.ones.begin();
      node.ones_hi = a1 - u.ones.begin();
      for (auto ia = a0; ia != a1; ++ia) {
        for (auto ib = b0; ib != b1; ++ib) {
          node.vec[*ia + *ib - node.base] += 1;
        }
      }
      node.rebuild_nz();
      tree.nodes.push_back(std::move(node));
      return static_cast<int>(tree.nodes.size()) - 1;
    }
    node.is_leaf = false;
    const i64 um = ulo + (uhi - ulo) / 2;
    const i64 vm = vlo + (vhi - vlo) / 2;
    node.child[0] = self(self, ulo, um, vlo, vm);
    node.child[1] = self(self, ulo, um, vm, vhi);
    node.child[2] = self(self, um, uhi, vlo, vm);
    node.child[3] = self(self, um, uhi, vm, vhi);
    for (int c : node.child) {
      const TreeNode& ch = tree.nodes[c];
      for (i64 t = 0; t < static_cast<i64>(ch.vec.size()); ++t) {
        node.vec[ch.base - node.base + t] += ch.vec[t];
      }
    }
    node.rebuild_nz();
    tree.nodes.push_back(std::move(node));
    return static_cast<int>(tree.nodes.size()) - 1;
  };
  tree.root = build(build, 0, u.length, 0, v.length);
  return tree;
}

std::vector<std::pair<i64, i64>> enumerate_witnesses(const WitnessTree& tree,
                                                     i64 k,
                                                     std::optional<i64> limit) {
  if (k < 0 || k >= tree.output_range()) {
    throw std::out_of_range("enumerate_witnesses: k outside output range");
  }
  std::vector<std::pair<i64, i64>> out;
  const bool quad = tree.variant == TreeVariant::length_split_quad;
  const i64 want = limit.value_or(-1);

  auto visit = [&](auto&& self, int id) -> bool {  // returns "stop early"
    const TreeNode& node = tree.nodes[id];
    if (!node.nonzero_at(k)) return false;
    if (!node.is_leaf) {
      for (int c : node.child) {
        if (c < 0) break;
        if (self(self, c)) return true;
      }
      return false;
    }
    auto a0 = tree.u.ones.begin() + node.ones_lo;
    auto a1 = tree.u.ones.begin() + node.ones_hi;
    for (auto it = a0; it != a1; ++it) {
      const i64 b = k - *it;
      if (b < 0) break;
      if (quad) {
        if (b < node.v_lo || b >= node.v_hi) continue;
      } else if (b >= tree.v.length) {
        continue;
      }
      if (std::binary_search(tree.v.ones.begin(), tree.v.ones.end(), b)) {
        out.emplace_back(*it, b);
        if (!quad && want >= 0 && static_cast<i64>(out.size()) >= want) {
          return true;
        }
      }
    }
    return false;
  };
  visit(visit, tree.root);
  if (quad) {
    std::sort(out.begin(), out.end());
    if (want >= 0 && static_cast<i64>(out.size()) > want) out.resize(want);
  }
  return out;
}

std::string ReductionReport::to_json() const {
  nlohmann::json j;
  j["verdict"] = verdict;
  j["witness"] = witness ? nlohmann::json::parse(witness_to_json(witness))
                         : nlohmann::json(nullptr);
  j["candidates"] = candidates;
  j["false_positives"] = false_positives;
  j["rehashes"] = rehashes;
  j["timings_ms"] = {{"bucketing", timings.bucketing_ms},
                     {"trees", timings.trees_ms},
                     {"enumeration", timings.enumeration_ms},
                     {"verification", timings.verification_ms}};
  return j.dump();
}

namespace {

// A uniform view over the four tree families used by the reduction.
struct BuiltTree {
  std::optional<WitnessTree> plain;
  std::optional<SpecialQuadTree> special;

  std::vector<std::pair<i64, i64>> enumerate(i64 k) const {
    return plain ? enumerate_witnesses(*plain, k)
                 : enumerate_witnesses(*special, k);
  }
  i64 output_range() const {
    return plain ? plain->output_range() : special->output_range();
  }
};

BuiltTree build_pair_tree(const SparseBitVector& va, const SparseBitVector& vb,
                          const ReductionConfig& cfg, i64 max_ones) {
  BuiltTree out;
  const i64 n = va.length;
  switch (cfg.variant) {
    case TreeVariant::ones_split_binary:
      out.plain = build_ones_tree(va, vb, cfg.X, static_cast<i64>(cfg.R),
                                  max_ones);
      break;
    case TreeVariant::length_split_binary:
    case TreeVariant::length_split_quad: {
      SparseBitVector ua = va;
      ua.length = pow2_ceil(n);
      const i64 x = std::min<i64>(cfg.X, ua.length);
      if (cfg.variant == TreeVariant::length_split_binary) {
        out.plain = build_length_tree(ua, vb, x, cfg.variant);
      } else {
        SparseBitVector ub = vb;
        ub.length = pow2_ceil(n);
        out.plain = build_length_tree(ua, ub, std::min<i64>(x, ub.length),
                                      cfg.variant);
      }
      break;
    }
    case TreeVariant::special_quad_direct:
    case TreeVariant::special_quad_matmul:
      out.special = build_special_quad_tree(
          va, vb, cfg.X, static_cast<i64>(cfg.R),
          cfg.variant == TreeVariant::special_quad_direct
              ? SpecialLeafBackend::direct
              : SpecialLeafBackend::matmul,
          max_ones);
      break;
  }
  return out;
}

}  // namespace

std::optional<SolutionWitness> reduce_conv3sum(const ConvInstance& inst,
                                               const ReductionConfig& cfg,
                                               ReductionReport* report,
                                               ReductionOptions opts) {
  validate_instance(inst);
  if (!is_pow2(static_cast<i64>(cfg.R)) || !is_pow2(cfg.X)) {
    throw std::invalid_argument("reduce_conv3sum: R and X must be powers of 2");
  }
  if (cfg.max_rehash < 0 || cfg.fp_budget_factor < 0) {
    throw std::invalid_argument("reduce_conv3sum: bad config");
  }
  const i64 n = inst.n();
  int s_bits = 0;
  while ((u64(1) << s_bits) < cfg.R) ++s_bits;
  s_bits = std::max(s_bits, 1);

  ReductionReport rep;
  SplitMix64 gen(cfg.seed);
  const double budget = cfg.fp_budget_factor * static_cast<double>(n) *
                        static_cast<double>(n) / static_cast<double>(cfg.R);

  for (int attempt = 0; attempt <= cfg.max_rehash; ++attempt) {
    rep.rehashes = attempt;
    const HashFn h = draw_hash(gen, s_bits);
    const u64 R = h.R();

    auto t0 = std::chrono::steady_clock::now();
    const BucketDecomposition dec = build_buckets(inst, h);
    std::optional<SolutionWitness> found = scan_overflow(inst, dec);
    rep.timings.bucketing_ms += ms_since(t0);
    if (found && !opts.exhaustive) {
      rep.verdict = "found";
      rep.witness = found;
      if (report) *report = rep;
      return found;
    }

    const std::vector<u64> offsets = sum_target_offsets(h);
    bool over_budget = false;
    i64 attempt_fps = 0;  // the rehash budget is per hash draw

    for (u64 a = 0; a < R && !over_budget; ++a) {
      if (static_cast<i64>(dec.buckets[a].size()) > dec.threshold) continue;
      if (dec.buckets[a].empty()) continue;
      const SparseBitVector va = characteristic_vector(dec.buckets[a], n);
      for (u64 b = a; b < R && !over_budget; ++b) {
        if (static_cast<i64>(dec.buckets[b].size()) > dec.threshold) continue;
        if (dec.buckets[b].empty()) continue;

        std::set<u64> targets;
        for (u64 e : offsets) targets.insert((a + b + e) % R);
        i64 demanded = 0;
        for (u64 c : targets) demanded += dec.buckets[c].size();
        if (demanded == 0) continue;

        const SparseBitVector vb = characteristic_vector(dec.buckets[b], n);
        t0 = std::chrono::steady_clock::now();
        const BuiltTree tree = build_pair_tree(va, vb, cfg, dec.threshold);
        rep.timings.trees_ms += ms_since(t0);

        for (u64 c : targets) {
          for (i64 t : dec.buckets[c]) {
            auto te = std::chrono::steady_clock::now();
            const auto pairs = tree.enumerate(t);
            rep.timings.enumeration_ms += ms_since(te);

            auto tv = std::chrono::steady_clock::now();
            for (const auto& [i, j] : pairs) {
              ++rep.candidates;
              if (inst.a[i] + inst.a[j] == inst.a[t]) {
                SolutionWitness w{WitnessKind::conv,
                                  {std::min(i, j), std::max(i, j), -1}};
                if (!found) found = w;
                if (!opts.exhaustive) {
                  rep.timings.verification_ms += ms_since(tv);
                  rep.verdict = "found";
                  rep.witness = found;
                  if (report) *report = rep;
                  return found;
                }
              } else {
                ++rep.false_positives;
                ++attempt_fps;
              }
            }
            rep.timings.verification_ms += ms_since(tv);
            if (!opts.no_rehash &&
                static_cast<double>(attempt_fps) > budget) {
              over_budget = true;
              break;
            }
          }
          if (over_budget) break;
        }
      }
    }

    if (!over_budget) {
      rep.verdict = found ? "found" : "none";
      rep.witness = found;
      if (report) *report = rep;
      return found;
    }
    // Budget blown: discard this hash and redraw.
  }

  rep.verdict = "rehash-exhausted";
  rep.witness = std::nullopt;
  if (report) *report = rep;
  return std::nullopt;
}

}  // namespace fgl
