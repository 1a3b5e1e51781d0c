#include "fgl/histogram.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "fgl/rng.hpp"
#include "json.hpp"

namespace fgl {

char symbol_char(int symbol) {
  if (symbol < 0 || symbol > 25) throw std::invalid_argument("symbol range");
  return static_cast<char>('a' + symbol);
}

int char_symbol(char c, int alphabet) {
  const int s = c - 'a';
  if (s < 0 || s >= alphabet) {
    throw std::invalid_argument(std::string("character '") + c +
                                "' outside the alphabet");
  }
  return s;
}

i64 ParikhVector::total() const {
  i64 t = 0;
  for (i64 c : counts) t += c;
  return t;
}

ParikhVector parikh(const std::string& text, int ell) {
  if (ell < 1) throw std::invalid_argument("parikh: ell must be >= 1");
  ParikhVector psi;
  psi.counts.assign(ell, 0);
  for (char c : text) psi.counts[char_symbol(c, ell)] += 1;
  return psi;
}

// ---------------------------------------------------------------------------
// HistogramIndex

HistogramIndex::HistogramIndex(std::string text, int ell, HistMode mode)
    : text_(std::move(text)), ell_(ell), mode_(mode) {
  if (ell_ < 2) throw std::invalid_argument("histogram index needs ell >= 2");
  if (mode_ == HistMode::binary_interval && ell_ != 2) {
    throw std::invalid_argument("binary-interval mode requires ell = 2");
  }
  const i64 n = size();
  const int lanes = ell_ - 1;
  int bits = std::max(1, static_cast<int>(std::bit_width(static_cast<u64>(n))));
  if (lanes * bits <= 64) {
    pack_bits_ = bits;
    packed_.assign(n + 1, 0);
    u64 acc = 0;
    for (i64 p = 0; p < n; ++p) {
      const int s = char_symbol(text_[p], ell_);
      if (s < lanes) acc += u64(1) << (s * pack_bits_);
      packed_[p + 1] = acc;
    }
  } else {
    prefix_.assign((n + 1) * ell_, 0);
    for (i64 p = 0; p < n; ++p) {
      const int s = char_symbol(text_[p], ell_);
      for (int t = 0; t < ell_; ++t) {
        prefix_[(p + 1) * ell_ + t] = prefix_[p * ell_ + t] + (t == s ? 1 : 0);
      }
    }
  }
  if (mode_ == HistMode::binary_interval) {
    interval_.assign(n + 1, {0, 0});
    for (i64 m = 1; m <= n; ++m) {
      i64 lo = n + 1, hi = -1;
      for (i64 p = 0; p + m <= n; ++p) {
        const i64 c0 = prefix_count(p + m, 0) - prefix_count(p, 0);
        lo = std::min(lo, c0);
        hi = std::max(hi, c0);
      }
      interval_[m] = {lo, hi};
    }
  }
}

i64 HistogramIndex::prefix_count(i64 p, int symbol) const {
  if (p < 0 || p > size() || symbol < 0 || symbol >= ell_) {
    throw std::out_of_range("prefix_count");
  }
  if (packed()) {
    if (symbol < ell_ - 1) {
      const u64 mask =
          pack_bits_ == 64 ? ~u64(0) : (u64(1) << pack_bits_) - 1;
      return static_cast<i64>((packed_[p] >> (symbol * pack_bits_)) & mask);
    }
    i64 others = 0;
    for (int t = 0; t < ell_ - 1; ++t) others += prefix_count(p, t);
    return p - others;
  }
  return prefix_[p * ell_ + symbol];
}

u64 HistogramIndex::pack_query(const ParikhVector& psi,
                               bool& representable) const {
  const u64 lane_max =
      pack_bits_ == 64 ? ~u64(0) : (u64(1) << pack_bits_) - 1;
  u64 target = 0;
  representable = true;
  for (int t = 0; t < ell_ - 1; ++t) {
    const i64 c = psi.counts[t];
    if (c < 0 || static_cast<u64>(c) > lane_max) {
      representable = false;
      return 0;
    }
    target |= static_cast<u64>(c) << (t * pack_bits_);
  }
  return target;
}

bool HistogramIndex::decide(const ParikhVector& psi) const {
  if (static_cast<int>(psi.counts.size()) != ell_) {
    throw std::invalid_argument("query alphabet mismatch");
  }
  const i64 m = psi.total();
  if (m < 1) throw std::invalid_argument("empty queries are rejected");
  const i64 n = size();
  if (m > n) return false;
  for (i64 c : psi.counts) {
    if (c < 0 || c > n) return false;
  }
  if (mode_ == HistMode::binary_interval) {
    const auto [lo, hi] = interval_[m];
    return psi.counts[0] >= lo && psi.counts[0] <= hi;
  }
  if (packed()) {
    bool ok = true;
    const u64 target = pack_query(psi, ok);
    if (!ok) return false;
    const u64* k = packed_.data();
    for (i64 p = 0; p + m <= n; ++p) {
      if (k[p + m] - k[p] == target) return true;
    }
    return false;
  }
  for (i64 p = 0; p + m <= n; ++p) {
    bool match = true;
    for (int t = 0; t < ell_ - 1 && match; ++t) {
      match = static_cast<i64>(prefix_[(p + m) * ell_ + t] -
                               prefix_[p * ell_ + t]) == psi.counts[t];
    }
    if (match) return true;
  }
  return false;
}

std::vector<i64> HistogramIndex::report(const ParikhVector& psi) const {
  if (static_cast<int>(psi.counts.size()) != ell_) {
    throw std::invalid_argument("query alphabet mismatch");
  }
  const i64 m = psi.total();
  if (m < 1) throw std::invalid_argument("empty queries are rejected");
  const i64 n = size();
  std::vector<i64> out;
  if (m > n) return out;
  for (i64 c : psi.counts) {
    if (c < 0 || c > n) return out;
  }
  if (packed()) {
    bool ok = true;
    const u64 target = pack_query(psi, ok);
    if (!ok) return out;
    const u64* k = packed_.data();
    for (i64 p = 0; p + m <= n; ++p) {
      if (k[p + m] - k[p] == target) out.push_back(p);
    }
    return out;
  }
  for (i64 p = 0; p + m <= n; ++p) {
    bool match = true;
    for (int t = 0; t < ell_ - 1 && match; ++t) {
      match = static_cast<i64>(prefix_[(p + m) * ell_ + t] -
                               prefix_[p * ell_ + t]) == psi.counts[t];
    }
    if (match) out.push_back(p);
  }
  return out;
}

HistogramIndex hist_build(const std::string& text, int ell, HistMode mode) {
  return HistogramIndex(text, ell, mode);
}

bool hist_decide(const HistogramIndex& idx, const ParikhVector& psi) {
  return idx.decide(psi);
}

std::vector<i64> hist_report(const HistogramIndex& idx,
                             const ParikhVector& psi) {
  return idx.report(psi);
}

// ---------------------------------------------------------------------------
// Encodings

namespace {

struct SchemeParams {
  int digits = 0;
  i64 r = 0;
};

int exact_log2(u64 x) {
  if (x == 0 || (x & (x - 1)) != 0) return -1;
  return static_cast<int>(std::bit_width(x)) - 1;
}

SchemeParams scheme_params(u64 R, int ell, int scheme) {
  SchemeParams p;
  switch (scheme) {
    case 1:
      if (ell < 2) throw std::invalid_argument("scheme 1 needs ell >= 2");
      p.digits = ell;
      break;
    case 2:
      if (ell < 3) throw std::invalid_argument("scheme 2 needs ell >= 3");
      p.digits = ell - 1;
      break;
    case 3:
      if (ell < 4) throw std::invalid_argument("scheme 3 needs ell >= 4");
      p.digits = ell - 2;
      break;
    default:
      throw std::invalid_argument("scheme must be 1, 2 or 3");
  }
  const int s = exact_log2(R);
  if (s < 0 || s % p.digits != 0 || s / p.digits == 0) {
    throw std::invalid_argument(
        "R must be r^d for a power of two r >= 2 and d numeric digits");
  }
  p.r = i64(1) << (s / p.digits);
  return p;
}

i64 digit_of(u64 value, int t, i64 r) {
  const int bits = static_cast<int>(std::bit_width(static_cast<u64>(r))) - 1;
  return static_cast<i64>((value >> (t * bits)) & (r - 1));
}

i64 digit_sum(u64 value, int digits, i64 r) {
  i64 s = 0;
  for (int t = 0; t < digits; ++t) s += digit_of(value, t, r);
  return s;
}

void append_run(std::string& s, int symbol, i64 count) {
  s.append(static_cast<std::size_t>(count), symbol_char(symbol));
}

}  // namespace

i64 EncodedInstance::candidate_start(i64 block) const {
  return blocks[block].split;
}

i64 EncodedInstance::candidate_end(i64 block) const {
  return scheme == 3 ? blocks[block].split + 1 : blocks[block].split;
}

std::string EncodedInstance::to_json() const {
  nlohmann::json bounds = nlohmann::json::array();
  for (const auto& b : blocks) bounds.push_back({b.start, b.split, b.end});
  nlohmann::json j{{"scheme", scheme},
                   {"R", R},
                   {"ell", ell},
                   {"S", S},
                   {"boundaries", bounds}};
  return j.dump();
}

EncodedInstance encode(const ConvInstance& inst, const HashFn& h, u64 R,
                       int ell, int scheme) {
  validate_instance(inst);
  if (h.R() != R) {
    throw std::invalid_argument("encode: hash range must equal R");
  }
  const SchemeParams p = scheme_params(R, ell, scheme);
  EncodedInstance enc;
  enc.scheme = scheme;
  enc.R = R;
  enc.ell = ell;
  enc.r = p.r;
  enc.digits = p.digits;
  enc.h = h;

  const i64 n = inst.n();
  enc.hashed.resize(n);
  for (i64 e = 0; e < n; ++e) enc.hashed[e] = hash_eval(h, inst.a[e]);
  enc.blocks.resize(n);

  std::string& s = enc.S;
  const int d = p.digits;
  const i64 r = p.r;

  auto append_unary = [&](u64 value, bool complement) {
    for (int t = 0; t < d; ++t) {
      const i64 dig = digit_of(value, t, r);
      append_run(s, t, complement ? r - dig : dig);
    }
  };

  switch (scheme) {
    case 1: {
      for (i64 e = 0; e < n; ++e) {
        enc.blocks[e].start = static_cast<i64>(s.size());
        append_unary(enc.hashed[e], true);
        enc.blocks[e].split = static_cast<i64>(s.size());
        append_unary(enc.hashed[e], false);
        enc.blocks[e].end = static_cast<i64>(s.size());
      }
      break;
    }
    case 2: {
      const i64 partial = static_cast<i64>(ell) * r;
      for (i64 e = 0; e < n; ++e) {
        const i64 ds = digit_sum(enc.hashed[e], d, r);
        enc.blocks[e].start = static_cast<i64>(s.size());
        append_run(s, ell - 1, partial - (d * r - ds));  // pad the complement
        append_unary(enc.hashed[e], true);
        enc.blocks[e].split = static_cast<i64>(s.size());
        append_run(s, ell - 1, partial - ds);  // pad the regular encoding
        append_unary(enc.hashed[e], false);
        enc.blocks[e].end = static_cast<i64>(s.size());
      }
      break;
    }
    case 3: {
      const i64 partial = static_cast<i64>(ell - 1) * r;
      append_run(s, ell - 1, 1);  // leading separator
      for (i64 e = 0; e < n; ++e) {
        const i64 ds = digit_sum(enc.hashed[e], d, r);
        enc.blocks[e].start = static_cast<i64>(s.size());
        append_run(s, ell - 2, partial - (d * r - ds));
        append_unary(enc.hashed[e], true);
        enc.blocks[e].split = static_cast<i64>(s.size());
        append_run(s, ell - 1, 1);  // separator between the partial encodings
        append_run(s, ell - 2, partial - ds);
        append_unary(enc.hashed[e], false);
        append_run(s, ell - 1, 1);  // trailing separator
        enc.blocks[e].end = static_cast<i64>(s.size());
      }
      break;
    }
  }
  return enc;
}

// ---------------------------------------------------------------------------
// Carry sets

namespace {

CarrySet build_carry_set(i64 k, u64 base_value, u64 R, int ell, int scheme,
                         bool wrap) {
  if (k < 1) throw std::invalid_argument("carry_set: k must be >= 1");
  const SchemeParams p = scheme_params(R, ell, scheme);
  const int d = p.digits;
  const i64 r = p.r;
  const i64 ds = digit_sum(base_value, d, r);

  CarrySet cs;
  cs.k = k;
  cs.base_hash = base_value;
  cs.scheme = scheme;
  cs.ell = ell;
  cs.wrapped = wrap;

  const i64 variants = i64(1) << (d - 1);
  cs.members.reserve(variants);
  for (i64 mask = 0; mask < variants; ++mask) {
    ParikhVector v;
    v.counts.assign(ell, 0);
    i64 carry_pop = 0;
    for (int t = 0; t < d; ++t) {
      const i64 u_t = t == d - 1 ? (wrap ? 1 : 0) : ((mask >> t) & 1);
      const i64 u_prev = t == 0 ? 0 : ((mask >> (t - 1)) & 1);
      if (t < d - 1) carry_pop += (mask >> t) & 1;
      v.counts[t] =
          (r - digit_of(base_value, t, r)) + r * (k - 1) + r * u_t - u_prev;
    }
    if (scheme == 2) {
      v.counts[ell - 1] = static_cast<i64>(ell + 1) * r * k + ds -
                          (r - 1) * carry_pop - (wrap ? r : 0);
    } else if (scheme == 3) {
      v.counts[ell - 2] = static_cast<i64>(ell) * r * k + ds -
                          (r - 1) * carry_pop - (wrap ? r : 0);
      v.counts[ell - 1] = 2 * k + 1;
    }
    cs.members.push_back(std::move(v));
  }
  cs.base = cs.members[0];
  return cs;
}

}  // namespace

CarrySet carry_set(i64 k, u64 h_of_xk, u64 R, int ell, int scheme) {
  return build_carry_set(k, h_of_xk, R, ell, scheme, false);
}

CarrySet carry_set_wrapped(i64 k, u64 h_of_xk, u64 R, int ell, int scheme) {
  return build_carry_set(k, h_of_xk, R, ell, scheme, true);
}

std::vector<CarrySet> query_carry_sets(i64 k, u64 h_of_xk, const HashFn& h,
                                       int ell, int scheme) {
  const u64 R = h.R();
  std::vector<u64> deltas{0};
  if (linearity_offsets(h).size() == 2) deltas.push_back(1);
  std::vector<CarrySet> out;
  for (u64 delta : deltas) {
    const u64 base = (h_of_xk + delta) % R;
    out.push_back(build_carry_set(k, base, R, ell, scheme, false));
    out.push_back(build_carry_set(k, base, R, ell, scheme, true));
  }
  return out;
}

MatchClass classify_match(const EncodedInstance& enc, i64 start, i64 len,
                          i64 k) {
  MatchClass mc;
  const i64 n = static_cast<i64>(enc.blocks.size());
  // candidate_start is strictly increasing in the block index
  i64 lo = 0, hi = n - 1, found = -1;
  while (lo <= hi) {
    const i64 mid = (lo + hi) / 2;
    const i64 cs = enc.candidate_start(mid);
    if (cs == start) {
      found = mid;
      break;
    }
    if (cs < start) {
      lo = mid + 1;
    } else {
      hi = mid - 1;
    }
  }
  if (found < 0) return mc;
  const i64 j = found + k;
  if (j >= n) return mc;
  if (enc.candidate_end(j) != start + len) return mc;
  mc.candidate = true;
  mc.i = found;
  mc.j = j;
  return mc;
}

// ---------------------------------------------------------------------------
// Pipelines

i64 FPReport::total_matches() const {
  i64 t = 0;
  for (const auto& r : rows) t += r.matches;
  return t;
}

i64 FPReport::total_false_positives() const {
  i64 t = 0;
  for (const auto& r : rows) t += r.encoding_errors + r.false_candidates;
  return t;
}

std::string FPReport::to_csv() const {
  std::ostringstream out;
  out << "k,queries,matches,candidates,false_candidates,encoding_errors\n";
  for (const auto& r : rows) {
    out << r.k << ',' << r.queries << ',' << r.matches << ',' << r.candidates
        << ',' << r.false_candidates << ',' << r.encoding_errors << '\n';
  }
  return out.str();
}

std::optional<SolutionWitness> reporting_pipeline(const ConvInstance& inst,
                                                  u64 R, int ell, int scheme,
                                                  u64 seed, FPReport* report,
                                                  ReportingOptions opts) {
  validate_instance(inst);
  const SchemeParams p = scheme_params(R, ell, scheme);
  const i64 n = inst.n();

  std::optional<SolutionWitness> found;
  if (inst.a[0] == 0) {
    // Position difference 0: A[k] - A[k] = A[0] holds for every k.
    found = SolutionWitness{WitnessKind::conv_diff, {0, 0, -1}};
    if (!opts.exhaustive) {
      if (report) *report = {};
      return found;
    }
  }

  const int s_bits = p.digits * exact_log2(static_cast<u64>(p.r));
  SplitMix64 g(seed);
  const HashFn h = draw_hash(g, s_bits);
  const EncodedInstance enc = encode(inst, h, R, ell, scheme);
  const HistogramIndex idx = hist_build(enc.S, ell);
  const i64 N = idx.size();

  FPReport rep;
  for (i64 d = 1; d < n; ++d) {
    FPReportRow row;
    row.k = d;
    std::optional<SolutionWitness> best_for_d;
    for (const CarrySet& cs :
         query_carry_sets(d, enc.hashed[d], h, ell, scheme)) {
      ++rep.carry_sets;
      for (const ParikhVector& member : cs.members) {
        ++row.queries;
        const i64 len = member.total();
        if (len < 1 || len > N) continue;
        for (i64 pos : idx.report(member)) {
          ++row.matches;
          const MatchClass mc = classify_match(enc, pos, len, d);
          if (!mc.candidate) {
            ++row.encoding_errors;
            continue;
          }
          ++row.candidates;
          if (inst.a[mc.j] - inst.a[mc.i] == inst.a[d]) {
            SolutionWitness w{WitnessKind::conv_diff, {mc.i, mc.j, -1}};
            if (!best_for_d || w.idx < best_for_d->idx) best_for_d = w;
          } else {
            ++row.false_candidates;
          }
        }
      }
    }
    rep.rows.push_back(row);
    if (best_for_d && !found) found = best_for_d;
    if (found && !opts.exhaustive) break;
  }
  if (report) *report = std::move(rep);
  return found;
}

std::optional<SolutionWitness> decision_pipeline(const ConvInstance& inst,
                                                 const DecisionConfig& cfg) {
  validate_instance(inst);
  if (cfg.ell < 3) {
    throw std::invalid_argument("decision_pipeline requires ell >= 3");
  }
  const i64 n = inst.n();
  const int trials =
      cfg.trials > 0
          ? cfg.trials
          : std::max(1, static_cast<int>(std::bit_width(static_cast<u64>(n - 1))) + 4);

  if (inst.a[0] == 0) {
    return SolutionWitness{WitnessKind::conv_diff, {0, 0, -1}};
  }
  if (n == 1) return std::nullopt;

  // R = (scaled constant * n^{1/(ell-2)})^ell rounded to a
  // power-of-two digit base, capped by the universe and by a compute guard
  // on the encoded string length.
  const int ell = cfg.ell;
  double target_r = cfg.r_scale * std::pow(static_cast<double>(n),
                                           1.0 / (ell - 2));
  i64 r = 2;
  while (r < static_cast<i64>(target_r) && r < (i64(1) << 20)) r <<= 1;
  while (r > 2 &&
         ell * (static_cast<int>(std::bit_width(static_cast<u64>(r))) - 1) >
             58) {
    r >>= 1;
  }
  while (r > 2 && static_cast<double>(r) > 2.0 * inst.universe) r >>= 1;
  while (r > 2 && static_cast<i64>(ell) * n * r > cfg.max_string_len) r >>= 1;
  const int r_bits = static_cast<int>(std::bit_width(static_cast<u64>(r))) - 1;
  const u64 R = u64(1) << (ell * r_bits);
  const int s_bits = ell * r_bits;

  SplitMix64 g(cfg.seed);
  std::vector<i64> survivors;
  for (i64 d = 1; d < n; ++d) survivors.push_back(d);

  for (int t = 0; t < trials && !survivors.empty(); ++t) {
    const HashFn h = draw_hash(g, s_bits);
    const EncodedInstance enc = encode(inst, h, R, ell, 1);
    const HistogramIndex idx = hist_build(enc.S, ell);
    const i64 N = idx.size();
    std::vector<i64> next;
    for (i64 d : survivors) {
      bool pass = false;
      for (const CarrySet& cs : query_carry_sets(d, enc.hashed[d], h, ell, 1)) {
        for (const ParikhVector& member : cs.members) {
          const i64 len = member.total();
          if (len < 1 || len > N) continue;
          if (idx.decide(member)) {
            pass = true;
            break;
          }
        }
        if (pass) break;
      }
      if (pass) next.push_back(d);
    }
    survivors = std::move(next);
  }

  for (i64 d : survivors) {
    for (i64 i = 0; i + d <= n - 1; ++i) {
      if (inst.a[i + d] - inst.a[i] == inst.a[d]) {
        return SolutionWitness{WitnessKind::conv_diff, {i, i + d, -1}};
      }
    }
  }
  return std::nullopt;
}

std::optional<SolutionWitness> decision_pipeline(const ConvInstance& inst,
                                                 int ell, int trials,
                                                 u64 seed) {
  DecisionConfig cfg;
  cfg.ell = ell;
  cfg.trials = trials;
  cfg.seed = seed;
  return decision_pipeline(inst, cfg);
}

// ---------------------------------------------------------------------------
// Multi-level split structure

namespace {

// Largest block end <= pos (0 if none), so cuts land between full encodings.
i64 round_to_block_end(const std::vector<i64>& block_ends, i64 pos) {
  auto it = std::upper_bound(block_ends.begin(), block_ends.end(), pos);
  if (it == block_ends.begin()) return 0;
  return *std::prev(it);
}

}  // namespace

SplitStructure build_split_structure(const EncodedInstance& enc, double alpha,
                                     int levels) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must be in [0, 1]");
  }
  const i64 N = static_cast<i64>(enc.S.size());
  const i64 n = static_cast<i64>(enc.blocks.size());

  SplitStructure ss;
  ss.ell = enc.ell;
  ss.alpha = alpha;
  ss.n = n;
  ss.N = N;

  if (levels <= 0) {
    levels = 1 + static_cast<int>(
                     std::floor(alpha * std::log2(std::max<double>(n, 2))));
  }
  const int max_levels = std::max(
      1, static_cast<int>(std::bit_width(static_cast<u64>(std::max<i64>(n, 1)))));
  ss.levels = std::min(levels, max_levels);

  std::vector<i64> block_ends;
  block_ends.reserve(n);
  for (const auto& b : enc.blocks) block_ends.push_back(b.end);

  const double n_alpha = std::pow(static_cast<double>(n), alpha);
  const char star = symbol_char(enc.ell);

  auto make_part = [&](int level, int family, i64 begin, i64 end, i64 k_stars) {
    SplitPart part;
    part.level = level;
    part.family = family;
    part.s_begin = begin;
    part.s_end = end;
    const i64 len = end - begin;
    std::vector<i64> cuts;  // star insertion offsets, local to the part
    for (i64 a = 1; a <= k_stars; ++a) {
      const i64 raw = begin + a * len / (k_stars + 1);
      const i64 local = round_to_block_end(block_ends, raw) - begin;
      if (local > 0 && local < len) cuts.push_back(local);
    }
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    part.content.reserve(len + cuts.size());
    i64 prev = 0;
    for (i64 c : cuts) {
      part.content.append(enc.S, begin + prev, c - prev);
      part.stars.push_back(static_cast<i64>(part.content.size()));
      part.content.push_back(star);
      prev = c;
    }
    part.content.append(enc.S, begin + prev, len - prev);
    part.index = HistogramIndex(part.content, enc.ell + 1);
    ss.parts.push_back(std::move(part));
    return ss.parts.size() - 1;
  };

  ss.parts_by_level.resize(ss.levels);
  ss.level_guarantee.assign(ss.levels, 0);

  for (int lvl = 0; lvl < ss.levels; ++lvl) {
    const i64 pieces = i64(1) << lvl;
    auto rounded_cuts = [&](bool staggered) {
      std::vector<i64> cuts;
      const i64 count = staggered ? pieces : pieces - 1;
      for (i64 j = 0; j < count; ++j) {
        const double raw =
            staggered ? (static_cast<double>(N) / (2 * pieces) +
                         static_cast<double>(j) * N / pieces)
                      : static_cast<double>(j + 1) * N / pieces;
        const i64 cut = round_to_block_end(block_ends, static_cast<i64>(raw));
        if (cut > 0 && cut < N) cuts.push_back(cut);
      }
      std::sort(cuts.begin(), cuts.end());
      cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
      return cuts;
    };

    const std::vector<i64> f1 = rounded_cuts(false);
    const std::vector<i64> f2 = rounded_cuts(true);
    const i64 stars_per_part =
        std::max<i64>(0, static_cast<i64>(std::llround(n_alpha)) / pieces - 1);

    // Family 1 tiles [0, N]; family 2 keeps only the regions between
    // staggered cuts (its end regions are already covered by family 1).
    std::vector<std::pair<i64, i64>> f1_parts, f2_parts;
    {
      i64 prev = 0;
      for (i64 c : f1) {
        f1_parts.emplace_back(prev, c);
        prev = c;
      }
      f1_parts.emplace_back(prev, N);
      for (std::size_t t = 0; t + 1 < f2.size(); ++t) {
        f2_parts.emplace_back(f2[t], f2[t + 1]);
      }
    }
    for (const auto& [b, e] : f1_parts) {
      if (e > b) {
        ss.parts_by_level[lvl].push_back(
            make_part(lvl, 1, b, e, stars_per_part));
      }
    }
    for (const auto& [b, e] : f2_parts) {
      if (e > b) {
        ss.parts_by_level[lvl].push_back(
            make_part(lvl, 2, b, e, stars_per_part));
      }
    }

    // Containment guarantee: a window crossing a family-1 cut must fit
    // inside the family-2 part around that cut.
    if (lvl == 0) {
      ss.level_guarantee[0] = N;
    } else {
      i64 guard = N;
      for (i64 c : f1) {
        i64 slack = 0;
        for (const auto& [b, e] : f2_parts) {
          if (b < c && c < e) {
            slack = std::min(c - b, e - c);
            break;
          }
        }
        guard = std::min(guard, slack);
      }
      ss.level_guarantee[lvl] = guard;
    }
  }
  return ss;
}

std::vector<i64> split_query(const SplitStructure& ss, const ParikhVector& v,
                             i64 k) {
  (void)k;  // carried for report bookkeeping
  if (static_cast<int>(v.counts.size()) != ss.ell) {
    throw std::invalid_argument("split_query: alphabet mismatch");
  }
  const i64 len = v.total();
  if (len < 1) throw std::invalid_argument("empty queries are rejected");
  std::set<i64> hits;
  if (len > ss.N) return {};

  int lvl = 0;
  if (2 * len < ss.N) {
    const double ratio = static_cast<double>(ss.N) / static_cast<double>(len);
    lvl = std::min<int>(ss.levels - 1,
                        std::max(0, static_cast<int>(std::log2(ratio)) - 1));
  }
  while (lvl > 0 && ss.level_guarantee[lvl] < len) --lvl;

  for (std::size_t part_id : ss.parts_by_level[lvl]) {
    const SplitPart& part = ss.parts[part_id];
    const i64 content_len = static_cast<i64>(part.content.size());
    for (i64 t = 0; t <= static_cast<i64>(part.stars.size()); ++t) {
      if (len + t > content_len) break;
      ParikhVector probe;
      probe.counts = v.counts;
      probe.counts.push_back(t);
      for (i64 q : part.index.report(probe)) {
        const i64 stars_before =
            std::lower_bound(part.stars.begin(), part.stars.end(), q) -
            part.stars.begin();
        hits.insert(part.s_begin + (q - stars_before));
      }
    }
  }
  return {hits.begin(), hits.end()};
}

}  // namespace fgl
