#include "fgl/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "fgl/convolution.hpp"
#include "fgl/histogram.hpp"
#include "fgl/instances.hpp"
#include "fgl/parallel.hpp"
#include "fgl/partial_ops.hpp"
#include "fgl/rng.hpp"
#include "fgl/witness_trees.hpp"
#include "json.hpp"

namespace fgl::cli {

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n == 0 ? 0.0
               : (n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]));
}

// "n=512,plant=conv,universe=1073741824"
ConvInstance instance_from_gen_spec(const std::string& spec, u64 seed) {
  i64 n = 0;
  i64 universe = kDefaultUniverse;
  PlantKind plant = PlantKind::none;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw CLI::ValidationError("--gen expects k=v[,k=v...]: " + item);
    }
    const std::string key = item.substr(0, eq);
    const std::string val = item.substr(eq + 1);
    if (key == "n") {
      n = std::stoll(val);
    } else if (key == "universe") {
      universe = std::stoll(val);
    } else if (key == "plant") {
      plant = plant_kind_from_name(val);
    } else {
      throw CLI::ValidationError("--gen: unknown key " + key);
    }
  }
  if (n <= 0) throw CLI::ValidationError("--gen needs n=<count>");
  return generate(n, universe, seed, plant);
}

void write_text(const std::string& path, const std::string& text,
                std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

struct SolveArgs {
  std::string pipeline;
  std::string in_file;
  std::string gen_spec;
  u64 seed = 0;
  bool check = false;
  u64 R = 8;
  i64 X = 64;
  std::string variant = "ones-split";
  i64 rbase = 8;
  int ell = 0;
  int scheme = 1;
  int trials = 0;
};

int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  if (a.in_file.empty() == a.gen_spec.empty()) {
    err << "solve: exactly one of --in / --gen is required\n";
    return 1;
  }
  const ConvInstance inst = a.in_file.empty()
                                ? instance_from_gen_spec(a.gen_spec, a.seed)
                                : load_instance(a.in_file);

  nlohmann::json verdict;
  verdict["pipeline"] = a.pipeline;
  verdict["n"] = inst.n();
  std::optional<SolutionWitness> w;
  bool diff_semantics = false;

  if (a.pipeline == "lemma1-tree" || a.pipeline == "matmul-tree") {
    ReductionConfig cfg;
    cfg.R = a.R;
    cfg.X = a.X;
    cfg.seed = a.seed;
    cfg.variant = a.pipeline == "matmul-tree"
                      ? TreeVariant::special_quad_matmul
                      : tree_variant_from_name(a.variant);
    ReductionReport rep;
    w = reduce_conv3sum(inst, cfg, &rep);
    verdict["verdict"] = rep.verdict;
    verdict["report"] = nlohmann::json::parse(rep.to_json());
  } else if (a.pipeline == "histogram-report" ||
             a.pipeline == "histogram-decide") {
    diff_semantics = true;
    if (a.ell == 0) {
      err << "solve: histogram pipelines require --ell\n";
      return 1;
    }
    if (a.pipeline == "histogram-report") {
      const int digits = a.scheme == 1   ? a.ell
                         : a.scheme == 2 ? a.ell - 1
                                         : a.ell - 2;
      u64 R = 1;
      for (int t = 0; t < digits; ++t) R *= static_cast<u64>(a.rbase);
      FPReport rep;
      w = reporting_pipeline(inst, R, a.ell, a.scheme, a.seed, &rep);
      verdict["verdict"] = w ? "found" : "none";
      verdict["false_positives"] = rep.total_false_positives();
      verdict["carry_sets"] = rep.carry_sets;
    } else {
      w = decision_pipeline(inst, a.ell, a.trials, a.seed);
      verdict["verdict"] = w ? "found" : "none";
    }
  } else {
    err << "solve: unknown pipeline " << a.pipeline << "\n";
    return 1;
  }

  verdict["witness"] = nlohmann::json::parse(witness_to_json(w));

  int status = 0;
  if (w && !validate_witness(inst, *w)) {
    err << "solve: pipeline returned a dishonest witness\n";
    status = 2;
  }
  if (a.check) {
    const auto oracle = diff_semantics ? solve_conv3sum_diff_naive(inst)
                                       : solve_conv3sum_naive(inst);
    const bool agree = oracle.has_value() == w.has_value();
    verdict["check"] = agree ? "ok" : "mismatch";
    if (!agree) {
      err << "solve: pipeline disagrees with the naive oracle\n";
      status = 2;
    }
  }
  out << verdict.dump() << "\n";
  return status;
}

struct FpArgs {
  std::string mode = "lemma1";
  i64 n = 2048;
  u64 R = 16;
  i64 X = 256;
  i64 rbase = 8;
  int ell = 3;
  int scheme = 1;
  i64 samples = 30;
  u64 seed = 1;
  std::string out_file;
};

int cmd_fp_measure(const FpArgs& a, std::ostream& out, std::ostream& err) {
  std::ostringstream csv;
  csv << "n,R,ell,samples,measured_mean,predicted_bound,ratio\n";
  if (a.samples > 0 && a.mode == "lemma1") {
    SplitMix64 g(a.seed);
    std::vector<u64> seeds;
    for (i64 i = 0; i < a.samples; ++i) seeds.push_back(g.next());
    std::vector<double> fps(a.samples, 0.0);
    parallel_for(a.samples, [&](i64 i) {
      const ConvInstance inst =
          generate(a.n, kDefaultUniverse, seeds[i], PlantKind::none);
      ReductionConfig cfg;
      cfg.R = a.R;
      cfg.X = a.X;
      cfg.seed = seeds[i] ^ 0x5ca1ab1e;
      ReductionReport rep;
      reduce_conv3sum(inst, cfg, &rep, {.exhaustive = true, .no_rehash = true});
      fps[i] = static_cast<double>(rep.false_positives);
    });
    double mean = 0;
    for (double f : fps) mean += f;
    mean /= static_cast<double>(a.samples);
    const double predicted = static_cast<double>(a.n) *
                             static_cast<double>(a.n) /
                             static_cast<double>(a.R);
    csv << a.n << ',' << a.R << ",0," << a.samples << ',' << mean << ','
        << predicted << ',' << mean / predicted << "\n";
  } else if (a.samples > 0 && a.mode == "lemma3") {
    const int digits = a.scheme == 1   ? a.ell
                       : a.scheme == 2 ? a.ell - 1
                                       : a.ell - 2;
    u64 R = 1;
    for (int t = 0; t < digits; ++t) R *= static_cast<u64>(a.rbase);
    int s_bits = 0;
    for (u64 t = R; t > 1; t >>= 1) ++s_bits;
    // accumulate (k, instance) samples until the requested count is reached
    const i64 per_instance = std::max<i64>(1, a.n - 1);
    const i64 instances = (a.samples + per_instance - 1) / per_instance;
    SplitMix64 g(a.seed);
    std::vector<u64> seeds;
    for (i64 i = 0; i < instances; ++i) seeds.push_back(g.next());
    std::vector<double> fp_sum(instances, 0.0);
    std::vector<double> set_count(instances, 0.0);
    double string_len = 0;
    // Direct Monte-Carlo of the carry-set false-positive rate: query the
    // carry set of every position difference and count reported matches
    // that are not honest witnesses.
    parallel_for(instances, [&](i64 i) {
      const ConvInstance inst =
          generate(a.n, kDefaultUniverse, seeds[i], PlantKind::none);
      SplitMix64 hg(seeds[i] ^ 0xfee1900d);
      const HashFn h = draw_hash(hg, s_bits);
      const EncodedInstance enc = encode(inst, h, R, a.ell, a.scheme);
      const HistogramIndex idx = hist_build(enc.S, a.ell);
      const i64 len = static_cast<i64>(enc.S.size());
      if (i == 0) string_len = static_cast<double>(len);
      i64 fps = 0, sets = 0;
      for (i64 d = 1; d < inst.n(); ++d) {
        const CarrySet cs = carry_set(d, enc.hashed[d], R, a.ell, a.scheme);
        ++sets;
        for (const auto& member : cs.members) {
          const i64 m = member.total();
          if (m < 1 || m > len) continue;
          for (i64 pos : hist_report(idx, member)) {
            const MatchClass mc = classify_match(enc, pos, m, d);
            const bool honest = mc.candidate &&
                                inst.a[mc.j] - inst.a[mc.i] == inst.a[d];
            if (!honest) ++fps;
          }
        }
      }
      fp_sum[i] = static_cast<double>(fps);
      set_count[i] = static_cast<double>(sets);
    });
    double total_fp = 0, total_sets = 0;
    for (i64 i = 0; i < instances; ++i) {
      total_fp += fp_sum[i];
      total_sets += set_count[i];
    }
    const double mean = total_sets > 0 ? total_fp / total_sets : 0.0;
    const double predicted =
        std::pow(2.0, a.ell - 1) * string_len /
        std::pow(static_cast<double>(R),
                 1.0 - 1.0 / static_cast<double>(a.ell));
    csv << a.n << ',' << R << ',' << a.ell << ',' << instances * per_instance
        << ',' << mean << ',' << predicted << ',' << mean / predicted << "\n";
  } else if (a.samples > 0) {
    err << "fp-measure: unknown mode " << a.mode << "\n";
    return 1;
  }
  write_text(a.out_file, csv.str(), out);
  return 0;
}

struct TradeoffArgs {
  std::string param = "x";
  std::string variant = "ones-split";
  i64 n = 4096;
  u64 R = 8;
  std::vector<i64> sweep;
  int reps = 5;
  u64 seed = 1;
  int ell = 3;
  int scheme = 1;
  i64 rbase = 8;
  std::string out_file;
};

// Build-vs-query timing over a sweep of X (tree leaf size), R, or alpha.
int cmd_tradeoff(const TradeoffArgs& a, std::ostream& out, std::ostream& err) {
  if (a.sweep.empty()) {
    err << "tradeoff: --sweep must be nonempty\n";
    return 1;
  }
  std::ostringstream csv;
  csv << "variant,n,R,X,build_ms,query_ms,witnesses\n";

  if (a.param == "x" || a.param == "r") {
    // one fixed sparse pair per configuration, queried at every output index
    for (i64 point : a.sweep) {
      const u64 R = a.param == "r" ? static_cast<u64>(point) : a.R;
      const i64 X = a.param == "x" ? point : 64;
      SplitMix64 g(a.seed);
      const i64 ones = std::max<i64>(1, a.n / static_cast<i64>(R));
      auto draw_sparse = [&]() {
        std::vector<i64> pos;
        while (static_cast<i64>(pos.size()) < ones) {
          pos.push_back(static_cast<i64>(g.below(a.n)));
          std::sort(pos.begin(), pos.end());
          pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
        }
        SparseBitVector v;
        v.length = a.n;
        v.ones = std::move(pos);
        return v;
      };
      const SparseBitVector u = draw_sparse();
      const SparseBitVector v = draw_sparse();

      std::vector<double> build_times, query_times;
      i64 witnesses = 0;
      for (int rep = 0; rep < a.reps; ++rep) {
        const double t0 = now_ms();
        const WitnessTree tree =
            build_ones_tree(u, v, X, static_cast<i64>(R));
        const double t1 = now_ms();
        i64 found = 0;
        for (i64 k = 0; k < tree.output_range(); ++k) {
          found += static_cast<i64>(enumerate_witnesses(tree, k).size());
        }
        const double t2 = now_ms();
        build_times.push_back(t1 - t0);
        query_times.push_back(t2 - t1);
        witnesses = found;
      }
      csv << tree_variant_name(tree_variant_from_name(a.variant)) << ','
          << a.n << ',' << R << ',' << X << ',' << median(build_times) << ','
          << median(query_times) << ',' << witnesses << "\n";
    }
  } else if (a.param == "alpha") {
    // split-structure build/query over alpha; sweep holds alpha percentages
    const ConvInstance inst =
        generate(a.n, kDefaultUniverse, a.seed, PlantKind::diff);
    const int digits = a.scheme == 1   ? a.ell
                       : a.scheme == 2 ? a.ell - 1
                                       : a.ell - 2;
    u64 R = 1;
    for (int t = 0; t < digits; ++t) R *= static_cast<u64>(a.rbase);
    int s_bits = 0;
    for (u64 t = R; t > 1; t >>= 1) ++s_bits;
    SplitMix64 g(a.seed);
    const HashFn h = draw_hash(g, s_bits);
    const EncodedInstance enc = encode(inst, h, R, a.ell, a.scheme);
    for (i64 point : a.sweep) {
      const double alpha = static_cast<double>(point) / 100.0;
      std::vector<double> build_times, query_times;
      i64 witnesses = 0;
      for (int rep = 0; rep < a.reps; ++rep) {
        const double t0 = now_ms();
        const SplitStructure ss = build_split_structure(enc, alpha);
        const double t1 = now_ms();
        i64 hits = 0;
        for (i64 k = 1; k < inst.n(); ++k) {
          for (const CarrySet& cs :
               query_carry_sets(k, enc.hashed[k], h, a.ell, a.scheme)) {
            for (const auto& member : cs.members) {
              if (member.total() < 1 ||
                  member.total() > static_cast<i64>(enc.S.size())) {
                continue;
              }
              hits += static_cast<i64>(split_query(ss, member, k).size());
            }
          }
        }
        const double t2 = now_ms();
        build_times.push_back(t1 - t0);
        query_times.push_back(t2 - t1);
        witnesses = hits;
      }
      csv << "split,"  << a.n << ',' << R << ',' << point << ','
          << median(build_times) << ',' << median(query_times) << ','
          << witnesses << "\n";
    }
  } else {
    err << "tradeoff: unknown --param " << a.param << "\n";
    return 1;
  }
  write_text(a.out_file, csv.str(), out);
  return 0;
}

int cmd_selftest(std::ostream& out) {
  int failures = 0;
  auto check = [&](const std::string& name, bool ok) {
    out << (ok ? "PASS " : "FAIL ") << name << "\n";
    if (!ok) ++failures;
  };

  check("parikh worked example",
        parikh("abbbacab", 3) == ParikhVector{{3, 4, 1}});

  {
    SplitMix64 g(11);
    bool ok = true;
    for (int t = 0; t < 25 && ok; ++t) {
      DenseVector u, v;
      for (i64 i = 0; i < 40; ++i) u.entries.push_back(g.below(1 << 16));
      for (i64 i = 0; i < 23; ++i) v.entries.push_back(g.below(1 << 16));
      ok = convolve_fast(u, v) == convolve_naive(u, v);
    }
    check("exact convolution", ok);
  }

  {
    bool ok = true;
    SplitMix64 g(5);
    for (int t = 0; t < 20 && ok; ++t) {
      const ConvInstance inst = generate(48, 1 << 12, g.next(),
                                         t % 2 ? PlantKind::conv
                                               : PlantKind::none);
      ReductionConfig cfg;
      cfg.R = 4;
      cfg.X = 16;
      cfg.seed = g.next();
      const auto got = reduce_conv3sum(inst, cfg);
      ok = got.has_value() == solve_conv3sum_naive(inst).has_value() &&
           (!got || validate_witness(inst, *got));
    }
    check("lemma1 reduction vs oracle", ok);
  }

  {
    bool ok = true;
    SplitMix64 g(7);
    for (int t = 0; t < 10 && ok; ++t) {
      const ConvInstance inst = generate(40, 1 << 12, g.next(),
                                         t % 2 ? PlantKind::diff
                                               : PlantKind::none);
      const auto got = reporting_pipeline(inst, 512, 3, 1, g.next());
      ok = got.has_value() == solve_conv3sum_diff_naive(inst).has_value() &&
           (!got || validate_witness(inst, *got));
    }
    check("histogram reporting vs oracle", ok);
  }

  out << (failures == 0 ? "selftest: all checks passed\n"
                        : "selftest: FAILURES\n");
  return failures == 0 ? 0 : 2;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"3SUM-hardness reduction workbench"};
  app.require_subcommand(1);

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "generate an instance file");
  i64 gen_n = 64;
  i64 gen_universe = kDefaultUniverse;
  u64 gen_seed = 1;
  std::string gen_plant = "none";
  std::string gen_out;
  gen_cmd->add_option("--n", gen_n, "sequence length");
  gen_cmd->add_option("--universe", gen_universe, "element bound");
  gen_cmd->add_option("--seed", gen_seed, "generator seed");
  gen_cmd->add_option("--plant", gen_plant, "none|conv|diff");
  gen_cmd->add_option("--out", gen_out, "output path (default stdout)");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "run a reduction pipeline");
  SolveArgs sa;
  solve_cmd->add_option("--pipeline", sa.pipeline,
                        "lemma1-tree|matmul-tree|histogram-report|"
                        "histogram-decide")
      ->required();
  solve_cmd->add_option("--in", sa.in_file, "instance file");
  solve_cmd->add_option("--gen", sa.gen_spec, "inline generation k=v[,k=v]");
  solve_cmd->add_option("--seed", sa.seed, "seed");
  solve_cmd->add_flag("--check", sa.check, "cross-validate with the oracle");
  solve_cmd->add_option("--r", sa.R, "bucket count R (power of two)");
  solve_cmd->add_option("--x", sa.X, "leaf parameter X (power of two)");
  solve_cmd->add_option("--variant", sa.variant,
                        "ones-split|length-split|quad");
  solve_cmd->add_option("--rbase", sa.rbase, "histogram digit base");
  solve_cmd->add_option("--ell", sa.ell, "alphabet size");
  solve_cmd->add_option("--scheme", sa.scheme, "encoding scheme 1|2|3");
  solve_cmd->add_option("--trials", sa.trials, "decision amplification");

  // fp-measure
  auto* fp_cmd = app.add_subcommand("fp-measure",
                                    "measure false-positive rates");
  FpArgs fa;
  fp_cmd->add_option("--mode", fa.mode, "lemma1|lemma3");
  fp_cmd->add_option("--n", fa.n, "instance size");
  fp_cmd->add_option("--r", fa.R, "bucket count (lemma1)");
  fp_cmd->add_option("--x", fa.X, "leaf parameter (lemma1)");
  fp_cmd->add_option("--rbase", fa.rbase, "digit base (lemma3)");
  fp_cmd->add_option("--ell", fa.ell, "alphabet size (lemma3)");
  fp_cmd->add_option("--scheme", fa.scheme, "encoding scheme (lemma3)");
  fp_cmd->add_option("--samples", fa.samples, "hash draws / (k,instance) count");
  fp_cmd->add_option("--seed", fa.seed, "seed");
  fp_cmd->add_option("--out", fa.out_file, "CSV path (default stdout)");

  // tradeoff
  auto* tr_cmd = app.add_subcommand("tradeoff",
                                    "preprocess/query time sweeps");
  TradeoffArgs ta;
  tr_cmd->add_option("--param", ta.param, "x|r|alpha (alpha in percent)");
  tr_cmd->add_option("--variant", ta.variant, "tree variant");
  tr_cmd->add_option("--n", ta.n, "instance size");
  tr_cmd->add_option("--r", ta.R, "bucket count");
  tr_cmd->add_option("--sweep", ta.sweep, "sweep values")
      ->delimiter(',');
  tr_cmd->add_option("--reps", ta.reps, "timing repetitions (median)");
  tr_cmd->add_option("--seed", ta.seed, "seed");
  tr_cmd->add_option("--ell", ta.ell, "alphabet size (alpha mode)");
  tr_cmd->add_option("--scheme", ta.scheme, "encoding scheme (alpha mode)");
  tr_cmd->add_option("--rbase", ta.rbase, "digit base (alpha mode)");
  tr_cmd->add_option("--out", ta.out_file, "CSV path (default stdout)");

  auto* self_cmd = app.add_subcommand("selftest", "quick invariant checks");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 1;
  }

  try {
    if (gen_cmd->parsed()) {
      const ConvInstance inst = generate(gen_n, gen_universe, gen_seed,
                                         plant_kind_from_name(gen_plant));
      write_text(gen_out, instance_to_json(inst) + "\n", out);
      return 0;
    }
    if (solve_cmd->parsed()) return cmd_solve(sa, out, err);
    if (fp_cmd->parsed()) return cmd_fp_measure(fa, out, err);
    if (tr_cmd->parsed()) return cmd_tradeoff(ta, out, err);
    if (self_cmd->parsed()) return cmd_selftest(out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << app.help();
  return 1;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace fgl::cli
