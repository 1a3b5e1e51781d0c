#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fgl/convolution.hpp"
#include "fgl/hashing.hpp"
#include "fgl/histogram.hpp"
#include "fgl/instances.hpp"
#include "fgl/partial_ops.hpp"
#include "fgl/rng.hpp"
#include "fgl/witness_trees.hpp"

namespace py = pybind11;
using namespace fgl;

namespace {

py::object witness_to_py(const std::optional<SolutionWitness>& w) {
  if (!w) return py::none();
  py::dict d;
  switch (w->kind) {
    case WitnessKind::threesum:
      d["kind"] = "3sum";
      d["indices"] = py::make_tuple(w->idx[0], w->idx[1], w->idx[2]);
      break;
    case WitnessKind::conv:
      d["kind"] = "conv";
      d["indices"] = py::make_tuple(w->idx[0], w->idx[1]);
      break;
    case WitnessKind::conv_diff:
      d["kind"] = "conv-diff";
      d["indices"] = py::make_tuple(w->idx[0], w->idx[1]);
      break;
  }
  return d;
}

DenseVector to_dense(const std::vector<i64>& entries) {
  return DenseVector{entries};
}

SparseMatrix matrix_from_rows(const std::vector<std::vector<i64>>& rows) {
  return SparseMatrix::from_dense(rows);
}

}  // namespace

PYBIND11_MODULE(_fgl, m) {
  m.doc() = "3SUM-hardness reduction workbench";

  // instances
  py::class_<ConvInstance>(m, "ConvInstance")
      .def(py::init([](std::vector<i64> a, i64 universe) {
             ConvInstance inst;
             inst.a = std::move(a);
             inst.universe = universe;
             validate_instance(inst);
             return inst;
           }),
           py::arg("a"), py::arg("universe") = kDefaultUniverse)
      .def_readonly("a", &ConvInstance::a)
      .def_readonly("universe", &ConvInstance::universe)
      .def_property_readonly(
          "planted",
          [](const ConvInstance& inst) -> py::object {
            if (inst.meta.plant == PlantKind::none) return py::none();
            return py::make_tuple(inst.meta.plant_i, inst.meta.plant_j);
          })
      .def("__len__", [](const ConvInstance& inst) { return inst.n(); })
      .def("to_json", &instance_to_json);

  m.def(
      "generate",
      [](i64 n, i64 universe, u64 seed, const std::string& plant) {
        return generate(n, universe, seed, plant_kind_from_name(plant));
      },
      py::arg("n"), py::arg("universe") = kDefaultUniverse,
      py::arg("seed") = 0, py::arg("plant") = "none");

  m.def("solve_conv3sum_naive", [](const ConvInstance& inst) {
    return witness_to_py(solve_conv3sum_naive(inst));
  });
  m.def("solve_conv3sum_diff_naive", [](const ConvInstance& inst) {
    return witness_to_py(solve_conv3sum_diff_naive(inst));
  });
  m.def("solve_3sum_naive",
        [](std::vector<i64> a, std::vector<i64> b, std::vector<i64> c) {
          ThreeSumInstance inst;
          inst.a = std::move(a);
          inst.b = std::move(b);
          inst.c = std::move(c);
          inst.universe = i64(1) << 62;
          return witness_to_py(solve_3sum_naive(inst));
        });

  // hashing
  py::class_<HashFn>(m, "HashFn")
      .def(py::init([](u64 multiplier, int w, int s) {
             HashFn h{multiplier, w, s};
             validate(h);
             return h;
           }),
           py::arg("multiplier"), py::arg("w") = 63, py::arg("s") = 3)
      .def_readonly("multiplier", &HashFn::multiplier)
      .def_readonly("w", &HashFn::w)
      .def_readonly("s", &HashFn::s)
      .def_property_readonly("R", &HashFn::R)
      .def("__call__", [](const HashFn& h, i64 x) { return hash_eval(h, x); });
  m.def(
      "draw_hash",
      [](u64 seed, int s, int w) {
        SplitMix64 g(seed);
        return draw_hash(g, s, w);
      },
      py::arg("seed"), py::arg("s"), py::arg("w") = 63);
  m.def("linearity_offsets", &linearity_offsets);

  // convolution
  m.def("convolve_naive", [](std::vector<i64> u, std::vector<i64> v) {
    return convolve_naive(to_dense(u), to_dense(v)).entries;
  });
  m.def("convolve_fast", [](std::vector<i64> u, std::vector<i64> v) {
    return convolve_fast(to_dense(u), to_dense(v)).entries;
  });
  m.def(
      "witnesses_at",
      [](i64 u_len, std::vector<i64> u_ones, i64 v_len,
         std::vector<i64> v_ones, i64 k) {
        return witnesses_at(SparseBitVector{u_len, std::move(u_ones)},
                            SparseBitVector{v_len, std::move(v_ones)}, k);
      },
      py::arg("u_len"), py::arg("u_ones"), py::arg("v_len"),
      py::arg("v_ones"), py::arg("k"));

  // witness trees and the bucket reduction
  py::class_<WitnessTree>(m, "WitnessTree")
      .def_property_readonly(
          "root_convolution",
          [](const WitnessTree& t) { return t.root_convolution().entries; })
      .def("enumerate",
           [](const WitnessTree& t, i64 k, std::optional<i64> limit) {
             return enumerate_witnesses(t, k, limit);
           },
           py::arg("k"), py::arg("limit") = py::none());
  m.def(
      "build_ones_tree",
      [](i64 u_len, std::vector<i64> u_ones, i64 v_len,
         std::vector<i64> v_ones, i64 X, i64 R, i64 max_ones) {
        return build_ones_tree(SparseBitVector{u_len, std::move(u_ones)},
                               SparseBitVector{v_len, std::move(v_ones)}, X,
                               R, max_ones);
      },
      py::arg("u_len"), py::arg("u_ones"), py::arg("v_len"),
      py::arg("v_ones"), py::arg("X"), py::arg("R"), py::arg("max_ones") = 0);

  m.def(
      "reduce_conv3sum",
      [](const ConvInstance& inst, u64 R, i64 X, const std::string& variant,
         u64 seed, double fp_budget_factor, int max_rehash) {
        ReductionConfig cfg;
        cfg.R = R;
        cfg.X = X;
        cfg.variant = tree_variant_from_name(variant);
        cfg.seed = seed;
        cfg.fp_budget_factor = fp_budget_factor;
        cfg.max_rehash = max_rehash;
        ReductionReport rep;
        const auto w = reduce_conv3sum(inst, cfg, &rep);
        py::dict d;
        d["verdict"] = rep.verdict;
        d["witness"] = witness_to_py(w);
        d["candidates"] = rep.candidates;
        d["false_positives"] = rep.false_positives;
        d["rehashes"] = rep.rehashes;
        return d;
      },
      py::arg("inst"), py::arg("R") = 8, py::arg("X") = 64,
      py::arg("variant") = "ones-split", py::arg("seed") = 0,
      py::arg("fp_budget_factor") = 2.0, py::arg("max_rehash") = 8);

  // histogram indexing
  m.def("parikh", [](const std::string& text, int ell) {
    return parikh(text, ell).counts;
  });

  py::class_<HistogramIndex>(m, "HistogramIndex")
      .def(py::init([](const std::string& text, int ell,
                       const std::string& mode) {
             return HistogramIndex(text, ell,
                                   mode == "binary-interval"
                                       ? HistMode::binary_interval
                                       : HistMode::prefix);
           }),
           py::arg("text"), py::arg("ell"), py::arg("mode") = "prefix")
      .def("decide",
           [](const HistogramIndex& idx, std::vector<i64> counts) {
             return idx.decide(ParikhVector{std::move(counts)});
           })
      .def("report",
           [](const HistogramIndex& idx, std::vector<i64> counts) {
             return idx.report(ParikhVector{std::move(counts)});
           })
      .def_property_readonly("size", &HistogramIndex::size);

  py::class_<EncodedInstance>(m, "EncodedInstance")
      .def_readonly("S", &EncodedInstance::S)
      .def_readonly("scheme", &EncodedInstance::scheme)
      .def_readonly("R", &EncodedInstance::R)
      .def_readonly("ell", &EncodedInstance::ell)
      .def_readonly("hashed", &EncodedInstance::hashed)
      .def_property_readonly("boundaries",
                             [](const EncodedInstance& enc) {
                               std::vector<std::tuple<i64, i64, i64>> out;
                               for (const auto& b : enc.blocks) {
                                 out.emplace_back(b.start, b.split, b.end);
                               }
                               return out;
                             })
      .def("to_json", &EncodedInstance::to_json);
  m.def("encode", &encode, py::arg("inst"), py::arg("h"), py::arg("R"),
        py::arg("ell"), py::arg("scheme") = 1);

  m.def(
      "carry_set",
      [](i64 k, u64 h_of_xk, u64 R, int ell, int scheme) {
        const CarrySet cs = carry_set(k, h_of_xk, R, ell, scheme);
        std::vector<std::vector<i64>> members;
        for (const auto& v : cs.members) members.push_back(v.counts);
        return members;
      },
      py::arg("k"), py::arg("h_of_xk"), py::arg("R"), py::arg("ell"),
      py::arg("scheme") = 1);

  m.def(
      "reporting_pipeline",
      [](const ConvInstance& inst, u64 R, int ell, int scheme, u64 seed) {
        FPReport rep;
        const auto w = reporting_pipeline(inst, R, ell, scheme, seed, &rep);
        py::dict d;
        d["witness"] = witness_to_py(w);
        d["false_positives"] = rep.total_false_positives();
        d["carry_sets"] = rep.carry_sets;
        d["csv"] = rep.to_csv();
        return d;
      },
      py::arg("inst"), py::arg("R"), py::arg("ell"), py::arg("scheme") = 1,
      py::arg("seed") = 0);

  m.def(
      "decision_pipeline",
      [](const ConvInstance& inst, int ell, int trials, u64 seed) {
        return witness_to_py(decision_pipeline(inst, ell, trials, seed));
      },
      py::arg("inst"), py::arg("ell") = 3, py::arg("trials") = 0,
      py::arg("seed") = 0);

  // multi-level split structure
  py::class_<SplitStructure>(m, "SplitStructure")
      .def_property_readonly("levels",
                             [](const SplitStructure& ss) { return ss.levels; })
      .def_property_readonly(
          "parts", [](const SplitStructure& ss) { return ss.parts.size(); })
      .def("query", [](const SplitStructure& ss, std::vector<i64> counts,
                       i64 k) {
        return split_query(ss, ParikhVector{std::move(counts)}, k);
      });
  m.def("build_split_structure", &build_split_structure, py::arg("enc"),
        py::arg("alpha"), py::arg("levels") = 0);

  // partial operations
  m.def(
      "partial_convolution",
      [](std::vector<i64> u, std::vector<i64> v, IndexSet s) {
        return partial_convolution(to_dense(u), to_dense(v), s);
      },
      py::arg("u"), py::arg("v"), py::arg("s"));
  m.def(
      "partial_matmul",
      [](const std::vector<std::vector<i64>>& a,
         const std::vector<std::vector<i64>>& b, const IndexSet2D& s,
         bool boolean) {
        return partial_matmul(matrix_from_rows(a), matrix_from_rows(b), s,
                              boolean ? Semiring::boolean
                                      : Semiring::integer);
      },
      py::arg("a"), py::arg("b"), py::arg("s"), py::arg("boolean") = false);
  m.def("chunk_locations",
        py::overload_cast<const IndexSet&, i64>(&chunk_locations));
  m.def(
      "leaf_conv_via_matmul",
      [](const std::vector<i64>& u_i,
         const std::vector<std::vector<i64>>& v_block_rows, bool boolean,
         i64 chunk_cap) {
        return leaf_conv_via_matmul(
            build_shift_matrices(u_i), matrix_from_rows(v_block_rows),
            boolean ? Semiring::boolean : Semiring::integer, chunk_cap);
      },
      py::arg("u_i"), py::arg("v_block_rows"), py::arg("boolean") = false,
      py::arg("chunk_cap") = 0);
}
