#include "fgl/instances.hpp"

#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include "fgl/rng.hpp"
#include "json.hpp"

namespace fgl {

namespace {

void check_universe(const std::vector<i64>& xs, i64 universe,
                    const char* which) {
  if (xs.empty()) {
    throw std::invalid_argument(std::string(which) + ": empty sequence");
  }
  for (i64 x : xs) {
    if (x < -universe || x > universe) {
      throw std::invalid_argument(std::string(which) +
                                  ": element outside universe bound");
    }
  }
}

}  // namespace

void validate_instance(const ThreeSumInstance& inst) {
  if (inst.universe <= 0) throw std::invalid_argument("universe must be > 0");
  check_universe(inst.a, inst.universe, "A");
  check_universe(inst.b, inst.universe, "B");
  check_universe(inst.c, inst.universe, "C");
}

void validate_instance(const ConvInstance& inst) {
  if (inst.universe <= 0) throw std::invalid_argument("universe must be > 0");
  check_universe(inst.a, inst.universe, "A");
}

bool validate_witness(const ThreeSumInstance& inst, const SolutionWitness& w) {
  if (w.kind != WitnessKind::threesum) return false;
  auto [ia, ib, ic] = w.idx;
  if (ia < 0 || ia >= static_cast<i64>(inst.a.size())) return false;
  if (ib < 0 || ib >= static_cast<i64>(inst.b.size())) return false;
  if (ic < 0 || ic >= static_cast<i64>(inst.c.size())) return false;
  return inst.a[ia] + inst.b[ib] + inst.c[ic] == 0;
}

bool validate_witness(const ConvInstance& inst, const SolutionWitness& w) {
  const i64 n = inst.n();
  const auto& a = inst.a;
  switch (w.kind) {
    case WitnessKind::conv: {
      i64 i = w.idx[0], j = w.idx[1];
      if (i < 0 || j < 0 || i + j > n - 1) return false;
      return a[i] + a[j] == a[i + j];
    }
    case WitnessKind::conv_diff: {
      i64 i = w.idx[0], k = w.idx[1];
      if (i < 0 || k < i || k > n - 1) return false;
      return a[k] - a[i] == a[k - i];
    }
    case WitnessKind::threesum:
      return false;
  }
  return false;
}

std::optional<SolutionWitness> solve_3sum_naive(const ThreeSumInstance& inst) {
  validate_instance(inst);
  std::unordered_map<i64, i64> first_index_of_c;
  for (i64 ic = static_cast<i64>(inst.c.size()) - 1; ic >= 0; --ic) {
    first_index_of_c[inst.c[ic]] = ic;
  }
  for (i64 ia = 0; ia < static_cast<i64>(inst.a.size()); ++ia) {
    for (i64 ib = 0; ib < static_cast<i64>(inst.b.size()); ++ib) {
      auto it = first_index_of_c.find(-(inst.a[ia] + inst.b[ib]));
      if (it != first_index_of_c.end()) {
        return SolutionWitness{WitnessKind::threesum, {ia, ib, it->second}};
      }
    }
  }
  return std::nullopt;
}

std::optional<SolutionWitness> solve_conv3sum_naive(const ConvInstance& inst) {
  validate_instance(inst);
  const i64 n = inst.n();
  for (i64 i = 0; i < n; ++i) {
    for (i64 j = 0; i + j <= n - 1; ++j) {
      if (inst.a[i] + inst.a[j] == inst.a[i + j]) {
        return SolutionWitness{WitnessKind::conv, {i, j, -1}};
      }
    }
  }
  return std::nullopt;
}

std::optional<SolutionWitness> solve_conv3sum_diff_naive(
    const ConvInstance& inst) {
  validate_instance(inst);
  const i64 n = inst.n();
  for (i64 i = 0; i < n; ++i) {
    for (i64 k = i; k <= n - 1; ++k) {
      if (inst.a[k] - inst.a[i] == inst.a[k - i]) {
        return SolutionWitness{WitnessKind::conv_diff, {i, k, -1}};
      }
    }
  }
  return std::nullopt;
}

ConvInstance generate(i64 n, i64 universe, u64 seed, PlantKind plant) {
  if (n < 1) throw std::invalid_argument("generate: n must be >= 1");
  if (universe <= 0) throw std::invalid_argument("generate: universe <= 0");
  if (plant != PlantKind::none) {
    if (n < 3) throw std::invalid_argument("generate: planting needs n >= 3");
    if (universe < 4) {
      throw std::invalid_argument(
          "generate: universe too small to embed a planted identity");
    }
  }

  SplitMix64 g(seed);
  ConvInstance inst;
  inst.universe = universe;
  inst.meta.seed = seed;
  inst.meta.plant = plant;
  inst.a.resize(n);

  // Planted instances draw from the halved range so the planted sum cannot
  // escape the universe bound.
  const i64 span = plant == PlantKind::none ? universe : universe / 2;
  for (i64 t = 0; t < n; ++t) {
    inst.a[t] = g.range(-span, span);
  }

  if (plant != PlantKind::none) {
    const i64 i = g.range(1, (n - 1) / 2);
    const i64 j = g.range(i, n - 1 - i);
    inst.a[i + j] = inst.a[i] + inst.a[j];
    if (plant == PlantKind::conv) {
      inst.meta.plant_i = i;
      inst.meta.plant_j = j;
    } else {
      // Record the diff-form witness (i, k) with k = i + j.
      inst.meta.plant_i = i;
      inst.meta.plant_j = i + j;
    }
  }
  return inst;
}

std::string plant_kind_name(PlantKind k) {
  switch (k) {
    case PlantKind::none:
      return "none";
    case PlantKind::conv:
      return "conv";
    case PlantKind::diff:
      return "diff";
  }
  return "none";
}

PlantKind plant_kind_from_name(const std::string& name) {
  if (name == "none" || name.empty()) return PlantKind::none;
  if (name == "conv") return PlantKind::conv;
  if (name == "diff") return PlantKind::diff;
  throw std::invalid_argument("unknown plant kind: " + name);
}

std::string instance_to_json(const ConvInstance& inst) {
  nlohmann::json j;
  j["kind"] = "conv";
  j["arrays"] = std::vector<std::vector<i64>>{inst.a};
  j["meta"] = {{"seed", inst.meta.seed},
               {"plant", plant_kind_name(inst.meta.plant)},
               {"universe", inst.universe}};
  if (inst.meta.plant != PlantKind::none) {
    j["meta"]["plant_i"] = inst.meta.plant_i;
    j["meta"]["plant_j"] = inst.meta.plant_j;
  }
  return j.dump();
}

ConvInstance conv_instance_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.at("kind").get<std::string>() != "conv") {
    throw std::invalid_argument("expected a conv instance");
  }
  ConvInstance inst;
  inst.a = j.at("arrays").at(0).get<std::vector<i64>>();
  if (j.contains("meta")) {
    const auto& m = j["meta"];
    if (m.contains("universe")) inst.universe = m["universe"].get<i64>();
    if (m.contains("seed")) inst.meta.seed = m["seed"].get<u64>();
    if (m.contains("plant")) {
      inst.meta.plant = plant_kind_from_name(m["plant"].get<std::string>());
    }
    if (m.contains("plant_i")) inst.meta.plant_i = m["plant_i"].get<i64>();
    if (m.contains("plant_j")) inst.meta.plant_j = m["plant_j"].get<i64>();
  }
  validate_instance(inst);
  return inst;
}

void save_instance(const ConvInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << instance_to_json(inst) << "\n";
}

ConvInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return conv_instance_from_json(text);
}

std::string witness_to_json(const std::optional<SolutionWitness>& w) {
  if (!w) return "null";
  nlohmann::json j;
  switch (w->kind) {
    case WitnessKind::threesum:
      j["kind"] = "3sum";
      j["indices"] = {w->idx[0], w->idx[1], w->idx[2]};
      break;
    case WitnessKind::conv:
      j["kind"] = "conv";
      j["indices"] = {w->idx[0], w->idx[1]};
      break;
    case WitnessKind::conv_diff:
      j["kind"] = "conv-diff";
      j["indices"] = {w->idx[0], w->idx[1]};
      break;
  }
  return j.dump();
}

}  // namespace fgl
