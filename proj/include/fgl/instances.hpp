#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fgl {

using i64 = std::int64_t;
using u64 = std::uint64_t;

// Elements live in [-kDefaultUniverse, kDefaultUniverse]. 2^30 keeps every
// pairwise sum and every hash canonicalization comfortably inside 64 bits
// while covering n^3-sized universes up to n = 2^10.
inline constexpr i64 kDefaultUniverse = i64(1) << 30;

enum class WitnessKind { threesum, conv, conv_diff };

// A candidate solution certificate. Index meaning depends on kind:
//   threesum:  idx = (ia, ib, ic),  A[ia] + B[ib] + C[ic] = 0
//   conv:      idx = (i, j, -),     A[i] + A[j] = A[i+j]
//   conv_diff: idx = (i, k, -),     A[k] - A[i] = A[k-i]
struct SolutionWitness {
  WitnessKind kind = WitnessKind::conv;
  std::array<i64, 3> idx{0, 0, -1};

  friend bool operator==(const SolutionWitness&,
                         const SolutionWitness&) = default;
};

struct ThreeSumInstance {
  std::vector<i64> a, b, c;
  i64 universe = kDefaultUniverse;
};

enum class PlantKind { none, conv, diff };

struct InstanceMeta {
  u64 seed = 0;
  PlantKind plant = PlantKind::none;
  i64 plant_i = -1;  // planted witness, -1 when nothing was planted
  i64 plant_j = -1;
};

// An ordered integer sequence, the universal input to all reductions.
struct ConvInstance {
  std::vector<i64> a;
  i64 universe = kDefaultUniverse;
  InstanceMeta meta;

  i64 n() const { return static_cast<i64>(a.size()); }
};

void validate_instance(const ThreeSumInstance& inst);
void validate_instance(const ConvInstance& inst);

// Substitutes the witness indices into the defining identity of its kind.
bool validate_witness(const ThreeSumInstance& inst, const SolutionWitness& w);
bool validate_witness(const ConvInstance& inst, const SolutionWitness& w);

// Brute-force oracles. Each returns the lexicographically smallest witness
// (by index tuple) or nothing; every reduction is tested against them.
std::optional<SolutionWitness> solve_3sum_naive(const ThreeSumInstance& inst);
std::optional<SolutionWitness> solve_conv3sum_naive(const ConvInstance& inst);
std::optional<SolutionWitness> solve_conv3sum_diff_naive(
    const ConvInstance& inst);

// Deterministic in (n, universe, seed, plant). Planting draws all elements
// from the halved universe and then overwrites A[i+j] with A[i] + A[j] for
// random i, j >= 1, so the planted identity stays inside the universe bound.
ConvInstance generate(i64 n, i64 universe, u64 seed, PlantKind plant);

std::string plant_kind_name(PlantKind k);
PlantKind plant_kind_from_name(const std::string& name);

// One JSON object per file:
// {"kind":"conv"|"3sum","arrays":[[...]],"meta":{"seed":...,"plant":...}}
std::string instance_to_json(const ConvInstance& inst);
ConvInstance conv_instance_from_json(const std::string& text);
void save_instance(const ConvInstance& inst, const std::string& path);
ConvInstance load_instance(const std::string& path);

std::string witness_to_json(const std::optional<SolutionWitness>& w);

}  // namespace fgl
