#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "vcsp/model.hpp"
#include "vcsp/ops.hpp"

namespace vcsp {

// SplitMix64: state advances by the golden-gamma constant, output is the
// finalizer mix. Reproducible across implementations from the seed alone.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n) by rejection, so the distribution is unbiased.
  std::uint64_t below(std::uint64_t n);

  SplitMix64 split() { return SplitMix64(next()); }

 private:
  std::uint64_t state_;
};

struct BruteForceResult {
  ExtRational value;                // +inf when unsatisfiable
  std::vector<Assignment> optima;   // empty when unsatisfiable
};

// Exhaustive ground truth; d^n <= cap.
BruteForceResult brute_force(const Instance& instance, std::size_t cap = 1'000'000);

// Min-UnCut: one phi_xor constraint per edge.
Instance gen_min_uncut(int num_vertices, const std::vector<std::pair<int, int>>& edges);
std::vector<std::pair<int, int>> cycle_edges(int n);
std::vector<std::pair<int, int>> path_edges(int n);
std::vector<std::pair<int, int>> complete_edges(int n);

// Builtin operation tables.
Operation op_bool_min();
Operation op_bool_max();
Operation op_bool_majority();
Operation op_bool_minority();
Operation op_d3_min();  // min under 0 < 1 < 2
Operation op_d3_max();

FractionalOperation fpol_submodular();       // 1/2 min + 1/2 max on {0,1}
FractionalOperation fpol_mjn_boolean();      // 2/3 majority + 1/3 minority
FractionalOperation fpol_d3_tournament();    // point mass on the d=3 order min
FractionalOperation fpol_majority_boolean();  // point mass on the majority

struct GenShape {
  int relations = 2;
  int min_arity = 1;
  int max_arity = 2;
  int value_max = 10;   // integer values sampled from [0, value_max]
  int inf_percent = 0;  // chance (in percent) of +inf per tuple
  int max_tries = 10'000;
};

// Rejection-samples weighted relations improved by omega (re-verified by the
// exact checker). Deterministic in (seed, omega, shape).
Language gen_improved(std::uint64_t seed, const FractionalOperation& omega,
                      const GenShape& shape);

// Boolean language of `count` finite-valued relations improved by
// 1/2 min + 1/2 max, plus a random instance over it.
std::pair<std::shared_ptr<Language>, Instance> gen_submodular(std::uint64_t seed, int num_vars,
                                                              int max_arity, int count,
                                                              int num_constraints = 0);

// Random instance over a language: scopes are distinct-variable tuples.
Instance gen_instance(std::uint64_t seed, std::shared_ptr<const Language> language,
                      int num_vars, int num_constraints);

}  // namespace vcsp
