#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vcsp/lp.hpp"
#include "vcsp/model.hpp"
#include "vcsp/ops.hpp"

namespace vcsp {

struct SuppOptions {
  bool want_witness = true;
  std::size_t max_raw_ops = 65536;   // cap on d^(d^k)
  std::size_t work_cap = 10'000'000;
};

// Answer to "is f in the support clone of Gamma".  A positive answer carries
// a verified fractional polymorphism with f in its support; a negative one
// (when a witness is requested) carries an instance I_f whose optimality
// relation f does not preserve: the k projections, read as assignments on
// the variable set D^k, are optimal and f is strictly worse or infeasible.
struct SuppMembership {
  bool member = false;
  Rational max_weight;  // LP optimum of the weight placed on f
  std::optional<FractionalOperation> witness;
  std::optional<Instance> witness_instance;
};

SuppMembership supp_membership(const Operation& f, const Language& gamma,
                               const SuppOptions& options = {});

// All k-ary polymorphisms of Gamma, by raw enumeration and filtering.
std::vector<Operation> polymorphisms(const Language& gamma, int k,
                                     std::size_t max_raw_ops = 65536);

// Closure of the seeds plus all projections under composition, restricted
// to arities <= arity_bound. Sorted, duplicate-free.
std::vector<Operation> clone_generate(const std::vector<Operation>& seeds, int arity_bound,
                                      int domain_size, std::size_t max_ops = 65536,
                                      std::size_t work_cap = 50'000'000);

// User-supplied escape hatch for bwc_test beyond the decidable search space:
// a WNU pair together with fractional polymorphisms certifying membership.
struct BwcCandidate {
  Operation f;  // ternary WNU
  Operation g;  // 4-ary WNU with f(y,x,x) = g(y,x,x,x)
  FractionalOperation omega_f;
  FractionalOperation omega_g;
};

struct BwcAnswer {
  enum class Verdict { Yes, No, Unknown };
  Verdict verdict = Verdict::Unknown;
  std::optional<std::pair<Operation, Operation>> witness;  // (ternary, 4-ary)
  std::string note;
};

// Decides the bounded width condition for a core language with constants:
// a ternary WNU f and a 4-ary WNU g in the support clone with
// f(y,x,x) = g(y,x,x,x).  Strategy: tournament operation fast path, then a
// majority fast path, then (Boolean domains) exhaustive WNU pair search;
// otherwise Unknown unless a supplied candidate verifies.
BwcAnswer bwc_test(const Language& gamma_with_constants,
                   const std::vector<BwcCandidate>& candidates = {},
                   const SuppOptions& options = {false});

// g_k(x_1,...,x_k) = t(...t(t(x_1,x_2),x_3)...,x_k) for binary t.
Operation left_fold(const Operation& t, int arity);

struct CoreResult {
  Language core;
  std::vector<Operation> chain;    // the non-bijective unary maps applied, per stage
  std::vector<Label> core_labels;  // surviving labels of the original domain
};

// Shrinks the language along non-bijective unary support operations until
// none is left. Ties: smallest image first, then lexicographic table order.
CoreResult core_of(const Language& gamma, const SuppOptions& options = {false});

// Gamma plus the crisp singleton unary relation "__const_<d>" per label.
// Idempotent under repetition.
Language add_constants(const Language& gamma);

struct OptGadget {
  Instance instance;  // J, over Gamma
  mpz_class copies;   // C
  int occurrences;    // N, uses of the opt relation in J'
  Rational upper;     // U
  Rational lower;     // L
  std::optional<Rational> gap;  // least optimal/sub-optimal difference of I
  Rational inner_min;           // min(I)
};

// Reduction replacing every opt(I) constraint of the outer instance by C
// copies of I instantiated on the constraint scope, C = ceil((U-L+1)/gap)
// (C = 1 when I has no sub-optimal satisfying assignment). When the outer
// instance is satisfiable, min(outer) = min(result) - C*N*min(I).
OptGadget opt_gadget(const Instance& inner, const Instance& outer, const std::string& opt_name,
                     std::size_t cap = 1'000'000);

}  // namespace vcsp
