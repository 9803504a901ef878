#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vcsp/model.hpp"

namespace vcsp {

// Finite k-ary operation f: D^k -> D, stored as a dense table indexed by
// the usual tuple encoding. Names are labels for I/O only; identity is
// (domain, arity, table).
class Operation {
 public:
  Operation(std::string name, int domain_size, int arity, std::vector<Label> table);

  static Operation projection(int domain_size, int arity, int coordinate);  // 1-based coordinate

  const std::string& name() const { return name_; }
  int arity() const { return k_; }
  int domain_size() const { return d_; }
  const std::vector<Label>& table() const { return table_; }

  Label apply(std::span<const Label> args) const;
  Label apply_index(std::size_t encoded_args) const { return table_[encoded_args]; }

  // Coordinatewise application to equal-length tuples.
  Tuple apply_tuples(std::span<const Tuple> tuples) const;

  bool is_idempotent() const;
  bool is_conservative() const;
  bool is_commutative() const;  // arity 2
  // Projection onto some coordinate; returns the 1-based coordinate.
  std::optional<int> projection_coordinate() const;
  bool is_majority() const;  // arity 3
  bool is_minority() const;  // arity 3
  // Idempotent and all one-off-diagonal patterns agree (arity >= 2).
  bool is_wnu() const;

  friend bool operator==(const Operation& a, const Operation& b) {
    return a.d_ == b.d_ && a.k_ == b.k_ && a.table_ == b.table_;
  }
  friend bool operator<(const Operation& a, const Operation& b) {
    if (a.d_ != b.d_) return a.d_ < b.d_;
    if (a.k_ != b.k_) return a.k_ < b.k_;
    return a.table_ < b.table_;
  }

 private:
  std::string name_;
  int d_;
  int k_;
  std::vector<Label> table_;
};

// f[g_1,...,g_k]: the gs share one arity; arity mismatch is an error.
Operation compose(const Operation& f, const std::vector<Operation>& gs);

// feas(phi) closed under coordinatewise f.
bool is_polymorphism(const Operation& f, const WeightedRelation& phi,
                     std::size_t work_cap = 10'000'000);
bool is_polymorphism(const Operation& f, const Language& gamma,
                     std::size_t work_cap = 10'000'000);

// Probability distribution over same-arity operations; weights are positive
// and sum to exactly 1.
class FractionalOperation {
 public:
  FractionalOperation(int domain_size, int arity,
                      std::vector<std::pair<Operation, Rational>> weights);

  // Uniform distribution over the k projections (tau_k).
  static FractionalOperation uniform_projections(int domain_size, int arity);

  int arity() const { return k_; }
  int domain_size() const { return d_; }
  const std::vector<std::pair<Operation, Rational>>& weights() const { return weights_; }
  Rational weight_of(const Operation& op) const;
  bool supports(const Operation& op) const { return weight_of(op) > 0; }

 private:
  int d_;
  int k_;
  std::vector<std::pair<Operation, Rational>> weights_;
};

struct FpolViolation {
  std::string relation;
  std::vector<Tuple> tuples;      // the violating k-vector of feasible tuples
  bool infeasible_image = false;  // some support op leaves feas(phi)
};

struct FpolCheck {
  bool ok = false;
  std::optional<FpolViolation> violation;
  explicit operator bool() const { return ok; }
};

// Definition check: supp(omega) within pol(Gamma) and the averaging
// inequality on every k-vector of feasible tuples, by exact comparison.
FpolCheck is_fractional_polymorphism(const FractionalOperation& omega, const Language& gamma,
                                     std::size_t work_cap = 10'000'000);
FpolCheck is_fractional_polymorphism(const FractionalOperation& omega,
                                     const WeightedRelation& phi,
                                     std::size_t work_cap = 10'000'000);

// All k-ary operations on a domain of size d, in table order. Throws
// ResourceError when d^(d^k) exceeds the cap.
std::vector<Operation> enumerate_operations(int d, int k, std::size_t max_ops = 65536);

}  // namespace vcsp
