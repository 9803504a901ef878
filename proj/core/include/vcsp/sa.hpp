#pragma once

#include <optional>
#include <vector>

#include "vcsp/lp.hpp"
#include "vcsp/minimality.hpp"
#include "vcsp/model.hpp"
#include "vcsp/ops.hpp"

namespace vcsp {

struct SaOptions {
  int k = 2;
  int l = 3;
  // Pinned variables: every lambda column inconsistent with a pin is
  // eliminated (the crisp constant constraint, realised by elimination).
  std::vector<std::pair<int, Label>> pins;
  std::size_t max_columns = 200'000;
  std::size_t work_cap = 10'000'000;
};

struct SaTerm {
  std::vector<int> scope;         // sorted distinct variables
  std::vector<ExtRational> cost;  // table over D^scope
  int constraint_index = -1;      // index into the instance; -1 for padding
  bool padding = false;
};

struct SaRowInfo {
  enum class Kind { Sum1, Marginal };
  Kind kind = Kind::Sum1;
  int i = -1;         // term (Sum1) / parent term (Marginal)
  int j = -1;         // child term (Marginal)
  std::size_t t = 0;  // child tuple (Marginal)
};

// The SA(k,l) program of an instance: one lambda block per term (original
// constraints first, then constant-0 padding so that every nonempty scope of
// size <= l appears), marginal-consistency rows for every child scope of
// size <= k inside a parent scope, and one sum-to-1 row per term. Columns
// for infeasible tuples are eliminated rather than pinned to zero.
class SaProgram {
 public:
  int k = 0, l = 0;
  int domain_size = 0;
  int num_vars = 0;
  std::vector<SaTerm> terms;
  std::vector<std::vector<int>> columns;  // per term, tuple -> LP column or -1
  std::vector<SaRowInfo> row_info;        // parallel to lp rows
  std::vector<int> sum1_row;              // per term
  LinearProgram lp;

  std::size_t term_table_size(int i) const;
  // Index of sigma restricted to the scope of term i.
  std::size_t restrict_assignment(int i, const Assignment& sigma) const;
};

SaProgram build_sa(const Instance& instance, const SaOptions& options = {});

struct SaSolution {
  LpStatus status = LpStatus::Optimal;
  ExtRational objective;                      // +inf when infeasible
  std::vector<std::vector<Rational>> lambda;  // per term, over D^scope
  bool has_duals = false;
  std::vector<Rational> row_duals;  // parallel to program rows
  long pivots = 0;

  bool feasible() const { return status == LpStatus::Optimal; }
  // z_i (per-term duals on the sum-to-1 rows).
  Rational z(const SaProgram& p, int term) const;
};

SaSolution solve_sa(const SaProgram& program, const LpOptions& lp_options = {});

// supp(lambda_i) as tuple indices.
std::vector<std::vector<std::size_t>> sa_supports(const SaProgram& program,
                                                  const SaSolution& sol);

// Exact re-check of (marginal), (sum-to-1), (infeasible -> 0), nonnegativity.
bool sa_solution_feasible(const SaProgram& program, const SaSolution& sol);

ExtRational sa_objective(const SaProgram& program,
                         const std::vector<std::vector<Rational>>& lambda);

// lambda^omega: per term, the distribution of f(s_1,...,s_m) with f ~ omega
// and s_j ~ lambda_i independently. Preserves feasibility and never
// increases the objective when omega is a fractional polymorphism of the
// instance language (caller-verified).
SaSolution apply_fractional(const SaProgram& program, const SaSolution& sol,
                            const FractionalOperation& omega,
                            std::size_t work_cap = 10'000'000);

// Repeated averaging with apply_fractional results until every per-term
// support is closed under the support of every given witness. Supports grow
// strictly, so at most sum_i |D^scope_i| rounds.
SaSolution saturate_support(const SaProgram& program, const SaSolution& sol,
                            const std::vector<FractionalOperation>& witnesses,
                            std::size_t work_cap = 10'000'000);

// Complementary slackness of an assignment against an optimal solution with
// duals: sigma's restriction lies in every per-term support, each supported
// dual row is tight, and sum_i z_i equals sum_i phi_i(sigma(S_i)).
bool check_complementary_slackness(const SaProgram& program, const SaSolution& sol,
                                   const Assignment& sigma);

// The support structure as a crisp network (scopes of the program terms).
CrispNetwork support_network(const SaProgram& program, const SaSolution& sol);

}  // namespace vcsp
