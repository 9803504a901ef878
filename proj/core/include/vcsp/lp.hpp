#pragma once

#include <atomic>
#include <iosfwd>
#include <string>
#include <vector>

#include "vcsp/rational.hpp"

namespace vcsp {

enum class LpSense { Minimize, Maximize };
enum class RowRelation { LessEq, Equal, GreaterEq };
enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpRow {
  std::vector<std::pair<int, Rational>> coeffs;  // (variable index, coefficient)
  RowRelation rel = RowRelation::Equal;
  Rational rhs;
};

// Rational LP in the natural form: variables default to x >= 0, optionally
// free; rows are <=, = or >=. All data exact.
class LinearProgram {
 public:
  explicit LinearProgram(LpSense sense = LpSense::Minimize) : sense_(sense) {}

  int add_variable(std::string name, Rational objective_coeff = Rational(0), bool free = false);
  int add_row(LpRow row);

  LpSense sense() const { return sense_; }
  int num_vars() const { return static_cast<int>(names_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const std::vector<std::string>& variable_names() const { return names_; }
  const std::vector<Rational>& objective() const { return objective_; }
  const std::vector<bool>& free_vars() const { return free_; }
  const std::vector<LpRow>& rows() const { return rows_; }

  // Human-readable LP text layout, for debugging dumps.
  void dump(std::ostream& os) const;

 private:
  LpSense sense_;
  std::vector<std::string> names_;
  std::vector<Rational> objective_;
  std::vector<bool> free_;
  std::vector<LpRow> rows_;
};

// Dual value conventions, per row sense, for a reported optimum:
//   minimize: y >= 0 on '>=' rows, y <= 0 on '<=' rows, free on '=' rows,
//             and c - A^T y >= 0 per column (= 0 for free columns);
//   maximize: signs flipped. In both cases b^T y equals the optimum.
// Farkas rays r prove infeasibility: r >= 0 on '>=' rows, r <= 0 on '<='
// rows, sum_i r_i a_i <= 0 componentwise (= 0 on free columns) and
// sum_i r_i b_i > 0.
struct LpOutcome {
  LpStatus status = LpStatus::Optimal;
  Rational objective;
  std::vector<Rational> primal;  // per variable (Optimal, Unbounded: the base point)
  std::vector<Rational> dual;    // per row (Optimal)
  std::vector<Rational> farkas;  // per row (Infeasible)
  std::vector<Rational> ray;     // per variable (Unbounded: improving direction)
  long pivots = 0;
};

struct LpOptions {
  long max_pivots = 0;               // 0 = unlimited (Bland's rule terminates)
  std::size_t max_cells = 10'000'000;  // dense tableau size cap
};

// Primal simplex over exact rationals, two-phase, Bland's anti-cycling rule.
// Deterministic for a fixed input ordering.
LpOutcome solve_lp(const LinearProgram& lp, const LpOptions& options = {});

// Re-checks the outcome against the program by exact arithmetic: primal and
// dual feasibility plus objective equality for optima, the Farkas
// contradiction for infeasibility, point plus improving ray for
// unboundedness.
bool verify_certificate(const LinearProgram& lp, const LpOutcome& outcome);

// When enabled, every solve_lp call self-verifies its certificate (used by
// the acceptance suite); failures throw. Returns the previous value.
bool lp_set_verify_all(bool enabled);
long lp_verified_solves();

}  // namespace vcsp
