#include "vcsp/lp.hpp"

#include <algorithm>
#include <ostream>

#include "vcsp/errors.hpp"

namespace vcsp {

int LinearProgram::add_variable(std::string name, Rational objective_coeff, bool free) {
  names_.push_back(std::move(name));
  objective_.push_back(std::move(objective_coeff));
  free_.push_back(free);
  return static_cast<int>(names_.size()) - 1;
}

int LinearProgram::add_row(LpRow row) {
  for (const auto& [j, c] : row.coeffs)
    if (j < 0 || j >= num_vars()) throw StructuralError("row references an undeclared variable");
  rows_.push_back(std::move(row));
  return static_cast<int>(rows_.size()) - 1;
}

void LinearProgram::dump(std::ostream& os) const {
  os << (sense_ == LpSense::Minimize ? "Minimize\n" : "Maximize\n");
  os << " obj:";
  bool first = true;
  for (int j = 0; j < num_vars(); ++j) {
    if (objective_[j] == 0) continue;
    os << (first ? " " : " + ") << rational_to_string(objective_[j]) << " " << names_[j];
    first = false;
  }
  if (first) os << " 0";
  os << "\nSubject To\n";
  for (int i = 0; i < num_rows(); ++i) {
    os << " r" << i << ":";
    bool f2 = true;
    for (const auto& [j, c] : rows_[i].coeffs) {
      if (c == 0) continue;
      os << (f2 ? " " : " + ") << rational_to_string(c) << " " << names_[j];
      f2 = false;
    }
    if (f2) os << " 0";
    switch (rows_[i].rel) {
      case RowRelation::LessEq: os << " <= "; break;
      case RowRelation::Equal: os << " = "; break;
      case RowRelation::GreaterEq: os << " >= "; break;
    }
    os << rational_to_string(rows_[i].rhs) << "\n";
  }
  os << "Bounds\n";
  for (int j = 0; j < num_vars(); ++j)
    os << " " << names_[j] << (free_[j] ? " free\n" : " >= 0\n");
  os << "End\n";
}

namespace {

std::atomic<bool> g_verify_all{false};
std::atomic<long> g_verified{0};

int sign(const Rational& q) { return sgn(q); }

// Two-phase dense tableau simplex with Bland's rule. Columns are laid out as
// [structural (split for free vars) | slacks | artificials]; every row keeps
// the column that started as its unit vector, which yields duals and Farkas
// rays at termination.
class Simplex {
 public:
  Simplex(const LinearProgram& lp, const LpOptions& opt) : lp_(lp), opt_(opt) { build(); }

  LpOutcome run() {
    price(cost1_);
    iterate();
    if (objective_value(cost1_) > 0) return infeasible_outcome();
    drive_out_artificials();
    price(cost2_);
    if (iterate() == StopReason::Unbounded) return unbounded_outcome();
    return optimal_outcome();
  }

  long pivots() const { return pivots_; }

 private:
  enum class StopReason { Optimal, Unbounded };

  void build() {
    int nvars = lp_.num_vars();
    // Structural columns: x_j -> col pos_[j]; free vars get a mirrored
    // negative column neg_[j].
    pos_.resize(nvars);
    neg_.assign(nvars, -1);
    int col = 0;
    for (int j = 0; j < nvars; ++j) {
      pos_[j] = col++;
      if (lp_.free_vars()[j]) neg_[j] = col++;
    }
    nstruct_ = col;
    int m = lp_.num_rows();
    flip_.assign(m, 1);
    slack_col_.assign(m, -1);
    art_col_.assign(m, -1);
    ident_col_.assign(m, -1);

    int nslack = 0;
    for (int i = 0; i < m; ++i)
      if (lp_.rows()[i].rel != RowRelation::Equal) ++nslack;

    // Column count: structural + slacks + at most one artificial per row.
    int maxcols = nstruct_ + nslack + m;
    if (static_cast<std::size_t>(m) * static_cast<std::size_t>(maxcols + 1) > opt_.max_cells)
      throw ResourceError("LP tableau exceeds the cell cap");

    tab_.assign(m, std::vector<Rational>(maxcols, Rational(0)));
    b_.assign(m, Rational(0));
    basis_.assign(m, -1);

    int next = nstruct_;
    for (int i = 0; i < m; ++i) {
      const LpRow& row = lp_.rows()[i];
      if (row.rhs < 0) flip_[i] = -1;
      for (const auto& [j, c] : row.coeffs) {
        Rational v = flip_[i] < 0 ? Rational(-c) : c;
        tab_[i][pos_[j]] += v;
        if (neg_[j] >= 0) tab_[i][neg_[j]] -= v;
      }
      b_[i] = flip_[i] < 0 ? Rational(-row.rhs) : row.rhs;
      int slack_sign = 0;
      if (row.rel == RowRelation::LessEq) slack_sign = flip_[i];
      if (row.rel == RowRelation::GreaterEq) slack_sign = -flip_[i];
      if (slack_sign != 0) {
        slack_col_[i] = next++;
        tab_[i][slack_col_[i]] = slack_sign;
      }
      if (slack_sign == 1) {
        basis_[i] = slack_col_[i];
        ident_col_[i] = slack_col_[i];
      } else {
        art_col_[i] = next++;
        tab_[i][art_col_[i]] = 1;
        basis_[i] = art_col_[i];
        ident_col_[i] = art_col_[i];
      }
    }
    ncols_ = next;
    for (int i = 0; i < m; ++i) tab_[i].resize(ncols_);

    cost1_.assign(ncols_, Rational(0));
    cost2_.assign(ncols_, Rational(0));
    for (int i = 0; i < m; ++i)
      if (art_col_[i] >= 0) cost1_[art_col_[i]] = 1;
    int osign = lp_.sense() == LpSense::Maximize ? -1 : 1;
    for (int j = 0; j < nvars; ++j) {
      Rational c = osign * lp_.objective()[j];
      cost2_[pos_[j]] = c;
      if (neg_[j] >= 0) cost2_[neg_[j]] = -c;
    }
    artificial_.assign(ncols_, false);
    for (int i = 0; i < m; ++i)
      if (art_col_[i] >= 0) artificial_[art_col_[i]] = true;
  }

  void price(const std::vector<Rational>& cost) {
    zrow_ = cost;
    int m = lp_.num_rows();
    for (int i = 0; i < m; ++i) {
      const Rational& cb = cost[basis_[i]];
      if (cb == 0) continue;
      for (int j = 0; j < ncols_; ++j) {
        if (sign(tab_[i][j]) == 0) continue;
        zrow_[j] -= cb * tab_[i][j];
      }
    }
  }

  Rational objective_value(const std::vector<Rational>& cost) const {
    Rational v(0);
    for (int i = 0; i < lp_.num_rows(); ++i) {
      const Rational& cb = cost[basis_[i]];
      if (cb != 0) v += cb * b_[i];
    }
    return v;
  }

  // Artificial columns never re-enter the basis; once nonbasic they can be
  // discarded without affecting either phase.
  StopReason iterate() {
    int m = lp_.num_rows();
    for (;;) {
      // Bland: lowest-index eligible entering column.
      int enter = -1;
      for (int j = 0; j < ncols_; ++j) {
        if (artificial_[j]) continue;
        if (sign(zrow_[j]) < 0) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return StopReason::Optimal;

      int leave = -1;
      Rational best;
      for (int i = 0; i < m; ++i) {
        if (sign(tab_[i][enter]) <= 0) continue;
        Rational ratio = b_[i] / tab_[i][enter];
        if (leave < 0 || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) {
        unbounded_col_ = enter;
        return StopReason::Unbounded;
      }
      pivot(leave, enter);
    }
  }

  void pivot(int r, int e) {
    ++pivots_;
    if (opt_.max_pivots > 0 && pivots_ > opt_.max_pivots)
      throw ResourceError("simplex pivot cap exceeded");
    std::vector<Rational>& prow = tab_[r];
    Rational piv = prow[e];
    if (piv != 1) {
      for (int j = 0; j < ncols_; ++j)
        if (sign(prow[j]) != 0) prow[j] /= piv;
      b_[r] /= piv;
    }
    nz_.clear();
    for (int j = 0; j < ncols_; ++j)
      if (sign(prow[j]) != 0) nz_.push_back(j);

    int m = lp_.num_rows();
    for (int i = 0; i < m; ++i) {
      if (i == r) continue;
      Rational f = tab_[i][e];
      if (sign(f) == 0) continue;
      for (int j : nz_) tab_[i][j] -= f * prow[j];
      if (sign(b_[r]) != 0) b_[i] -= f * b_[r];
      tab_[i][e] = 0;
    }
    Rational zf = zrow_[e];
    if (sign(zf) != 0)
      for (int j : nz_) zrow_[j] -= zf * prow[j];
    zrow_[e] = 0;
    basis_[r] = e;
  }

  void drive_out_artificials() {
    int m = lp_.num_rows();
    for (int i = 0; i < m; ++i) {
      if (!artificial_[basis_[i]]) continue;
      int e = -1;
      for (int j = 0; j < ncols_ && e < 0; ++j)
        if (!artificial_[j] && sign(tab_[i][j]) != 0) e = j;
      if (e >= 0) pivot(i, e);
      // Otherwise the row is redundant; its artificial stays basic at zero.
    }
  }

  std::vector<Rational> external_primal() const {
    std::vector<Rational> x(static_cast<std::size_t>(ncols_), Rational(0));
    for (int i = 0; i < lp_.num_rows(); ++i) x[basis_[i]] = b_[i];
    std::vector<Rational> out(static_cast<std::size_t>(lp_.num_vars()), Rational(0));
    for (int j = 0; j < lp_.num_vars(); ++j) {
      out[j] = x[pos_[j]];
      if (neg_[j] >= 0) out[j] -= x[neg_[j]];
    }
    return out;
  }

  LpOutcome optimal_outcome() const {
    LpOutcome out;
    out.status = LpStatus::Optimal;
    out.pivots = pivots_;
    out.primal = external_primal();
    int osign = lp_.sense() == LpSense::Maximize ? -1 : 1;
    out.objective = osign * objective_value(cost2_);
    out.dual.resize(lp_.num_rows());
    for (int i = 0; i < lp_.num_rows(); ++i) {
      // Reduced cost of the column that started as e_i is -y_i.
      Rational y = -zrow_[ident_col_[i]];
      out.dual[i] = Rational(osign * flip_[i]) * y;
    }
    return out;
  }

  LpOutcome infeasible_outcome() const {
    LpOutcome out;
    out.status = LpStatus::Infeasible;
    out.pivots = pivots_;
    out.farkas.resize(lp_.num_rows());
    for (int i = 0; i < lp_.num_rows(); ++i) {
      Rational y = cost1_[ident_col_[i]] - zrow_[ident_col_[i]];
      out.farkas[i] = Rational(flip_[i]) * y;
    }
    return out;
  }

  LpOutcome unbounded_outcome() const {
    LpOutcome out;
    out.status = LpStatus::Unbounded;
    out.pivots = pivots_;
    out.primal = external_primal();
    std::vector<Rational> d(static_cast<std::size_t>(ncols_), Rational(0));
    d[unbounded_col_] = 1;
    for (int i = 0; i < lp_.num_rows(); ++i) d[basis_[i]] = -tab_[i][unbounded_col_];
    out.ray.resize(lp_.num_vars());
    for (int j = 0; j < lp_.num_vars(); ++j) {
      out.ray[j] = d[pos_[j]];
      if (neg_[j] >= 0) out.ray[j] -= d[neg_[j]];
    }
    return out;
  }

  const LinearProgram& lp_;
  const LpOptions& opt_;
  int nstruct_ = 0;
  int ncols_ = 0;
  std::vector<int> pos_, neg_;
  std::vector<int> flip_, slack_col_, art_col_, ident_col_;
  std::vector<std::vector<Rational>> tab_;
  std::vector<Rational> b_;
  std::vector<int> basis_;
  std::vector<Rational> zrow_;
  std::vector<Rational> cost1_, cost2_;
  std::vector<bool> artificial_;
  std::vector<int> nz_;
  int unbounded_col_ = -1;
  long pivots_ = 0;
};

Rational row_activity(const LpRow& row, const std::vector<Rational>& x) {
  Rational v(0);
  for (const auto& [j, c] : row.coeffs) v += c * x[static_cast<std::size_t>(j)];
  return v;
}

bool primal_feasible(const LinearProgram& lp, const std::vector<Rational>& x) {
  if (static_cast<int>(x.size()) != lp.num_vars()) return false;
  for (int j = 0; j < lp.num_vars(); ++j)
    if (!lp.free_vars()[j] && x[j] < 0) return false;
  for (const LpRow& row : lp.rows()) {
    Rational a = row_activity(row, x);
    switch (row.rel) {
      case RowRelation::LessEq:
        if (a > row.rhs) return false;
        break;
      case RowRelation::Equal:
        if (a != row.rhs) return false;
        break;
      case RowRelation::GreaterEq:
        if (a < row.rhs) return false;
        break;
    }
  }
  return true;
}

}  // namespace

LpOutcome solve_lp(const LinearProgram& lp, const LpOptions& options) {
  Simplex s(lp, options);
  LpOutcome out = s.run();
  if (g_verify_all.load()) {
    if (!verify_certificate(lp, out))
      throw StructuralError("solve_lp produced an outcome that fails certificate verification");
    ++g_verified;
  }
  return out;
}

bool verify_certificate(const LinearProgram& lp, const LpOutcome& outcome) {
  int m = lp.num_rows();
  int n = lp.num_vars();
  int osign = lp.sense() == LpSense::Maximize ? -1 : 1;

  if (outcome.status == LpStatus::Optimal) {
    if (static_cast<int>(outcome.dual.size()) != m) return false;
    if (!primal_feasible(lp, outcome.primal)) return false;
    // Dual sign conditions per row sense.
    for (int i = 0; i < m; ++i) {
      const Rational& y = outcome.dual[i];
      switch (lp.rows()[i].rel) {
        case RowRelation::LessEq:
          if (osign * y > 0) return false;
          break;
        case RowRelation::GreaterEq:
          if (osign * y < 0) return false;
          break;
        case RowRelation::Equal:
          break;
      }
    }
    // Dual feasibility per column: minimize needs c - A^T y >= 0 (== 0 on
    // free columns); maximize the reverse.
    std::vector<Rational> aty(static_cast<std::size_t>(n), Rational(0));
    for (int i = 0; i < m; ++i)
      for (const auto& [j, c] : lp.rows()[i].coeffs) aty[static_cast<std::size_t>(j)] += outcome.dual[i] * c;
    for (int j = 0; j < n; ++j) {
      Rational slack = lp.objective()[j] - aty[static_cast<std::size_t>(j)];
      if (lp.free_vars()[j]) {
        if (slack != 0) return false;
      } else if (osign * slack < 0) {
        return false;
      }
    }
    // Strong duality, exactly.
    Rational primal_obj(0);
    for (int j = 0; j < n; ++j) primal_obj += lp.objective()[j] * outcome.primal[static_cast<std::size_t>(j)];
    Rational dual_obj(0);
    for (int i = 0; i < m; ++i) dual_obj += lp.rows()[i].rhs * outcome.dual[i];
    return primal_obj == outcome.objective && dual_obj == outcome.objective;
  }

  if (outcome.status == LpStatus::Infeasible) {
    if (static_cast<int>(outcome.farkas.size()) != m) return false;
    for (int i = 0; i < m; ++i) {
      const Rational& r = outcome.farkas[i];
      switch (lp.rows()[i].rel) {
        case RowRelation::LessEq:
          if (r > 0) return false;
          break;
        case RowRelation::GreaterEq:
          if (r < 0) return false;
          break;
        case RowRelation::Equal:
          break;
      }
    }
    std::vector<Rational> comb(static_cast<std::size_t>(n), Rational(0));
    Rational rhs(0);
    for (int i = 0; i < m; ++i) {
      for (const auto& [j, c] : lp.rows()[i].coeffs) comb[static_cast<std::size_t>(j)] += outcome.farkas[i] * c;
      rhs += outcome.farkas[i] * lp.rows()[i].rhs;
    }
    // The combination reads sum_i r_i (a_i x) >= rhs for every feasible x,
    // while the left side is <= 0 on the nonnegative orthant: contradiction
    // requires rhs > 0.
    for (int j = 0; j < n; ++j) {
      if (lp.free_vars()[j]) {
        if (comb[static_cast<std::size_t>(j)] != 0) return false;
      } else if (comb[static_cast<std::size_t>(j)] > 0) {
        return false;
      }
    }
    return rhs > 0;
  }

  // Unbounded: a feasible point plus an improving recession direction.
  if (static_cast<int>(outcome.ray.size()) != n) return false;
  if (!primal_feasible(lp, outcome.primal)) return false;
  for (int j = 0; j < n; ++j)
    if (!lp.free_vars()[j] && outcome.ray[static_cast<std::size_t>(j)] < 0) return false;
  for (const LpRow& row : lp.rows()) {
    Rational a = row_activity(row, outcome.ray);
    switch (row.rel) {
      case RowRelation::LessEq:
        if (a > 0) return false;
        break;
      case RowRelation::Equal:
        if (a != 0) return false;
        break;
      case RowRelation::GreaterEq:
        if (a < 0) return false;
        break;
    }
  }
  Rational improve(0);
  for (int j = 0; j < n; ++j) improve += lp.objective()[j] * outcome.ray[static_cast<std::size_t>(j)];
  return osign * improve < 0;
}

bool lp_set_verify_all(bool enabled) { return g_verify_all.exchange(enabled); }
long lp_verified_solves() { return g_verified.load(); }

}  // namespace vcsp
