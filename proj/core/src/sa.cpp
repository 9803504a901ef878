#include "vcsp/sa.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace vcsp {

namespace {

std::vector<int> sorted_distinct(const std::vector<int>& scope) {
  std::vector<int> s = scope;
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

void enumerate_subsets(int n, int max_size, std::vector<std::vector<int>>& out) {
  std::vector<int> current;
  for (int size = 1; size <= std::min(max_size, n); ++size) {
    current.assign(static_cast<std::size_t>(size), 0);
    for (int i = 0; i < size; ++i) current[static_cast<std::size_t>(i)] = i;
    for (;;) {
      out.push_back(current);
      int i = size - 1;
      while (i >= 0 && current[static_cast<std::size_t>(i)] == n - size + i) --i;
      if (i < 0) break;
      ++current[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < size; ++j)
        current[static_cast<std::size_t>(j)] = current[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

std::optional<std::vector<int>> subset_positions(const std::vector<int>& child,
                                                 const std::vector<int>& parent) {
  std::vector<int> pos;
  std::size_t pi = 0;
  for (int v : child) {
    while (pi < parent.size() && parent[pi] < v) ++pi;
    if (pi == parent.size() || parent[pi] != v) return std::nullopt;
    pos.push_back(static_cast<int>(pi));
  }
  return pos;
}

}  // namespace

std::size_t SaProgram::term_table_size(int i) const {
  return table_size(domain_size, static_cast<int>(terms[static_cast<std::size_t>(i)].scope.size()));
}

std::size_t SaProgram::restrict_assignment(int i, const Assignment& sigma) const {
  const SaTerm& term = terms[static_cast<std::size_t>(i)];
  std::size_t idx = 0;
  for (int v : term.scope)
    idx = idx * static_cast<std::size_t>(domain_size) +
          static_cast<std::size_t>(sigma[static_cast<std::size_t>(v)]);
  return idx;
}

SaProgram build_sa(const Instance& instance, const SaOptions& options) {
  if (options.k < 1 || options.k > options.l) throw StructuralError("require 1 <= k <= l");
  if (options.l > 4) throw StructuralError("SA levels beyond l = 4 are not supported");
  int n = instance.num_vars();
  int d = instance.language().domain_size();
  if (n < 1) throw StructuralError("instance has no variables");

  SaProgram p;
  p.k = options.k;
  p.l = options.l;
  p.domain_size = d;
  p.num_vars = n;

  std::vector<Label> pinned(static_cast<std::size_t>(n), -1);
  for (const auto& [v, lab] : options.pins) {
    if (v < 0 || v >= n || lab < 0 || lab >= d) throw StructuralError("pin out of range");
    if (pinned[static_cast<std::size_t>(v)] >= 0 && pinned[static_cast<std::size_t>(v)] != lab)
      throw StructuralError("conflicting pins");
    pinned[static_cast<std::size_t>(v)] = lab;
  }

  // Terms for the instance constraints, on their variable sets.
  std::set<std::vector<int>> covered;
  for (std::size_t ci = 0; ci < instance.constraints().size(); ++ci) {
    const Constraint& c = instance.constraints()[ci];
    const WeightedRelation& rel = instance.language().at(c.relation);
    SaTerm term;
    term.scope = sorted_distinct(c.scope);
    term.constraint_index = static_cast<int>(ci);
    std::map<int, int> position;
    for (std::size_t i = 0; i < term.scope.size(); ++i)
      position[term.scope[i]] = static_cast<int>(i);
    std::size_t sz = table_size(d, static_cast<int>(term.scope.size()));
    term.cost.resize(sz);
    Tuple orig(c.scope.size());
    for (std::size_t t = 0; t < sz; ++t) {
      Tuple set_tuple = decode_tuple(t, d, static_cast<int>(term.scope.size()));
      for (std::size_t pos = 0; pos < c.scope.size(); ++pos)
        orig[pos] = set_tuple[static_cast<std::size_t>(position[c.scope[pos]])];
      term.cost[t] = rel.value(orig);
    }
    covered.insert(term.scope);
    p.terms.push_back(std::move(term));
  }

  // Constant-0 padding so every nonempty scope of size <= l appears.
  std::vector<std::vector<int>> subsets;
  enumerate_subsets(n, options.l, subsets);
  for (std::vector<int>& s : subsets) {
    if (covered.count(s)) continue;
    SaTerm term;
    term.padding = true;
    std::size_t sz = table_size(d, static_cast<int>(s.size()));
    term.scope = std::move(s);
    term.cost.assign(sz, ExtRational(0));
    p.terms.push_back(std::move(term));
  }

  // Columns; infeasible or pin-inconsistent tuples are eliminated.
  int q = static_cast<int>(p.terms.size());
  p.columns.resize(static_cast<std::size_t>(q));
  std::size_t total_cols = 0;
  for (int i = 0; i < q; ++i) {
    SaTerm& term = p.terms[static_cast<std::size_t>(i)];
    std::size_t sz = term.cost.size();
    p.columns[static_cast<std::size_t>(i)].assign(sz, -1);
    for (std::size_t t = 0; t < sz; ++t) {
      if (term.cost[t].is_infinite()) continue;
      Tuple tup = decode_tuple(t, d, static_cast<int>(term.scope.size()));
      bool ok = true;
      for (std::size_t pos = 0; pos < term.scope.size(); ++pos) {
        Label pin = pinned[static_cast<std::size_t>(term.scope[pos])];
        if (pin >= 0 && tup[pos] != pin) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      if (++total_cols > options.max_columns)
        throw ResourceError("SA program exceeds the column cap");
      std::string name = "l" + std::to_string(i) + "_" + std::to_string(t);
      p.columns[static_cast<std::size_t>(i)][t] =
          p.lp.add_variable(std::move(name), term.cost[t].finite());
    }
  }

  // Sum-to-1 per term.
  for (int i = 0; i < q; ++i) {
    LpRow row;
    row.rel = RowRelation::Equal;
    row.rhs = 1;
    for (int col : p.columns[static_cast<std::size_t>(i)])
      if (col >= 0) row.coeffs.emplace_back(col, Rational(1));
    p.sum1_row.push_back(p.lp.add_row(std::move(row)));
    p.row_info.push_back({SaRowInfo::Kind::Sum1, i, -1, 0});
  }

  // Marginal rows: lambda_j(t) = sum over parent tuples projecting to t.
  for (int i = 0; i < q; ++i) {
    const SaTerm& parent = p.terms[static_cast<std::size_t>(i)];
    int pa = static_cast<int>(parent.scope.size());
    std::size_t psz = parent.cost.size();
    for (int j = 0; j < q; ++j) {
      if (i == j) continue;
      const SaTerm& child = p.terms[static_cast<std::size_t>(j)];
      if (static_cast<int>(child.scope.size()) > options.k) continue;
      auto pos = subset_positions(child.scope, parent.scope);
      if (!pos) continue;
      // Group parent columns by their projection onto the child scope.
      std::size_t csz = child.cost.size();
      std::vector<std::vector<int>> groups(csz);
      for (std::size_t s = 0; s < psz; ++s) {
        int col = p.columns[static_cast<std::size_t>(i)][s];
        if (col < 0) continue;
        Tuple tup = decode_tuple(s, d, pa);
        std::size_t t = 0;
        for (int ppos : *pos)
          t = t * static_cast<std::size_t>(d) + static_cast<std::size_t>(tup[static_cast<std::size_t>(ppos)]);
        groups[t].push_back(col);
      }
      for (std::size_t t = 0; t < csz; ++t) {
        LpRow row;
        row.rel = RowRelation::Equal;
        row.rhs = 0;
        int child_col = p.columns[static_cast<std::size_t>(j)][t];
        if (child_col >= 0) row.coeffs.emplace_back(child_col, Rational(1));
        for (int col : groups[t]) row.coeffs.emplace_back(col, Rational(-1));
        if (row.coeffs.empty()) continue;  // both sides eliminated
        p.lp.add_row(std::move(row));
        p.row_info.push_back({SaRowInfo::Kind::Marginal, i, j, t});
      }
    }
  }
  return p;
}

Rational SaSolution::z(const SaProgram& p, int term) const {
  if (!has_duals) throw StructuralError("solution carries no duals");
  return row_duals[static_cast<std::size_t>(p.sum1_row[static_cast<std::size_t>(term)])];
}

SaSolution solve_sa(const SaProgram& program, const LpOptions& lp_options) {
  LpOutcome out = solve_lp(program.lp, lp_options);
  SaSolution sol;
  sol.pivots = out.pivots;
  if (out.status == LpStatus::Infeasible) {
    sol.status = LpStatus::Infeasible;
    sol.objective = ExtRational::infinity();
    return sol;
  }
  if (out.status != LpStatus::Optimal)
    throw StructuralError("internal: SA programs are bounded, the LP cannot be unbounded");
  sol.status = LpStatus::Optimal;
  sol.objective = ExtRational(out.objective);
  int q = static_cast<int>(program.terms.size());
  sol.lambda.resize(static_cast<std::size_t>(q));
  for (int i = 0; i < q; ++i) {
    std::size_t sz = program.terms[static_cast<std::size_t>(i)].cost.size();
    sol.lambda[static_cast<std::size_t>(i)].assign(sz, Rational(0));
    for (std::size_t t = 0; t < sz; ++t) {
      int col = program.columns[static_cast<std::size_t>(i)][t];
      if (col >= 0) sol.lambda[static_cast<std::size_t>(i)][t] = out.primal[static_cast<std::size_t>(col)];
    }
  }
  sol.has_duals = true;
  sol.row_duals = std::move(out.dual);
  return sol;
}

std::vector<std::vector<std::size_t>> sa_supports(const SaProgram& program,
                                                  const SaSolution& sol) {
  std::vector<std::vector<std::size_t>> supports(sol.lambda.size());
  for (std::size_t i = 0; i < sol.lambda.size(); ++i)
    for (std::size_t t = 0; t < sol.lambda[i].size(); ++t)
      if (sol.lambda[i][t] > 0) supports[i].push_back(t);
  (void)program;
  return supports;
}

bool sa_solution_feasible(const SaProgram& program, const SaSolution& sol) {
  if (sol.status != LpStatus::Optimal) return false;
  int q = static_cast<int>(program.terms.size());
  if (static_cast<int>(sol.lambda.size()) != q) return false;
  for (int i = 0; i < q; ++i) {
    const SaTerm& term = program.terms[static_cast<std::size_t>(i)];
    const auto& li = sol.lambda[static_cast<std::size_t>(i)];
    if (li.size() != term.cost.size()) return false;
    Rational sum(0);
    for (std::size_t t = 0; t < li.size(); ++t) {
      if (li[t] < 0) return false;
      if (term.cost[t].is_infinite() && li[t] != 0) return false;
      sum += li[t];
    }
    if (sum != 1) return false;
  }
  for (std::size_t r = 0; r < program.row_info.size(); ++r) {
    const SaRowInfo& info = program.row_info[r];
    if (info.kind != SaRowInfo::Kind::Marginal) continue;
    const SaTerm& parent = program.terms[static_cast<std::size_t>(info.i)];
    const SaTerm& child = program.terms[static_cast<std::size_t>(info.j)];
    auto pos = subset_positions(child.scope, parent.scope);
    Rational mass(0);
    int pa = static_cast<int>(parent.scope.size());
    for (std::size_t s = 0; s < parent.cost.size(); ++s) {
      if (sol.lambda[static_cast<std::size_t>(info.i)][s] == 0) continue;
      Tuple tup = decode_tuple(s, program.domain_size, pa);
      std::size_t t = 0;
      for (int ppos : *pos)
        t = t * static_cast<std::size_t>(program.domain_size) +
            static_cast<std::size_t>(tup[static_cast<std::size_t>(ppos)]);
      if (t == info.t) mass += sol.lambda[static_cast<std::size_t>(info.i)][s];
    }
    if (mass != sol.lambda[static_cast<std::size_t>(info.j)][info.t]) return false;
  }
  return true;
}

ExtRational sa_objective(const SaProgram& program,
                         const std::vector<std::vector<Rational>>& lambda) {
  ExtRational total(0);
  for (std::size_t i = 0; i < program.terms.size(); ++i) {
    const SaTerm& term = program.terms[i];
    for (std::size_t t = 0; t < term.cost.size(); ++t) {
      const Rational& l = lambda[i][t];
      if (l == 0) continue;
      total += l * term.cost[t];
    }
  }
  return total;
}

SaSolution apply_fractional(const SaProgram& program, const SaSolution& sol,
                            const FractionalOperation& omega, std::size_t work_cap) {
  if (sol.status != LpStatus::Optimal)
    throw StructuralError("apply_fractional needs a feasible solution");
  if (omega.domain_size() != program.domain_size)
    throw StructuralError("fractional operation domain mismatch");
  int m = omega.arity();
  int d = program.domain_size;

  SaSolution out;
  out.status = LpStatus::Optimal;
  out.lambda.resize(sol.lambda.size());
  for (std::size_t i = 0; i < program.terms.size(); ++i) {
    const SaTerm& term = program.terms[i];
    int arity = static_cast<int>(term.scope.size());
    std::vector<std::size_t> supp;
    for (std::size_t t = 0; t < sol.lambda[i].size(); ++t)
      if (sol.lambda[i][t] > 0) supp.push_back(t);

    std::size_t combos = 1;
    for (int j = 0; j < m; ++j) {
      if (supp.empty() || combos > work_cap / supp.size() + 1)
        throw ResourceError("apply_fractional support blowup");
      combos *= supp.size();
    }
    if (combos * omega.weights().size() > work_cap)
      throw ResourceError("apply_fractional support blowup");

    std::vector<Tuple> decoded;
    decoded.reserve(supp.size());
    for (std::size_t t : supp) decoded.push_back(decode_tuple(t, d, arity));

    out.lambda[i].assign(sol.lambda[i].size(), Rational(0));
    std::vector<std::size_t> pick(static_cast<std::size_t>(m), 0);
    Tuple args(static_cast<std::size_t>(m));
    for (std::size_t c = 0; c < combos; ++c) {
      Rational prob(1);
      for (std::size_t j = 0; j < pick.size(); ++j) prob *= sol.lambda[i][supp[pick[j]]];
      for (const auto& [f, w] : omega.weights()) {
        std::size_t image = 0;
        for (int coord = 0; coord < arity; ++coord) {
          for (int j = 0; j < m; ++j)
            args[static_cast<std::size_t>(j)] =
                decoded[pick[static_cast<std::size_t>(j)]][static_cast<std::size_t>(coord)];
          image = image * static_cast<std::size_t>(d) + static_cast<std::size_t>(f.apply(args));
        }
        out.lambda[i][image] += w * prob;
      }
      for (int j = m - 1; j >= 0; --j) {
        if (++pick[static_cast<std::size_t>(j)] < supp.size()) break;
        pick[static_cast<std::size_t>(j)] = 0;
      }
    }
  }
  out.objective = sa_objective(program, out.lambda);
  return out;
}

namespace {

SaSolution average(const SaProgram& program, const SaSolution& a, const SaSolution& b) {
  SaSolution out;
  out.status = LpStatus::Optimal;
  out.lambda.resize(a.lambda.size());
  Rational half(1, 2);
  for (std::size_t i = 0; i < a.lambda.size(); ++i) {
    out.lambda[i].resize(a.lambda[i].size());
    for (std::size_t t = 0; t < a.lambda[i].size(); ++t)
      out.lambda[i][t] = half * (a.lambda[i][t] + b.lambda[i][t]);
  }
  out.objective = sa_objective(program, out.lambda);
  return out;
}

}  // namespace

SaSolution saturate_support(const SaProgram& program, const SaSolution& sol,
                            const std::vector<FractionalOperation>& witnesses,
                            std::size_t work_cap) {
  // One representative witness per distinct support operation.
  std::vector<std::pair<Operation, const FractionalOperation*>> ops;
  for (const FractionalOperation& w : witnesses)
    for (const auto& [f, weight] : w.weights()) {
      bool seen = false;
      for (const auto& [g, src] : ops)
        if (g == f) seen = true;
      if (!seen) ops.emplace_back(f, &w);
    }

  SaSolution current = sol;
  std::size_t bound = 1;
  for (std::size_t i = 0; i < program.terms.size(); ++i)
    bound += program.terms[i].cost.size();

  for (std::size_t round = 0; round <= bound; ++round) {
    const FractionalOperation* violated = nullptr;
    for (std::size_t i = 0; i < program.terms.size() && !violated; ++i) {
      int arity = static_cast<int>(program.terms[i].scope.size());
      std::vector<std::size_t> supp;
      for (std::size_t t = 0; t < current.lambda[i].size(); ++t)
        if (current.lambda[i][t] > 0) supp.push_back(t);
      std::vector<Tuple> decoded;
      for (std::size_t t : supp) decoded.push_back(decode_tuple(t, program.domain_size, arity));
      for (const auto& [f, src] : ops) {
        int m = f.arity();
        std::size_t combos = 1;
        for (int j = 0; j < m; ++j) {
          if (supp.empty() || combos > work_cap / supp.size() + 1)
            throw ResourceError("saturation work cap exceeded");
          combos *= supp.size();
        }
        std::vector<std::size_t> pick(static_cast<std::size_t>(m), 0);
        Tuple args(static_cast<std::size_t>(m));
        for (std::size_t c = 0; c < combos && !violated; ++c) {
          std::size_t image = 0;
          for (int coord = 0; coord < arity; ++coord) {
            for (int j = 0; j < m; ++j)
              args[static_cast<std::size_t>(j)] =
                  decoded[pick[static_cast<std::size_t>(j)]][static_cast<std::size_t>(coord)];
            image = image * static_cast<std::size_t>(program.domain_size) +
                    static_cast<std::size_t>(f.apply(args));
          }
          if (current.lambda[i][image] == 0) violated = src;
          for (int j = m - 1; j >= 0; --j) {
            if (++pick[static_cast<std::size_t>(j)] < supp.size()) break;
            pick[static_cast<std::size_t>(j)] = 0;
          }
        }
        if (violated) break;
      }
    }
    if (!violated) return current;
    current = average(program, current, apply_fractional(program, current, *violated, work_cap));
  }
  throw StructuralError("internal: saturation did not terminate within the support bound");
}

bool check_complementary_slackness(const SaProgram& program, const SaSolution& sol,
                                   const Assignment& sigma) {
  if (!sol.has_duals) throw StructuralError("solution carries no duals");
  if (static_cast<int>(sigma.size()) != program.num_vars)
    throw StructuralError("assignment must be total");
  int q = static_cast<int>(program.terms.size());

  // sigma must land in every per-term support.
  std::vector<std::size_t> sigma_idx(static_cast<std::size_t>(q));
  for (int i = 0; i < q; ++i) {
    sigma_idx[static_cast<std::size_t>(i)] = program.restrict_assignment(i, sigma);
    if (sol.lambda[static_cast<std::size_t>(i)][sigma_idx[static_cast<std::size_t>(i)]] == 0)
      return false;
  }

  // Tightness of the dual rows picked out by sigma:
  //   z_i + sum_{parents} y_{i,sigma(S_i),parent rows} -
  //   sum_{children} y_{child,sigma(S_child),i} = phi_i(sigma(S_i)).
  std::vector<Rational> lhs(static_cast<std::size_t>(q), Rational(0));
  for (int i = 0; i < q; ++i) lhs[static_cast<std::size_t>(i)] = sol.z(program, i);
  for (std::size_t r = 0; r < program.row_info.size(); ++r) {
    const SaRowInfo& info = program.row_info[r];
    if (info.kind != SaRowInfo::Kind::Marginal) continue;
    const Rational& y = sol.row_duals[r];
    if (y == 0) continue;
    // Row (parent i, child j, tuple t): +1 on lambda_j(t), -1 on parent
    // columns over t. In the dual constraint of column (j, t) it adds +y; in
    // the one of column (i, s) with projection t it adds -y.
    if (info.t == sigma_idx[static_cast<std::size_t>(info.j)]) {
      lhs[static_cast<std::size_t>(info.j)] += y;
      lhs[static_cast<std::size_t>(info.i)] -= y;
    }
  }
  Rational z_total(0), value_total(0);
  for (int i = 0; i < q; ++i) {
    const ExtRational& cost = program.terms[static_cast<std::size_t>(i)].cost[sigma_idx[static_cast<std::size_t>(i)]];
    if (cost.is_infinite()) return false;
    if (lhs[static_cast<std::size_t>(i)] != cost.finite()) return false;
    z_total += sol.z(program, i);
    value_total += cost.finite();
  }
  return z_total == value_total;
}

CrispNetwork support_network(const SaProgram& program, const SaSolution& sol) {
  CrispNetwork net;
  net.num_vars = program.num_vars;
  net.domain_size = program.domain_size;
  for (std::size_t i = 0; i < program.terms.size(); ++i) {
    CrispConstraint c;
    c.scope = program.terms[i].scope;
    for (std::size_t t = 0; t < sol.lambda[i].size(); ++t)
      if (sol.lambda[i][t] > 0) c.tuples.insert(t);
    net.constraints.push_back(std::move(c));
  }
  return net;
}

}  // namespace vcsp
