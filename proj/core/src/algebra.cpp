#include "vcsp/algebra.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <set>

namespace vcsp {

namespace {

struct RowOrigin {
  const WeightedRelation* phi;
  std::vector<std::size_t> picks;  // feasible tuple indices x_1..x_k
};

// First k-vector of feasible tuples whose f-image leaves feas(phi).
// Vectors drawn from opt(phi) are preferred: they make the lifted witness
// instance airtight for weighted relations too.
std::optional<std::vector<std::size_t>> find_violation(const Operation& f,
                                                       const WeightedRelation& phi,
                                                       std::size_t work_cap) {
  int k = f.arity();
  int m = phi.arity();
  int d = phi.domain_size();
  for (int pass = 0; pass < 2; ++pass) {
    std::vector<std::size_t> source =
        pass == 0 ? phi.optimal_indices() : phi.feasible_indices();
    if (source.empty()) continue;
    std::size_t combos = 1;
    bool too_big = false;
    for (int i = 0; i < k; ++i) {
      if (combos > work_cap / source.size() + 1) {
        too_big = true;
        break;
      }
      combos *= source.size();
    }
    if (too_big) throw ResourceError("polymorphism violation search too large");
    std::vector<Tuple> decoded;
    decoded.reserve(source.size());
    for (std::size_t idx : source) decoded.push_back(decode_tuple(idx, d, m));
    std::vector<std::size_t> pick(static_cast<std::size_t>(k), 0);
    Tuple args(static_cast<std::size_t>(k));
    for (std::size_t c = 0; c < combos; ++c) {
      std::size_t image = 0;
      for (int j = 0; j < m; ++j) {
        for (int i = 0; i < k; ++i)
          args[static_cast<std::size_t>(i)] =
              decoded[pick[static_cast<std::size_t>(i)]][static_cast<std::size_t>(j)];
        image = image * static_cast<std::size_t>(d) + static_cast<std::size_t>(f.apply(args));
      }
      if (phi.value_at(image).is_infinite()) {
        std::vector<std::size_t> out;
        for (std::size_t p : pick) out.push_back(source[p]);
        return out;
      }
      for (int i = k - 1; i >= 0; --i) {
        if (++pick[static_cast<std::size_t>(i)] < source.size()) break;
        pick[static_cast<std::size_t>(i)] = 0;
      }
    }
  }
  return std::nullopt;
}

// Variable index of the k-tuple (x_1[j],...,x_k[j]) in the witness instance
// over V = D^k.
int lifted_variable(const std::vector<Tuple>& tuples, int j, int d) {
  std::size_t idx = 0;
  for (const Tuple& t : tuples)
    idx = idx * static_cast<std::size_t>(d) + static_cast<std::size_t>(t[static_cast<std::size_t>(j)]);
  return static_cast<int>(idx);
}

Instance lifted_instance(const Language& gamma, const WeightedRelation& phi,
                         const std::vector<Tuple>& tuples, int multiplicity) {
  int d = gamma.domain_size();
  int k = static_cast<int>(tuples.size());
  int nvars = static_cast<int>(table_size(d, k));
  Constraint c;
  c.relation = phi.name();
  for (int j = 0; j < phi.arity(); ++j) c.scope.push_back(lifted_variable(tuples, j, d));
  std::vector<Constraint> cs(static_cast<std::size_t>(multiplicity), c);
  return Instance(std::make_shared<Language>(gamma), nvars, std::move(cs));
}

}  // namespace

std::vector<Operation> polymorphisms(const Language& gamma, int k, std::size_t max_raw_ops) {
  std::vector<Operation> raw = enumerate_operations(gamma.domain_size(), k, max_raw_ops);
  std::vector<Operation> out;
  for (Operation& g : raw)
    if (is_polymorphism(g, gamma)) out.push_back(std::move(g));
  return out;
}

SuppMembership supp_membership(const Operation& f, const Language& gamma,
                               const SuppOptions& options) {
  int d = gamma.domain_size();
  if (f.domain_size() != d) throw StructuralError("operation and language domain mismatch");
  int k = f.arity();

  SuppMembership answer;
  answer.max_weight = 0;

  // f outside pol(Gamma) short-circuits: the violated relation, lifted to an
  // instance over V = D^k, already separates f from the projections.
  for (const auto& [name, phi] : gamma.relations()) {
    auto viol = find_violation(f, phi, options.work_cap);
    if (viol) {
      if (options.want_witness) {
        std::vector<Tuple> tuples;
        for (std::size_t idx : *viol) tuples.push_back(decode_tuple(idx, d, phi.arity()));
        answer.witness_instance = lifted_instance(gamma, phi, tuples, 1);
      }
      return answer;
    }
  }

  std::vector<Operation> pol = polymorphisms(gamma, k, options.max_raw_ops);

  if (!options.want_witness) {
    // Restricting the variable set to operations that also preserve every
    // opt(phi) keeps the optimum: any fractional polymorphism is supported
    // inside supp(Gamma), which preserves all optimality relations.
    std::vector<WeightedRelation> opt_rels;
    for (const auto& [name, phi] : gamma.relations()) opt_rels.push_back(phi.opt_relation());
    std::vector<Operation> reduced;
    for (Operation& g : pol) {
      bool keep = true;
      for (const WeightedRelation& rel : opt_rels)
        if (!is_polymorphism(g, rel, options.work_cap)) {
          keep = false;
          break;
        }
      if (keep) reduced.push_back(std::move(g));
    }
    pol = std::move(reduced);
    bool f_present = false;
    for (const Operation& g : pol)
      if (g == f) f_present = true;
    if (!f_present) return answer;  // f breaks some opt(phi): not in supp
  }

  int f_col = -1;
  for (std::size_t i = 0; i < pol.size(); ++i)
    if (pol[i] == f) f_col = static_cast<int>(i);
  if (f_col < 0) throw StructuralError("internal: f not found among polymorphisms");

  // System (over the weights of the candidate operations): for every
  // relation and every k-vector of feasible tuples, the expected value of
  // the image is at most the average of the arguments; weights sum to one;
  // maximize the weight of f.
  LinearProgram lp(LpSense::Maximize);
  for (std::size_t i = 0; i < pol.size(); ++i)
    lp.add_variable("w" + std::to_string(i), i == static_cast<std::size_t>(f_col) ? 1 : 0);

  std::vector<RowOrigin> origins;
  for (const auto& [name, phi] : gamma.relations()) {
    std::vector<std::size_t> feas = phi.feasible_indices();
    if (feas.empty()) continue;
    std::size_t combos = 1;
    for (int i = 0; i < k; ++i) {
      if (combos > options.work_cap / feas.size() + 1)
        throw ResourceError("supp membership row set too large");
      combos *= feas.size();
    }
    if (combos * pol.size() > options.work_cap)
      throw ResourceError("supp membership LP too large");
    std::vector<Tuple> decoded;
    decoded.reserve(feas.size());
    for (std::size_t idx : feas) decoded.push_back(decode_tuple(idx, d, phi.arity()));

    std::vector<std::size_t> pick(static_cast<std::size_t>(k), 0);
    Tuple args(static_cast<std::size_t>(k));
    int m = phi.arity();
    for (std::size_t c = 0; c < combos; ++c) {
      Rational avg(0);
      for (std::size_t p : pick) avg += phi.value_at(feas[p]).finite();
      avg /= k;
      LpRow row;
      row.rel = RowRelation::LessEq;
      row.rhs = avg;
      for (std::size_t g = 0; g < pol.size(); ++g) {
        std::size_t image = 0;
        for (int j = 0; j < m; ++j) {
          for (int i = 0; i < k; ++i)
            args[static_cast<std::size_t>(i)] =
                decoded[pick[static_cast<std::size_t>(i)]][static_cast<std::size_t>(j)];
          image = image * static_cast<std::size_t>(d) +
                  static_cast<std::size_t>(pol[g].apply(args));
        }
        const Rational& v = phi.value_at(image).finite();
        if (v != 0) row.coeffs.emplace_back(static_cast<int>(g), v);
      }
      lp.add_row(std::move(row));
      if (options.want_witness) {
        RowOrigin origin;
        origin.phi = &phi;
        for (std::size_t p : pick) origin.picks.push_back(feas[p]);
        origins.push_back(std::move(origin));
      }
      for (int i = k - 1; i >= 0; --i) {
        if (++pick[static_cast<std::size_t>(i)] < feas.size()) break;
        pick[static_cast<std::size_t>(i)] = 0;
      }
    }
  }
  int sum_row;
  {
    LpRow row;
    row.rel = RowRelation::Equal;
    row.rhs = 1;
    for (std::size_t g = 0; g < pol.size(); ++g) row.coeffs.emplace_back(static_cast<int>(g), Rational(1));
    sum_row = lp.add_row(std::move(row));
  }

  LpOutcome out = solve_lp(lp);
  if (out.status != LpStatus::Optimal)
    throw StructuralError("internal: supp membership LP must have an optimum");
  answer.max_weight = out.objective;
  answer.member = out.objective > 0;

  if (answer.member) {
    std::vector<std::pair<Operation, Rational>> weights;
    for (std::size_t g = 0; g < pol.size(); ++g)
      if (out.primal[g] > 0) weights.emplace_back(pol[g], out.primal[g]);
    answer.witness = FractionalOperation(d, k, std::move(weights));
    return answer;
  }

  if (options.want_witness) {
    // Farkas side: scale the duals on the averaging rows to integers and read
    // them as constraint multiplicities of an instance on V = D^k.
    mpz_class lcm_den(1);
    for (std::size_t r = 0; r < origins.size(); ++r) {
      const Rational& z = out.dual[r];
      if (z > 0) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), z.get_den().get_mpz_t());
      if (z < 0) throw StructuralError("internal: negative dual on a <= row");
    }
    int nvars = static_cast<int>(table_size(d, k));
    std::vector<Constraint> cs;
    for (std::size_t r = 0; r < origins.size(); ++r) {
      const Rational& z = out.dual[r];
      if (z <= 0) continue;
      mpz_class mult = z.get_num() * (lcm_den / z.get_den());
      if (mult > 1'000'000) throw ResourceError("witness instance multiplicities too large");
      std::vector<Tuple> tuples;
      for (std::size_t idx : origins[r].picks)
        tuples.push_back(decode_tuple(idx, d, origins[r].phi->arity()));
      Constraint c;
      c.relation = origins[r].phi->name();
      for (int j = 0; j < origins[r].phi->arity(); ++j)
        c.scope.push_back(lifted_variable(tuples, j, d));
      long count = mult.get_si();
      if (cs.size() + static_cast<std::size_t>(count) > 1'000'000)
        throw ResourceError("witness instance too large");
      for (long t = 0; t < count; ++t) cs.push_back(c);
    }
    (void)sum_row;
    answer.witness_instance =
        Instance(std::make_shared<Language>(gamma), nvars, std::move(cs));
  }
  return answer;
}

std::vector<Operation> clone_generate(const std::vector<Operation>& seeds, int arity_bound,
                                      int domain_size, std::size_t max_ops,
                                      std::size_t work_cap) {
  if (arity_bound < 1) throw StructuralError("arity bound must be >= 1");
  std::set<Operation> clone;
  for (int k = 1; k <= arity_bound; ++k)
    for (int i = 1; i <= k; ++i) clone.insert(Operation::projection(domain_size, k, i));
  for (const Operation& s : seeds) {
    if (s.domain_size() != domain_size) throw StructuralError("seed domain mismatch");
    if (s.arity() > arity_bound) throw StructuralError("seed arity exceeds the bound");
    clone.insert(s);
  }

  std::size_t work = 0;
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Operation> snapshot(clone.begin(), clone.end());
    std::map<int, std::vector<const Operation*>> by_arity;
    for (const Operation& g : snapshot) by_arity[g.arity()].push_back(&g);
    for (const Operation& f : snapshot) {
      int k = f.arity();
      for (const auto& [l, gs] : by_arity) {
        std::size_t combos = 1;
        for (int i = 0; i < k; ++i) {
          if (combos > work_cap / gs.size() + 1)
            throw ResourceError("clone generation work cap exceeded");
          combos *= gs.size();
        }
        work += combos;
        if (work > work_cap) throw ResourceError("clone generation work cap exceeded");
        std::vector<std::size_t> pick(static_cast<std::size_t>(k), 0);
        for (std::size_t c = 0; c < combos; ++c) {
          std::vector<Operation> inner;
          inner.reserve(static_cast<std::size_t>(k));
          for (std::size_t p : pick) inner.push_back(*gs[p]);
          Operation composed = compose(f, inner);
          if (clone.insert(composed).second) {
            grew = true;
            if (clone.size() > max_ops) throw ResourceError("clone size cap exceeded");
          }
          for (int i = k - 1; i >= 0; --i) {
            if (++pick[static_cast<std::size_t>(i)] < gs.size()) break;
            pick[static_cast<std::size_t>(i)] = 0;
          }
        }
      }
    }
  }
  return std::vector<Operation>(clone.begin(), clone.end());
}

Operation left_fold(const Operation& t, int arity) {
  if (t.arity() != 2) throw StructuralError("left_fold needs a binary operation");
  if (arity < 2) throw StructuralError("left_fold arity must be >= 2");
  int d = t.domain_size();
  std::size_t n = table_size(d, arity);
  std::vector<Label> table(n);
  for (std::size_t i = 0; i < n; ++i) {
    Tuple args = decode_tuple(i, d, arity);
    Label acc = args[0];
    for (int j = 1; j < arity; ++j) {
      Label pair[2] = {acc, args[static_cast<std::size_t>(j)]};
      acc = t.apply(pair);
    }
    table[i] = acc;
  }
  return Operation(t.name() + "_fold" + std::to_string(arity), d, arity, std::move(table));
}

namespace {

bool wnu_pair_identity(const Operation& f3, const Operation& g4) {
  int d = f3.domain_size();
  for (Label x = 0; x < d; ++x)
    for (Label y = 0; y < d; ++y) {
      Label a3[3] = {y, x, x};
      Label a4[4] = {y, x, x, x};
      if (f3.apply(a3) != g4.apply(a4)) return false;
    }
  return true;
}

std::vector<Operation> tournament_candidates(int d) {
  // Binary conservative commutative operations: one choice from {a, b} per
  // unordered pair a < b.
  std::vector<std::pair<Label, Label>> pairs;
  for (Label a = 0; a < d; ++a)
    for (Label b = a + 1; b < d; ++b) pairs.emplace_back(a, b);
  std::vector<Operation> out;
  std::size_t count = std::size_t{1} << pairs.size();
  for (std::size_t mask = 0; mask < count; ++mask) {
    std::vector<Label> table(table_size(d, 2));
    for (Label x = 0; x < d; ++x) {
      Label diag[2] = {x, x};
      table[encode_tuple(diag, d)] = x;
    }
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      auto [a, b] = pairs[p];
      Label v = (mask >> p) & 1 ? b : a;
      Label ab[2] = {a, b}, ba[2] = {b, a};
      table[encode_tuple(ab, d)] = v;
      table[encode_tuple(ba, d)] = v;
    }
    out.emplace_back("t" + std::to_string(mask), d, 2, std::move(table));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

BwcAnswer bwc_test(const Language& gamma, const std::vector<BwcCandidate>& candidates,
                   const SuppOptions& options) {
  int d = gamma.domain_size();
  BwcAnswer answer;

  if (d == 1) {
    // Everything is a projection on a one-element domain.
    Operation f3("f3", 1, 3, {0});
    Operation g4("g4", 1, 4, {0});
    answer.verdict = BwcAnswer::Verdict::Yes;
    answer.witness = {f3, g4};
    answer.note = "one-element core";
    return answer;
  }

  SuppOptions quick = options;
  quick.want_witness = false;

  // Tournament fast path: a binary conservative commutative support
  // operation is a 2-semilattice, so its left folds are WNUs satisfying the
  // pair identity.
  for (const Operation& t : tournament_candidates(d)) {
    if (t.projection_coordinate()) continue;  // projections generate nothing new
    SuppMembership m = supp_membership(t, gamma, quick);
    if (!m.member) continue;
    Operation f3 = left_fold(t, 3);
    Operation g4 = left_fold(t, 4);
    if (f3.is_wnu() && g4.is_wnu() && wnu_pair_identity(f3, g4)) {
      answer.verdict = BwcAnswer::Verdict::Yes;
      answer.witness = {f3, g4};
      answer.note = "tournament operation " + t.name();
      return answer;
    }
  }

  // Majority fast path (requires an enumerable ternary operation space,
  // i.e. d^(d^3) within the cap).
  bool ternary_enumerable = true;
  {
    std::size_t entries = table_size(d, 3);
    std::size_t count = 1;
    for (std::size_t i = 0; i < entries; ++i) {
      if (count > options.max_raw_ops / static_cast<std::size_t>(d) + 1) {
        ternary_enumerable = false;
        break;
      }
      count *= static_cast<std::size_t>(d);
    }
    if (count > options.max_raw_ops) ternary_enumerable = false;
  }
  if (ternary_enumerable) {
    for (const Operation& m3 : enumerate_operations(d, 3, options.max_raw_ops)) {
      if (!m3.is_majority()) continue;
      SuppMembership m = supp_membership(m3, gamma, quick);
      if (!m.member) continue;
      // g_k(x_1,...,x_k) = f(x_1,x_2,x_3) is a WNU of arity k.
      std::size_t n4 = table_size(d, 4);
      std::vector<Label> table(n4);
      for (std::size_t i = 0; i < n4; ++i) {
        Tuple t = decode_tuple(i, d, 4);
        Label a[3] = {t[0], t[1], t[2]};
        table[i] = m3.apply(a);
      }
      Operation g4("g4_from_majority", d, 4, std::move(table));
      answer.verdict = BwcAnswer::Verdict::Yes;
      answer.witness = {m3, g4};
      answer.note = "majority operation";
      return answer;
    }
    if (d == 2) {
      // Exhaustive Boolean search over WNU pairs satisfying the identity;
      // complete, so a miss is a definite no.
      std::vector<Operation> f3s, g4s;
      for (const Operation& f : enumerate_operations(2, 3, options.max_raw_ops))
        if (f.is_wnu()) f3s.push_back(f);
      for (const Operation& g : enumerate_operations(2, 4, options.max_raw_ops))
        if (g.is_wnu()) g4s.push_back(g);
      for (const Operation& f : f3s) {
        SuppMembership mf = supp_membership(f, gamma, quick);
        if (!mf.member) continue;
        for (const Operation& g : g4s) {
          if (!wnu_pair_identity(f, g)) continue;
          SuppMembership mg = supp_membership(g, gamma, quick);
          if (mg.member) {
            answer.verdict = BwcAnswer::Verdict::Yes;
            answer.witness = {f, g};
            answer.note = "WNU pair search";
            return answer;
          }
        }
      }
      answer.verdict = BwcAnswer::Verdict::No;
      answer.note = "exhaustive Boolean WNU pair search";
      return answer;
    }
  }

  for (const BwcCandidate& cand : candidates) {
    if (cand.f.arity() != 3 || cand.g.arity() != 4) continue;
    if (!cand.f.is_wnu() || !cand.g.is_wnu() || !wnu_pair_identity(cand.f, cand.g)) continue;
    if (!cand.omega_f.supports(cand.f) || !cand.omega_g.supports(cand.g)) continue;
    if (is_fractional_polymorphism(cand.omega_f, gamma).ok &&
        is_fractional_polymorphism(cand.omega_g, gamma).ok) {
      answer.verdict = BwcAnswer::Verdict::Yes;
      answer.witness = {cand.f, cand.g};
      answer.note = "verified supplied candidate";
      return answer;
    }
  }

  answer.verdict = BwcAnswer::Verdict::Unknown;
  answer.note = "search space beyond enumeration caps";
  return answer;
}

CoreResult core_of(const Language& gamma, const SuppOptions& options) {
  CoreResult result{gamma, {}, {}};
  int d0 = gamma.domain_size();
  for (Label l = 0; l < d0; ++l) result.core_labels.push_back(l);

  SuppOptions quick = options;
  quick.want_witness = false;

  for (;;) {
    int d = result.core.domain_size();
    if (d == 1) return result;
    std::vector<Operation> unary = enumerate_operations(d, 1, options.max_raw_ops);
    // Non-bijective candidates: smallest image first, table order after.
    std::vector<std::pair<int, Operation>> cands;
    for (Operation& h : unary) {
      std::set<Label> image(h.table().begin(), h.table().end());
      if (static_cast<int>(image.size()) == d) continue;
      cands.emplace_back(static_cast<int>(image.size()), std::move(h));
    }
    std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first < b.first;
      return a.second < b.second;
    });

    const Operation* found = nullptr;
    for (const auto& [img, h] : cands) {
      SuppMembership m = supp_membership(h, result.core, quick);
      if (m.member) {
        found = &h;
        break;
      }
    }
    if (!found) return result;

    std::set<Label> image_set(found->table().begin(), found->table().end());
    std::vector<Label> keep(image_set.begin(), image_set.end());
    Language next(static_cast<int>(keep.size()));
    for (const auto& [name, rel] : result.core.relations())
      next.add(rel.restricted(keep, name));
    std::vector<Label> labels;
    for (Label l : keep) labels.push_back(result.core_labels[static_cast<std::size_t>(l)]);
    result.chain.push_back(*found);
    result.core = std::move(next);
    result.core_labels = std::move(labels);
  }
}

Language add_constants(const Language& gamma) {
  Language out = gamma;
  for (Label l = 0; l < gamma.domain_size(); ++l) {
    std::string name = "__const_" + std::to_string(l);
    WeightedRelation rel = WeightedRelation::unary_singleton(name, gamma.domain_size(), l);
    if (out.has(name)) {
      if (!out.at(name).same_table(rel))
        throw StructuralError("relation '" + name + "' exists with a different table");
      continue;
    }
    out.add(std::move(rel));
  }
  return out;
}

OptGadget opt_gadget(const Instance& inner, const Instance& outer, const std::string& opt_name,
                     std::size_t cap) {
  const Language& outer_lang = outer.language();
  if (!outer_lang.has(opt_name))
    throw StructuralError("outer instance language lacks relation '" + opt_name + "'");
  const WeightedRelation& opt_rel = outer_lang.at(opt_name);
  if (opt_rel.arity() != inner.num_vars())
    throw StructuralError("opt relation arity does not match the inner instance");

  WeightedRelation computed = opt_relation(inner, cap);
  if (!computed.same_table(opt_rel))
    throw StructuralError("relation '" + opt_name + "' is not the optimality relation of the inner instance");

  // Exhaustive scan of the inner instance: optimum and least sub-optimal gap.
  int n = inner.num_vars();
  int d = inner.language().domain_size();
  std::size_t count = table_size(d, n);
  if (count > cap) throw ResourceError("inner instance too large for the gadget");
  ExtRational best = ExtRational::infinity();
  std::vector<ExtRational> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    values[i] = eval(inner, decode_tuple(i, d, n));
    if (values[i] < best) best = values[i];
  }
  if (best.is_infinite()) throw StructuralError("inner instance is unsatisfiable; opt undefined");

  std::optional<Rational> gap;
  for (std::size_t i = 0; i < count; ++i) {
    if (values[i].is_infinite() || values[i] == best) continue;
    Rational diff = values[i].finite() - best.finite();
    if (!gap || diff < *gap) gap = diff;
  }

  Rational upper(0), lower(0);
  for (const Constraint& c : outer.constraints()) {
    const WeightedRelation& rel = outer_lang.at(c.relation);
    if (auto mx = rel.max_finite_value()) upper += *mx;
    if (auto mn = rel.min_finite_value()) lower += *mn;
  }

  mpz_class copies(1);
  if (gap) {
    Rational c = rational_ceil((upper - lower + 1) / *gap);
    copies = c.get_num();
    if (copies < 1) copies = 1;
  }

  // The outer language minus the opt relation.
  auto reduced = std::make_shared<Language>(outer_lang.domain_size());
  for (const auto& [name, rel] : outer_lang.relations())
    if (name != opt_name) reduced->add(rel);
  for (const Constraint& c : inner.constraints())
    if (!reduced->has(c.relation) ||
        !reduced->at(c.relation).same_table(inner.language().at(c.relation)))
      throw StructuralError("outer language must contain the inner language");

  OptGadget out{Instance(reduced, 0, {}), copies, 0, upper, lower, gap, best.finite()};

  std::vector<Constraint> cs;
  if (copies > static_cast<long>(cap) ||
      copies * static_cast<long>(inner.constraints().size()) > static_cast<long>(cap))
    throw ResourceError("gadget expansion too large");
  long copies_l = copies.get_si();
  for (const Constraint& c : outer.constraints()) {
    if (c.relation != opt_name) {
      cs.push_back(c);
      continue;
    }
    ++out.occurrences;
    for (long t = 0; t < copies_l; ++t)
      for (const Constraint& ic : inner.constraints()) {
        Constraint mapped;
        mapped.relation = ic.relation;
        for (int v : ic.scope) mapped.scope.push_back(c.scope[static_cast<std::size_t>(v)]);
        cs.push_back(std::move(mapped));
      }
    if (cs.size() > cap) throw ResourceError("gadget expansion too large");
  }
  out.instance = Instance(reduced, outer.num_vars(), std::move(cs));
  return out;
}

}  // namespace vcsp
