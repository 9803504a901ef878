#include <algorithm>

#include "doctest.h"
#include "helpers.hpp"
#include "vcsp/algebra.hpp"

using namespace vcsp;
using namespace vcsp::testing;

namespace {

// Exhaustive instance minimum used as the test-side oracle.
ExtRational oracle_min(const Instance& inst) {
  int d = inst.language().domain_size();
  int n = inst.num_vars();
  ExtRational best = ExtRational::infinity();
  for (std::size_t i = 0; i < table_size(d, n); ++i) {
    ExtRational v = eval(inst, decode_tuple(i, d, n));
    if (v < best) best = v;
  }
  return best;
}

// The i-th projection read as an assignment on the witness variables D^k.
Assignment projection_assignment(int d, int k, int coord, int nvars) {
  Assignment a(static_cast<std::size_t>(nvars));
  for (int v = 0; v < nvars; ++v)
    a[static_cast<std::size_t>(v)] = decode_tuple(static_cast<std::size_t>(v), d, k)[static_cast<std::size_t>(coord)];
  return a;
}

// f itself read as an assignment (its value on each variable-tuple).
Assignment op_assignment(const Operation& f, int nvars) {
  Assignment a(static_cast<std::size_t>(nvars));
  for (int v = 0; v < nvars; ++v)
    a[static_cast<std::size_t>(v)] = f.apply_index(static_cast<std::size_t>(v));
  return a;
}

void check_negative_witness(const Operation& f, const Instance& witness) {
  int d = witness.language().domain_size();
  int k = f.arity();
  REQUIRE(witness.num_vars() == static_cast<int>(table_size(d, k)));
  ExtRational best = oracle_min(witness);
  REQUIRE(best.is_finite());
  ExtRational proj_value(0);
  for (int c = 0; c < k; ++c) {
    ExtRational v = eval(witness, projection_assignment(d, k, c, witness.num_vars()));
    CHECK(v == best);  // every projection is optimal
    proj_value = v;
  }
  ExtRational fv = eval(witness, op_assignment(f, witness.num_vars()));
  CHECK(fv > proj_value);  // f is strictly worse or infeasible
}

}  // namespace

TEST_CASE("min is in the support clone of the cut relation") {
  auto cut = lang_of({make_cut()});
  SuppMembership m = supp_membership(bool_min(), *cut);
  REQUIRE(m.member);
  REQUIRE(m.witness.has_value());
  CHECK(m.witness->supports(bool_min()));
  CHECK(is_fractional_polymorphism(*m.witness, *cut).ok);
}

TEST_CASE("min is not in the support clone of the xor relation") {
  auto xr = lang_of({make_xor()});
  SuppMembership m = supp_membership(bool_min(), *xr);
  REQUIRE(!m.member);
  REQUIRE(m.witness_instance.has_value());
  check_negative_witness(bool_min(), *m.witness_instance);
}

TEST_CASE("projections always belong to the support clone") {
  for (int c = 1; c <= 2; ++c) {
    Operation p = Operation::projection(2, 2, c);
    SuppMembership m = supp_membership(p, *lang_of({make_xor()}));
    CHECK(m.member);
    REQUIRE(m.witness.has_value());
    CHECK(m.witness->weight_of(p) > 0);
  }
}

TEST_CASE("support membership with a polymorphism violation short-circuits") {
  auto neq = lang_of({make_neq()});
  SuppMembership m = supp_membership(bool_min(), *neq);
  REQUIRE(!m.member);
  REQUIRE(m.witness_instance.has_value());
  check_negative_witness(bool_min(), *m.witness_instance);
}

TEST_CASE("witnessless reduced decision agrees with the full LP") {
  auto cut = lang_of({make_cut()});
  auto xr = lang_of({make_xor()});
  SuppOptions quick;
  quick.want_witness = false;
  for (const Operation& f : enumerate_operations(2, 2)) {
    CHECK(supp_membership(f, *cut, quick).member == supp_membership(f, *cut).member);
    CHECK(supp_membership(f, *xr, quick).member == supp_membership(f, *xr).member);
  }
}

TEST_CASE("clone generation") {
  // No seeds: projections only.
  std::vector<Operation> base = clone_generate({}, 2, 2);
  CHECK(base.size() == 3);
  for (const Operation& f : base) CHECK(f.projection_coordinate().has_value());

  // min generates its left fold at arity 3.
  std::vector<Operation> min_clone = clone_generate({bool_min()}, 3, 2);
  Operation fold3 = left_fold(bool_min(), 3);
  CHECK(std::find(min_clone.begin(), min_clone.end(), fold3) != min_clone.end());

  // A majority generates the 4-ary WNU ignoring its last argument.
  std::vector<Operation> maj_clone = clone_generate({bool_majority()}, 4, 2);
  std::vector<Label> table(16);
  for (std::size_t i = 0; i < 16; ++i) {
    Tuple t = decode_tuple(i, 2, 4);
    Label a[3] = {t[0], t[1], t[2]};
    table[i] = bool_majority().apply(a);
  }
  Operation g4("g4", 2, 4, std::move(table));
  CHECK(std::find(maj_clone.begin(), maj_clone.end(), g4) != maj_clone.end());
  CHECK(g4.is_wnu());
}

TEST_CASE("bwc: cut relation with constants goes through the tournament path") {
  Language gamma = add_constants(*lang_of({make_cut()}));
  BwcAnswer a = bwc_test(gamma);
  REQUIRE(a.verdict == BwcAnswer::Verdict::Yes);
  REQUIRE(a.witness.has_value());
  const auto& [f3, g4] = *a.witness;
  CHECK(f3.is_wnu());
  CHECK(g4.is_wnu());
  for (Label x = 0; x < 2; ++x)
    for (Label y = 0; y < 2; ++y) {
      Label a3[3] = {y, x, x};
      Label a4[4] = {y, x, x, x};
      CHECK(f3.apply(a3) == g4.apply(a4));
    }
}

TEST_CASE("bwc: xor with constants is a definite no") {
  Language gamma = add_constants(*lang_of({make_xor()}));
  BwcAnswer a = bwc_test(gamma);
  CHECK(a.verdict == BwcAnswer::Verdict::No);
}

TEST_CASE("bwc: majority-closed disequality goes through the majority path") {
  Language gamma = add_constants(*lang_of({make_neq()}));
  BwcAnswer a = bwc_test(gamma);
  REQUIRE(a.verdict == BwcAnswer::Verdict::Yes);
  REQUIRE(a.witness.has_value());
  CHECK(a.witness->first.is_majority());
}

TEST_CASE("bwc: one-element core is trivially yes") {
  Language one(1);
  one.add(WeightedRelation::constant("unit", 1, 1, ExtRational(0)));
  CHECK(bwc_test(one).verdict == BwcAnswer::Verdict::Yes);
}

TEST_CASE("core of a biased unary relation is a single label") {
  auto lang = lang_of({WeightedRelation("phi_u", 2, 1, {ExtRational(0), ExtRational(1)})});
  CoreResult core = core_of(*lang);
  CHECK(core.core.domain_size() == 1);
  CHECK(core.core_labels == std::vector<Label>{0});
  CHECK(core.chain.size() == 1);
}

TEST_CASE("core of the cut relation collapses to one label") {
  CoreResult core = core_of(*lang_of({make_cut()}));
  CHECK(core.core.domain_size() == 1);
}

TEST_CASE("disequality is already a core") {
  CoreResult core = core_of(*lang_of({make_neq()}));
  CHECK(core.core.domain_size() == 2);
  CHECK(core.chain.empty());
  CHECK(core.core_labels == std::vector<Label>{0, 1});
}

TEST_CASE("add_constants is idempotent") {
  Language gamma = add_constants(*lang_of({make_xor()}));
  CHECK(gamma.has("__const_0"));
  CHECK(gamma.has("__const_1"));
  Language twice = add_constants(gamma);
  CHECK(twice.relations().size() == gamma.relations().size());

  Language d3(3);
  d3.add(WeightedRelation::constant("z", 3, 1, ExtRational(0)));
  Language with = add_constants(d3);
  CHECK(with.relations().size() == 4);
}

TEST_CASE("opt gadget: direct formula") {
  // Inner instance: biased unary, min 0, gap 1.
  auto inner_lang = lang_of({WeightedRelation("phi_u", 2, 1, {ExtRational(0), ExtRational(1)})});
  Instance inner(inner_lang, 1, {{"phi_u", {0}}});

  // Outer language: inner relations + a relation with max finite value 5 +
  // the optimality relation of the inner instance.
  auto outer_lang = std::make_shared<Language>(2);
  outer_lang->add(inner_lang->at("phi_u"));
  std::vector<ExtRational> wide;
  for (int i = 0; i < 4; ++i) wide.push_back(ExtRational(i == 3 ? 5 : 0));
  outer_lang->add(WeightedRelation("wide", 2, 2, std::move(wide)));
  outer_lang->add(opt_relation(inner).renamed("opt_I"));

  Instance outer(outer_lang, 2, {{"wide", {0, 1}}, {"opt_I", {0}}});
  OptGadget g = opt_gadget(inner, outer, "opt_I");
  CHECK(g.upper == 5);
  CHECK(g.lower == 0);
  REQUIRE(g.gap.has_value());
  CHECK(*g.gap == 1);
  CHECK(g.copies == 6);  // ceil((5 - 0 + 1)/1)
  CHECK(g.occurrences == 1);

  // min(J') = min(J) - C*N*min(I); here min(I) = 0.
  ExtRational mj = oracle_min(g.instance);
  ExtRational mjp = oracle_min(outer);
  REQUIRE(mj.is_finite());
  CHECK(mjp.finite() == mj.finite() - Rational(0));
}

TEST_CASE("opt gadget: all-optimal inner instance gives one copy") {
  auto inner_lang = lang_of({make_neq()});
  Instance inner(inner_lang, 2, {{"neq", {0, 1}}});

  auto outer_lang = std::make_shared<Language>(2);
  outer_lang->add(make_neq());
  outer_lang->add(opt_relation(inner).renamed("opt_I"));
  Instance outer(outer_lang, 3, {{"opt_I", {0, 1}}, {"opt_I", {1, 2}}});
  OptGadget g = opt_gadget(inner, outer, "opt_I");
  CHECK(g.copies == 1);
  CHECK(g.occurrences == 2);
  CHECK(!g.gap.has_value());
}

TEST_CASE("opt gadget: round trip on a three-variable example") {
  auto inner_lang = lang_of({make_xor()});
  Instance inner(inner_lang, 2, {{"phi_xor", {0, 1}}});  // min 0 on unequal pairs

  auto outer_lang = std::make_shared<Language>(2);
  outer_lang->add(make_xor());
  outer_lang->add(make_cut());
  outer_lang->add(opt_relation(inner).renamed("opt_I"));
  Instance outer(outer_lang, 3,
                 {{"opt_I", {0, 1}}, {"phi_cut", {1, 2}}, {"opt_I", {1, 2}}});
  OptGadget g = opt_gadget(inner, outer, "opt_I");
  ExtRational mjp = oracle_min(outer);
  ExtRational mj = oracle_min(g.instance);
  REQUIRE(mjp.is_finite());
  Rational n_copies(g.copies);
  CHECK(mjp.finite() == mj.finite() - n_copies * g.occurrences * g.inner_min);
}

TEST_CASE("opt gadget rejects an unsatisfiable inner instance") {
  auto inner_lang = lang_of({WeightedRelation::constant("void", 2, 1, ExtRational::infinity())});
  Instance inner(inner_lang, 1, {{"void", {0}}});
  auto outer_lang = std::make_shared<Language>(2);
  outer_lang->add(inner_lang->at("void"));
  outer_lang->add(WeightedRelation("opt_I", 2, 1, {ExtRational(0), ExtRational(0)}));
  Instance outer(outer_lang, 1, {{"opt_I", {0}}});
  CHECK_THROWS_AS(opt_gadget(inner, outer, "opt_I"), StructuralError);
}

TEST_CASE("forward direction: supported operations preserve optimality relations") {
  // For min in supp({phi_cut}): min must preserve opt(I) for small instances.
  auto cut = lang_of({make_cut()});
  Instance path(cut, 3, {{"phi_cut", {0, 1}}, {"phi_cut", {1, 2}}});
  WeightedRelation opt = opt_relation(path);
  CHECK(is_polymorphism(bool_min(), opt));
  CHECK(is_polymorphism(bool_max(), opt));
}
