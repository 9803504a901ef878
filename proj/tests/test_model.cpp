#include <algorithm>

#include "doctest.h"
#include "helpers.hpp"
#include "vcsp/model.hpp"

using namespace vcsp;
using namespace vcsp::testing;

TEST_CASE("tuple encoding round-trips") {
  for (int d = 2; d <= 3; ++d)
    for (int m = 1; m <= 3; ++m)
      for (std::size_t i = 0; i < table_size(d, m); ++i) {
        Tuple t = decode_tuple(i, d, m);
        CHECK(encode_tuple(t, d) == i);
      }
  CHECK_THROWS_AS(encode_tuple(Tuple{0, 2}, 2), StructuralError);
}

TEST_CASE("eval on a single xor constraint") {
  auto lang = lang_of({make_xor()});
  Instance inst(lang, 2, {{"phi_xor", {0, 1}}});
  CHECK(eval(inst, {0, 1}) == ExtRational(0));
  CHECK(eval(inst, {1, 1}) == ExtRational(1));

  Instance empty(lang, 2, {});
  CHECK(eval(empty, {1, 0}) == ExtRational(0));
}

TEST_CASE("eval is invariant under constraint permutation") {
  auto lang = lang_of({make_xor(), make_cut()});
  std::vector<Constraint> cs = {{"phi_xor", {0, 1}}, {"phi_cut", {1, 2}}, {"phi_xor", {0, 2}}};
  Instance a(lang, 3, cs);
  std::reverse(cs.begin(), cs.end());
  Instance b(lang, 3, cs);
  for (std::size_t i = 0; i < 8; ++i) {
    Assignment s = decode_tuple(i, 2, 3);
    CHECK(eval(a, s) == eval(b, s));
  }
}

TEST_CASE("eval rejects structural mismatches") {
  auto lang = lang_of({make_xor()});
  Instance inst(lang, 2, {{"phi_xor", {0, 1}}});
  CHECK_THROWS_AS(eval(inst, {0}), StructuralError);
  CHECK_THROWS_AS(eval(inst, {0, 2}), StructuralError);
  CHECK_THROWS_AS(Instance(lang, 2, {{"phi_xor", {0}}}), StructuralError);
  CHECK_THROWS_AS(Instance(lang, 2, {{"phi_xor", {0, 5}}}), StructuralError);
  CHECK_THROWS_AS(Instance(lang, 2, {{"nope", {0, 1}}}), StructuralError);
}

TEST_CASE("feasibility relation") {
  WeightedRelation xr = make_xor();
  WeightedRelation f = xr.feas_relation();
  for (std::size_t i = 0; i < 4; ++i) CHECK(f.value_at(i) == ExtRational(0));

  WeightedRelation neq = make_neq();
  CHECK(neq.feas_relation().same_table(neq));

  WeightedRelation g("g", 2, 2,
                     {ExtRational::infinity(), ExtRational(0), ExtRational(0), ExtRational(0)});
  WeightedRelation gf = g.feas_relation();
  CHECK(gf.value_at(0).is_infinite());
  CHECK(gf.value_at(1) == ExtRational(0));
}

TEST_CASE("optimality relation of an instance") {
  auto lang = lang_of({WeightedRelation("phi_u", 2, 1, {ExtRational(0), ExtRational(1)})});
  Instance inst(lang, 1, {{"phi_u", {0}}});
  WeightedRelation opt = opt_relation(inst);
  CHECK(opt.value_at(0) == ExtRational(0));
  CHECK(opt.value_at(1).is_infinite());

  Instance tri = triangle_xor();
  WeightedRelation tri_opt = opt_relation(tri);
  std::vector<std::size_t> expected = {1, 2, 3, 4, 5, 6};  // every assignment except 000, 111
  CHECK(tri_opt.feasible_indices() == expected);

  auto empty_lang = lang_of({WeightedRelation::constant("void", 2, 1, ExtRational::infinity())});
  Instance unsat(empty_lang, 1, {{"void", {0}}});
  CHECK(opt_relation(unsat).feasible_indices().empty());
}

TEST_CASE("opt is contained in feas and nonempty when feas is") {
  // Sweep all binary Boolean tables over the value set {0, 1, 2, inf}.
  std::vector<ExtRational> vals = {ExtRational(0), ExtRational(1), ExtRational(2),
                                   ExtRational::infinity()};
  for (std::size_t code = 0; code < 256; ++code) {
    std::vector<ExtRational> table;
    std::size_t c = code;
    for (int i = 0; i < 4; ++i) {
      table.push_back(vals[c % 4]);
      c /= 4;
    }
    WeightedRelation rel("r", 2, 2, std::move(table));
    auto feas = rel.feasible_indices();
    auto opt = rel.optimal_indices();
    for (std::size_t idx : opt)
      CHECK(std::find(feas.begin(), feas.end(), idx) != feas.end());
    if (!feas.empty()) CHECK(!opt.empty());
  }
}

TEST_CASE("restriction reindexes labels") {
  WeightedRelation r("r", 3, 2,
                     {ExtRational(0), ExtRational(1), ExtRational(2), ExtRational(3),
                      ExtRational(4), ExtRational(5), ExtRational(6), ExtRational(7),
                      ExtRational(8)});
  WeightedRelation s = r.restricted({0, 2}, "s");
  CHECK(s.domain_size() == 2);
  CHECK(s.value(Tuple{0, 0}) == ExtRational(0));
  CHECK(s.value(Tuple{0, 1}) == ExtRational(2));
  CHECK(s.value(Tuple{1, 0}) == ExtRational(6));
  CHECK(s.value(Tuple{1, 1}) == ExtRational(8));
}

TEST_CASE("language rejects duplicates and domain mismatches") {
  Language lang(2);
  lang.add(make_xor());
  CHECK_THROWS_AS(lang.add(make_xor()), StructuralError);
  WeightedRelation other("d3", 3, 1, std::vector<ExtRational>(3, ExtRational(0)));
  CHECK_THROWS_AS(lang.add(other), StructuralError);
  CHECK(lang.has("phi_xor"));
  CHECK_THROWS_AS(lang.at("missing"), StructuralError);
}

TEST_CASE("unary singleton") {
  WeightedRelation c1 = WeightedRelation::unary_singleton("c1", 3, 1);
  CHECK(c1.value_at(0).is_infinite());
  CHECK(c1.value_at(1) == ExtRational(0));
  CHECK(c1.value_at(2).is_infinite());
  CHECK(c1.is_crisp());
}

TEST_CASE("opt_relation cap") {
  Instance tri = triangle_xor();
  CHECK_THROWS_AS(opt_relation(tri, 4), ResourceError);
}
