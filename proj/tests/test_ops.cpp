#include "doctest.h"
#include "helpers.hpp"
#include "vcsp/ops.hpp"

using namespace vcsp;
using namespace vcsp::testing;

TEST_CASE("composition with projections") {
  Operation p1 = Operation::projection(2, 2, 1);
  Operation p2 = Operation::projection(2, 2, 2);
  Operation g1("g1", 2, 2, {0, 1, 1, 1});
  Operation g2("g2", 2, 2, {0, 0, 0, 1});
  CHECK(compose(p1, {g1, g2}) == g1);

  // min composed with the argument swap is min again.
  CHECK(compose(bool_min(), {p2, p1}) == bool_min());

  // minority over three copies of the unary identity collapses to the identity.
  Operation id = Operation::projection(2, 1, 1);
  CHECK(compose(bool_minority(), {id, id, id}) == id);
}

TEST_CASE("composition arity checks") {
  Operation id = Operation::projection(2, 1, 1);
  CHECK_THROWS_AS(compose(bool_min(), {id}), StructuralError);
  CHECK_THROWS_AS(compose(bool_min(), {id, bool_min()}), StructuralError);
}

TEST_CASE("polymorphism checks") {
  WeightedRelation xr = make_xor();
  for (const Operation& f : enumerate_operations(2, 2))
    CHECK(is_polymorphism(f, xr));  // finite-valued: everything preserves feas

  CHECK(!is_polymorphism(bool_min(), make_neq()));
  CHECK(is_polymorphism(Operation::projection(2, 2, 1), make_neq()));
  CHECK(is_polymorphism(Operation::projection(2, 2, 2), make_neq()));
}

TEST_CASE("fractional polymorphism: submodularity of the cut relation") {
  FractionalOperation submod(2, 2, {{bool_min(), Rational(1, 2)}, {bool_max(), Rational(1, 2)}});
  auto cut = lang_of({make_cut()});
  CHECK(is_fractional_polymorphism(submod, *cut).ok);

  auto xr = lang_of({make_xor()});
  FpolCheck c = is_fractional_polymorphism(submod, *xr);
  REQUIRE(!c.ok);
  REQUIRE(c.violation.has_value());
  CHECK(c.violation->relation == "phi_xor");
  CHECK(c.violation->tuples == std::vector<Tuple>{{0, 1}, {1, 0}});
}

TEST_CASE("uniform projections are always accepted") {
  for (int k = 1; k <= 3; ++k) {
    FractionalOperation tau = FractionalOperation::uniform_projections(2, k);
    CHECK(is_fractional_polymorphism(tau, *lang_of({make_xor(), make_cut(), make_neq()})).ok);
  }
  // The unary identity point mass is the k = 1 case.
  FractionalOperation id(2, 1, {{Operation::projection(2, 1, 1), Rational(1)}});
  CHECK(is_fractional_polymorphism(id, *lang_of({make_xor()})).ok);
}

TEST_CASE("a lone projection point mass is not improving for k >= 2") {
  // The averaging inequality compares phi(x_1) against the mean over all
  // arguments, so a single projection fails on any non-constant relation.
  FractionalOperation omega(2, 2, {{Operation::projection(2, 2, 1), Rational(1)}});
  FpolCheck c = is_fractional_polymorphism(omega, *lang_of({make_xor()}));
  CHECK(!c.ok);
}

TEST_CASE("weak near-unanimity predicate") {
  CHECK(bool_majority().is_wnu());
  CHECK(bool_minority().is_wnu());
  CHECK(!Operation::projection(2, 3, 1).is_wnu());
}

TEST_CASE("operation predicates") {
  CHECK(bool_min().is_idempotent());
  CHECK(bool_min().is_conservative());
  CHECK(bool_min().is_commutative());
  CHECK(bool_majority().is_majority());
  CHECK(!bool_majority().is_minority());
  CHECK(bool_minority().is_minority());
  CHECK(Operation::projection(3, 2, 2).projection_coordinate() == 2);
  CHECK(!bool_min().projection_coordinate().has_value());
}

TEST_CASE("fractional operation validation") {
  CHECK_THROWS_AS(FractionalOperation(2, 2, {{bool_min(), Rational(1, 2)}}), StructuralError);
  CHECK_THROWS_AS(FractionalOperation(2, 2, {{bool_min(), Rational(-1)}, {bool_max(), Rational(2)}}),
                  StructuralError);
  CHECK_THROWS_AS(FractionalOperation(2, 2, {{bool_min(), Rational(1, 2)},
                                             {bool_majority(), Rational(1, 2)}}),
                  StructuralError);
  // Duplicate support entries merge.
  FractionalOperation omega(2, 2, {{bool_min(), Rational(1, 2)}, {bool_min(), Rational(1, 4)},
                                   {bool_max(), Rational(1, 4)}});
  CHECK(omega.weight_of(bool_min()) == Rational(3, 4));
}

TEST_CASE("operation enumeration respects the cap") {
  CHECK(enumerate_operations(2, 2).size() == 16);
  CHECK(enumerate_operations(2, 3).size() == 256);
  CHECK(enumerate_operations(3, 2).size() == 19683);
  CHECK_THROWS_AS(enumerate_operations(3, 3), ResourceError);
}
