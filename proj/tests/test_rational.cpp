#include "doctest.h"
#include "vcsp/errors.hpp"
#include "vcsp/rational.hpp"

using namespace vcsp;

TEST_CASE("rational parsing is canonical") {
  CHECK(parse_rational("2/6") == Rational(1, 3));
  CHECK(rational_to_string(parse_rational("2/6")) == "1/3");
  CHECK(parse_rational("-4/2") == Rational(-2));
  CHECK(rational_to_string(parse_rational("-4/2")) == "-2");
  CHECK(parse_rational("0") == 0);
  CHECK(parse_rational("17") == 17);
}

TEST_CASE("rational parsing rejects malformed input") {
  CHECK_THROWS_AS(parse_rational(""), StructuralError);
  CHECK_THROWS_AS(parse_rational("1/0"), StructuralError);
  CHECK_THROWS_AS(parse_rational("1/"), StructuralError);
  CHECK_THROWS_AS(parse_rational("/3"), StructuralError);
  CHECK_THROWS_AS(parse_rational("a"), StructuralError);
  CHECK_THROWS_AS(parse_rational("1.5"), StructuralError);
  CHECK_THROWS_AS(parse_rational("1/2/3"), StructuralError);
  CHECK_THROWS_AS(parse_rational("- 1"), StructuralError);
}

TEST_CASE("rational ceiling") {
  CHECK(rational_ceil(Rational(7, 2)) == 4);
  CHECK(rational_ceil(Rational(6, 2)) == 3);
  CHECK(rational_ceil(Rational(-7, 2)) == -3);
  CHECK(rational_ceil(Rational(0)) == 0);
}

TEST_CASE("infinity absorbs addition and dominates comparison") {
  ExtRational inf = ExtRational::infinity();
  CHECK((inf + ExtRational(5)).is_infinite());
  CHECK((ExtRational(Rational(-7, 3)) + inf).is_infinite());
  CHECK((inf + inf).is_infinite());
  CHECK(inf > ExtRational(Rational(1000000)));
  CHECK(inf == ExtRational::infinity());
  CHECK(ExtRational(3) < inf);
  CHECK(ExtRational(Rational(1, 3)) < ExtRational(Rational(1, 2)));
}

TEST_CASE("scaling infinity") {
  ExtRational inf = ExtRational::infinity();
  CHECK((Rational(3) * inf).is_infinite());
  CHECK_THROWS_AS(Rational(0) * inf, StructuralError);
  CHECK_THROWS_AS(Rational(-1) * inf, StructuralError);
  CHECK(Rational(-2) * ExtRational(Rational(1, 2)) == ExtRational(Rational(-1)));
}

TEST_CASE("exact arithmetic: (a + b) - b recovers a") {
  Rational a(355, 113), b(-8675309, 17);
  CHECK((a + b) - b == a);
  ExtRational ea(a), eb(b);
  CHECK((ea + eb).finite() - b == a);
}

TEST_CASE("finite accessor on infinity throws") {
  CHECK_THROWS_AS(ExtRational::infinity().finite(), StructuralError);
  CHECK(ExtRational(Rational(5, 10)).str() == "1/2");
  CHECK(ExtRational::infinity().str() == "inf");
}
