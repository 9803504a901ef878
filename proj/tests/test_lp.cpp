#include <cstdint>
#include <sstream>

#include "doctest.h"
#include "vcsp/errors.hpp"
#include "vcsp/lp.hpp"

using namespace vcsp;

TEST_CASE("one-variable maximum with dual") {
  LinearProgram lp(LpSense::Maximize);
  int x = lp.add_variable("x", 1);
  lp.add_row({{{x, Rational(1)}}, RowRelation::LessEq, Rational(3)});
  LpOutcome out = solve_lp(lp);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(out.objective == 3);
  CHECK(out.primal[0] == 3);
  CHECK(out.dual[0] == 1);
  CHECK(verify_certificate(lp, out));
}

TEST_CASE("empty polytope yields a Farkas ray") {
  LinearProgram lp(LpSense::Minimize);
  int x = lp.add_variable("x", 0);
  lp.add_row({{{x, Rational(1)}}, RowRelation::LessEq, Rational(-1)});
  LpOutcome out = solve_lp(lp);
  REQUIRE(out.status == LpStatus::Infeasible);
  CHECK(verify_certificate(lp, out));
  CHECK(out.farkas[0] < 0);
}

TEST_CASE("rational right-hand sides propagate exactly") {
  LinearProgram lp(LpSense::Maximize);
  int x = lp.add_variable("x", 1);
  int y = lp.add_variable("y", 1);
  lp.add_row({{{x, Rational(1)}, {y, Rational(1)}}, RowRelation::LessEq, Rational(1, 3)});
  LpOutcome out = solve_lp(lp);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(out.objective == Rational(1, 3));
  CHECK(verify_certificate(lp, out));
}

TEST_CASE("perturbed primal fails verification") {
  LinearProgram lp(LpSense::Maximize);
  int x = lp.add_variable("x", 1);
  lp.add_row({{{x, Rational(1)}}, RowRelation::LessEq, Rational(3)});
  LpOutcome out = solve_lp(lp);
  out.primal[0] += Rational(1, 1000000000);
  CHECK(!verify_certificate(lp, out));
}

TEST_CASE("equality rows and free variables") {
  LinearProgram lp(LpSense::Minimize);
  int x = lp.add_variable("x", 1, /*free=*/true);
  lp.add_row({{{x, Rational(1)}}, RowRelation::Equal, Rational(-5)});
  LpOutcome out = solve_lp(lp);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(out.objective == -5);
  CHECK(out.primal[0] == -5);
  CHECK(verify_certificate(lp, out));
}

TEST_CASE("unbounded program returns an improving ray") {
  LinearProgram lp(LpSense::Maximize);
  int x = lp.add_variable("x", 1);
  lp.add_row({{{x, Rational(1)}}, RowRelation::GreaterEq, Rational(1)});
  LpOutcome out = solve_lp(lp);
  REQUIRE(out.status == LpStatus::Unbounded);
  CHECK(verify_certificate(lp, out));
}

TEST_CASE("two-phase feasibility with mixed rows") {
  // min x + y  s.t.  x + y >= 2, x - y = 1/2
  LinearProgram lp(LpSense::Minimize);
  int x = lp.add_variable("x", 1);
  int y = lp.add_variable("y", 1);
  lp.add_row({{{x, Rational(1)}, {y, Rational(1)}}, RowRelation::GreaterEq, Rational(2)});
  lp.add_row({{{x, Rational(1)}, {y, Rational(-1)}}, RowRelation::Equal, Rational(1, 2)});
  LpOutcome out = solve_lp(lp);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(out.objective == 2);
  CHECK(out.primal[x] == Rational(5, 4));
  CHECK(out.primal[y] == Rational(3, 4));
  CHECK(verify_certificate(lp, out));
}

TEST_CASE("determinism: identical programs yield identical outcomes") {
  auto build = [] {
    LinearProgram lp(LpSense::Maximize);
    int x = lp.add_variable("x", 2);
    int y = lp.add_variable("y", 3);
    int z = lp.add_variable("z", 1);
    lp.add_row({{{x, Rational(1)}, {y, Rational(1)}}, RowRelation::LessEq, Rational(4)});
    lp.add_row({{{y, Rational(1)}, {z, Rational(2)}}, RowRelation::LessEq, Rational(5)});
    lp.add_row({{{x, Rational(1)}, {z, Rational(1)}}, RowRelation::GreaterEq, Rational(1)});
    return lp;
  };
  LpOutcome a = solve_lp(build());
  LpOutcome b = solve_lp(build());
  CHECK(a.status == b.status);
  CHECK(a.objective == b.objective);
  CHECK(a.primal == b.primal);
  CHECK(a.dual == b.dual);
  CHECK(a.pivots == b.pivots);
}

namespace {

// Deterministic 64-bit generator for the randomized LP sweep.
struct Rng {
  std::uint64_t s;
  std::uint64_t next() {
    s += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  long below(long n) { return static_cast<long>(next() % static_cast<std::uint64_t>(n)); }
};

}  // namespace

TEST_CASE("randomized degenerate programs terminate and verify") {
  Rng rng{20240817};
  int optimal = 0, infeasible = 0, unbounded = 0;
  for (int trial = 0; trial < 120; ++trial) {
    LinearProgram lp(rng.below(2) ? LpSense::Minimize : LpSense::Maximize);
    int nv = 1 + static_cast<int>(rng.below(5));
    for (int j = 0; j < nv; ++j)
      lp.add_variable("x" + std::to_string(j), Rational(rng.below(7) - 3), rng.below(4) == 0);
    int nr = 1 + static_cast<int>(rng.below(6));
    for (int i = 0; i < nr; ++i) {
      LpRow row;
      for (int j = 0; j < nv; ++j) {
        long c = rng.below(7) - 3;
        if (c != 0) row.coeffs.emplace_back(j, Rational(c));
      }
      // Zero right-hand sides and duplicated rows make the tests degenerate.
      row.rhs = rng.below(3) == 0 ? Rational(0) : Rational(rng.below(9) - 4);
      row.rel = static_cast<RowRelation>(rng.below(3));
      lp.add_row(row);
      if (rng.below(4) == 0) lp.add_row(row);
    }
    LpOptions opts;
    opts.max_pivots = 100000;  // cap that must never be hit (Bland terminates)
    LpOutcome out = solve_lp(lp, opts);
    CHECK(verify_certificate(lp, out));
    switch (out.status) {
      case LpStatus::Optimal: ++optimal; break;
      case LpStatus::Infeasible: ++infeasible; break;
      case LpStatus::Unbounded: ++unbounded; break;
    }
  }
  // The sweep must exercise all three outcomes.
  CHECK(optimal > 0);
  CHECK(infeasible > 0);
  CHECK(unbounded > 0);
}

TEST_CASE("tableau cell cap") {
  LinearProgram lp(LpSense::Minimize);
  for (int j = 0; j < 100; ++j) lp.add_variable("x" + std::to_string(j), 1);
  for (int i = 0; i < 100; ++i) {
    LpRow row;
    for (int j = 0; j < 100; ++j) row.coeffs.emplace_back(j, Rational(1));
    row.rel = RowRelation::GreaterEq;
    row.rhs = 1;
    lp.add_row(row);
  }
  LpOptions opts;
  opts.max_cells = 1000;
  CHECK_THROWS_AS(solve_lp(lp, opts), ResourceError);
}

TEST_CASE("LP dump renders a readable layout") {
  LinearProgram lp(LpSense::Minimize);
  int x = lp.add_variable("x", Rational(1, 2));
  lp.add_variable("y", 0, true);
  lp.add_row({{{x, Rational(2)}}, RowRelation::LessEq, Rational(3)});
  std::ostringstream os;
  lp.dump(os);
  std::string text = os.str();
  CHECK(text.find("Minimize") != std::string::npos);
  CHECK(text.find("1/2 x") != std::string::npos);
  CHECK(text.find("<= 3") != std::string::npos);
  CHECK(text.find("y free") != std::string::npos);
}
