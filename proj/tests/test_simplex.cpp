#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <stdexcept>
#include <vector>

#include "nsbox/simplex.hpp"

using namespace nsbox;

namespace {

LinearProgram make_lp(int vars, std::vector<std::vector<Rat>> rows, std::vector<Rat> rhs,
                      std::vector<Rat> objective) {
  LinearProgram lp;
  lp.num_vars = vars;
  lp.rows = std::move(rows);
  lp.rhs = std::move(rhs);
  lp.objective = std::move(objective);
  return lp;
}

}  // namespace

TEST_CASE("one-variable program") {
  // max x  s.t.  3x = 1
  const auto res = solve_lp(make_lp(1, {{Rat(3)}}, {Rat(1)}, {Rat(1)}));
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.value == Rat(1, 3));
  CHECK(res.solution == std::vector<Rat>{Rat(1, 3)});
}

TEST_CASE("simplex splits mass to the valuable coordinate") {
  // max x1 + 2 x2  s.t.  x1 + x2 = 1
  const auto res =
      solve_lp(make_lp(2, {{Rat(1), Rat(1)}}, {Rat(1)}, {Rat(1), Rat(2)}));
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.value == Rat(2));
  CHECK(res.solution == std::vector<Rat>{Rat(0), Rat(1)});
}

TEST_CASE("slack variables express inequalities") {
  // max x1 + x2  s.t.  x1 + s1 = 2, x2 + s2 = 1  ->  optimum 3
  const auto res = solve_lp(make_lp(
      4,
      {{Rat(1), Rat(0), Rat(1), Rat(0)}, {Rat(0), Rat(1), Rat(0), Rat(1)}},
      {Rat(2), Rat(1)}, {Rat(1), Rat(1), Rat(0), Rat(0)}));
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.value == Rat(3));
}

TEST_CASE("infeasible programs are reported") {
  // x1 = -1 with x1 >= 0
  CHECK(solve_lp(make_lp(1, {{Rat(1)}}, {Rat(-1)}, {Rat(1)})).status ==
        LpStatus::Infeasible);
  // inconsistent pair
  CHECK(solve_lp(make_lp(2, {{Rat(1), Rat(1)}, {Rat(1), Rat(1)}}, {Rat(1), Rat(2)},
                         {Rat(1), Rat(0)}))
            .status == LpStatus::Infeasible);
}

TEST_CASE("unbounded programs are reported") {
  // max x1  s.t.  x2 = 1: x1 free to grow
  CHECK(solve_lp(make_lp(2, {{Rat(0), Rat(1)}}, {Rat(1)}, {Rat(1), Rat(0)})).status ==
        LpStatus::Unbounded);
}

TEST_CASE("duplicate rows are tolerated") {
  const auto res = solve_lp(make_lp(
      2, {{Rat(1), Rat(1)}, {Rat(1), Rat(1)}, {Rat(2), Rat(2)}},
      {Rat(1), Rat(1), Rat(2)}, {Rat(3), Rat(1)}));
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.value == Rat(3));
  CHECK(res.solution == std::vector<Rat>{Rat(1), Rat(0)});
}

TEST_CASE("degenerate pivots terminate") {
  // multiple bases describe the same vertex; must not cycle
  const auto res = solve_lp(make_lp(
      3,
      {{Rat(1), Rat(1), Rat(0)}, {Rat(1), Rat(0), Rat(1)}, {Rat(0), Rat(1), Rat(-1)}},
      {Rat(1), Rat(1), Rat(0)}, {Rat(1), Rat(1), Rat(1)}));
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.value == Rat(2));  // x1 = 0, x2 = x3 = 1 dominates x1 = 1
}

TEST_CASE("random feasible systems solve exactly") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> point(0, 4);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 5, nv = 8;
    std::vector<std::vector<Rat>> rows(m, std::vector<Rat>(nv));
    std::vector<Rat> x0(nv);
    for (auto& xi : x0) xi = Rat(point(rng));
    std::vector<Rat> rhs(m, Rat(0));
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < nv; ++c) {
        rows[r][c] = Rat(coef(rng));
        rhs[r] += rows[r][c] * x0[c];
      }
    // maximize -sum(x): bounded above by 0... not necessarily bounded; use
    // an objective bounded on the feasible set: minimize total mass.
    std::vector<Rat> objective(nv, Rat(-1));
    const auto res = solve_lp(make_lp(nv, rows, rhs, objective));
    REQUIRE(res.status == LpStatus::Optimal);  // x0 is feasible
    REQUIRE(static_cast<int>(res.solution.size()) == nv);
    // the returned point satisfies every equality exactly and is nonnegative
    for (int r = 0; r < m; ++r) {
      Rat lhs(0);
      for (int c = 0; c < nv; ++c) lhs += rows[r][c] * res.solution[c];
      CHECK(lhs == rhs[r]);
    }
    Rat mass(0);
    for (const auto& xi : res.solution) {
      CHECK(xi >= 0);
      mass += xi;
    }
    CHECK(res.value == -mass);
    // optimal mass cannot exceed the witness mass
    Rat witness_mass(0);
    for (const auto& xi : x0) witness_mass += xi;
    CHECK(mass <= witness_mass);
  }
}

TEST_CASE("shape validation") {
  LinearProgram bad;
  bad.num_vars = 2;
  bad.rows = {{Rat(1)}};  // wrong row width
  bad.rhs = {Rat(1)};
  bad.objective = {Rat(1), Rat(0)};
  CHECK_THROWS_AS(solve_lp(bad), std::invalid_argument);

  LinearProgram bad2;
  bad2.num_vars = 1;
  bad2.rows = {{Rat(1)}};
  bad2.rhs = {};  // rhs length mismatch
  bad2.objective = {Rat(1)};
  CHECK_THROWS_AS(solve_lp(bad2), std::invalid_argument);
}
