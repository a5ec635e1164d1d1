#include "doctest.h"

#include "bce/simplex.hpp"

#include <random>

using namespace bce;
using namespace bce::lp;

namespace {

Rat row_activity(const Constraint& c, const RatVector& x) { return c.coeffs.dot(x); }

}  // namespace

TEST_CASE("textbook maximization") {
  // max 3x + 2y s.t. x + y <= 4, x + 3y <= 6
  Problem p;
  p.num_vars = 2;
  p.objective = rat_vector({Rat(3), Rat(2)});
  p.add_row(rat_vector({Rat(1), Rat(1)}), Relation::LessEq, Rat(4));
  p.add_row(rat_vector({Rat(1), Rat(3)}), Relation::LessEq, Rat(6));
  Solution s = solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective == Rat(12));
  CHECK(s.x(0) == Rat(4));
  CHECK(s.x(1) == Rat(0));
  // strong duality
  CHECK(s.duals(0) * Rat(4) + s.duals(1) * Rat(6) == s.objective);
}

TEST_CASE("equality and >= rows with negative rhs") {
  // max x1 s.t. x1 - x2 = -1, x1 + x2 >= 2, x1 + 2x2 <= 7
  Problem p;
  p.num_vars = 2;
  p.objective = rat_vector({Rat(1), Rat(0)});
  p.add_row(rat_vector({Rat(1), Rat(-1)}), Relation::Equal, Rat(-1));
  p.add_row(rat_vector({Rat(1), Rat(1)}), Relation::GreaterEq, Rat(2));
  p.add_row(rat_vector({Rat(1), Rat(2)}), Relation::LessEq, Rat(7));
  Solution s = solve(p);
  REQUIRE(s.status == Status::Optimal);
  // x2 = x1 + 1, x1 + 2x1 + 2 <= 7 -> x1 <= 5/3
  CHECK(s.objective == Rat(5, 3));
  CHECK(s.x(1) == Rat(8, 3));
}

TEST_CASE("infeasible system yields a valid Farkas certificate") {
  // x1 + x2 <= 1, x1 + x2 >= 3
  Problem p;
  p.num_vars = 2;
  p.add_row(rat_vector({Rat(1), Rat(1)}), Relation::LessEq, Rat(1));
  p.add_row(rat_vector({Rat(1), Rat(1)}), Relation::GreaterEq, Rat(3));
  Solution s = solve(p);
  REQUIRE(s.status == Status::Infeasible);
  REQUIRE(s.farkas.size() == 2);
  CHECK(s.farkas(0) <= 0);
  CHECK(s.farkas(1) >= 0);
  for (int j = 0; j < 2; ++j) {
    Rat col = s.farkas(0) * p.rows[0].coeffs(j) + s.farkas(1) * p.rows[1].coeffs(j);
    CHECK(col <= 0);
  }
  CHECK(s.farkas(0) * Rat(1) + s.farkas(1) * Rat(3) > 0);
}

TEST_CASE("unbounded detection") {
  Problem p;
  p.num_vars = 2;
  p.objective = rat_vector({Rat(1), Rat(1)});
  p.add_row(rat_vector({Rat(1), Rat(-1)}), Relation::LessEq, Rat(1));
  Solution s = solve(p);
  CHECK(s.status == Status::Unbounded);
}

TEST_CASE("degenerate problems terminate") {
  // many redundant rows through the origin
  Problem p;
  p.num_vars = 3;
  p.objective = rat_vector({Rat(1), Rat(1), Rat(1)});
  p.add_row(rat_vector({Rat(1), Rat(0), Rat(0)}), Relation::LessEq, Rat(0));
  p.add_row(rat_vector({Rat(1), Rat(1), Rat(0)}), Relation::LessEq, Rat(0));
  p.add_row(rat_vector({Rat(1), Rat(1), Rat(1)}), Relation::LessEq, Rat(0));
  p.add_row(rat_vector({Rat(0), Rat(1), Rat(1)}), Relation::LessEq, Rat(0));
  p.add_row(rat_vector({Rat(0), Rat(0), Rat(1)}), Relation::LessEq, Rat(0));
  Solution s = solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective == Rat(0));
}

TEST_CASE("random LPs satisfy exact strong duality and certificates") {
  std::mt19937_64 rng(20240917);
  std::uniform_int_distribution<int> coef(-4, 4);
  std::uniform_int_distribution<int> rhs(-3, 6);
  std::uniform_int_distribution<int> rel3(0, 2);
  int optimal_seen = 0, infeasible_seen = 0;
  for (int iter = 0; iter < 400; ++iter) {
    Problem p;
    p.num_vars = 3;
    p.objective = rat_vector({Rat(coef(rng)), Rat(coef(rng)), Rat(coef(rng))});
    int m = 2 + static_cast<int>(rng() % 4);
    for (int r = 0; r < m; ++r) {
      RatVector row(3);
      for (int j = 0; j < 3; ++j) row(j) = Rat(coef(rng));
      p.add_row(row, static_cast<Relation>(rel3(rng)), Rat(rhs(rng)));
    }
    // keep it bounded
    p.add_row(rat_vector({Rat(1), Rat(1), Rat(1)}), Relation::LessEq, Rat(10));

    Solution s = solve(p);
    if (s.status == Status::Optimal) {
      ++optimal_seen;
      // primal feasibility
      for (const auto& row : p.rows) {
        Rat act = row_activity(row, s.x);
        if (row.rel == Relation::LessEq) CHECK(act <= row.rhs);
        if (row.rel == Relation::GreaterEq) CHECK(act >= row.rhs);
        if (row.rel == Relation::Equal) CHECK(act == row.rhs);
      }
      for (int j = 0; j < 3; ++j) CHECK(s.x(j) >= 0);
      // dual feasibility and strong duality
      Rat dual_value = 0;
      for (size_t r = 0; r < p.rows.size(); ++r) {
        if (p.rows[r].rel == Relation::LessEq) CHECK(s.duals(r) >= 0);
        if (p.rows[r].rel == Relation::GreaterEq) CHECK(s.duals(r) <= 0);
        dual_value += s.duals(r) * p.rows[r].rhs;
      }
      for (int j = 0; j < 3; ++j) {
        Rat col = 0;
        for (size_t r = 0; r < p.rows.size(); ++r) col += s.duals(r) * p.rows[r].coeffs(j);
        CHECK(col >= p.objective(j));
      }
      CHECK(dual_value == s.objective);
    } else if (s.status == Status::Infeasible) {
      ++infeasible_seen;
      Rat value = 0;
      for (size_t r = 0; r < p.rows.size(); ++r) {
        if (p.rows[r].rel == Relation::LessEq) CHECK(s.farkas(r) <= 0);
        if (p.rows[r].rel == Relation::GreaterEq) CHECK(s.farkas(r) >= 0);
        value += s.farkas(r) * p.rows[r].rhs;
      }
      for (int j = 0; j < 3; ++j) {
        Rat col = 0;
        for (size_t r = 0; r < p.rows.size(); ++r) col += s.farkas(r) * p.rows[r].coeffs(j);
        CHECK(col <= 0);
      }
      CHECK(value > 0);
    }
  }
  CHECK(optimal_seen > 50);
  CHECK(infeasible_seen > 50);
}
