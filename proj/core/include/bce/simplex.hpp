#pragma once

#include "bce/rational.hpp"

#include <vector>

namespace bce::lp {

enum class Relation { LessEq, Equal, GreaterEq };
enum class Status { Optimal, Infeasible, Unbounded };

struct Constraint {
  RatVector coeffs;
  Relation rel;
  Rat rhs;
};

// maximize objective . x  subject to rows, x >= 0
struct Problem {
  Eigen::Index num_vars = 0;
  RatVector objective;  // empty means pure feasibility
  std::vector<Constraint> rows;

  void add_row(RatVector coeffs, Relation rel, Rat rhs);
};

/**
 * Result of an exact two-phase simplex solve.
 *
 * For Status::Optimal, `duals` holds one multiplier per input row with the
 * usual sign convention for a maximization (>=0 on LessEq rows, <=0 on
 * GreaterEq rows, free on Equal rows); strong duality duals.b == objective
 * holds exactly.
 *
 * For Status::Infeasible, `farkas` holds row multipliers y with y >= 0 on
 * GreaterEq rows, y <= 0 on LessEq rows, free on Equal rows, such that
 * sum_i y_i a_i <= 0 componentwise while y . b > 0.
 */
struct Solution {
  Status status = Status::Infeasible;
  Rat objective;
  RatVector x;
  RatVector duals;
  RatVector farkas;
};

Solution solve(const Problem& problem);

}  // namespace bce::lp
