#pragma once

#include "bce/consistency.hpp"
#include "bce/problem.hpp"

#include <string>
#include <vector>

namespace bce {

// Decision problems indexed by a rational parameter grid. `shift` adds theta
// to the top action's payoffs, `ratio` builds two-sided error costs from
// cI/cII schedules on a designated state set, `table` lists explicit payoff
// matrices.
struct ProblemFamily {
  enum class Mode { Shift, Ratio, Table };

  DecisionProblem base;
  std::vector<Rat> thetas;
  Mode mode = Mode::Shift;
  std::vector<RatMatrix> tables;        // Table: one utility matrix per theta
  std::vector<Rat> cost_type1;          // Ratio: cI(theta) > 0
  std::vector<Rat> cost_type2;          // Ratio: cII(theta) > 0
  std::vector<Eigen::Index> hat_states; // Ratio: states where the hypothesis holds

  DecisionProblem instantiate(size_t k) const;
};

// d-mean-preserving-spread test: pushes both priors through d and checks equal
// means plus the min{d, d(w*)} / min{-d, -d(w*)} comparisons for every w*.
bool d_mps_check(const DecisionProblem& problem, const Distribution& prior_base,
                 const Distribution& prior_spread);

// Consistency of the base pair must carry over to the spread pair; returns
// both verdicts and throws if the preservation fails.
std::pair<Verdict, Verdict> preservation_check(const DecisionProblem& problem,
                                               const Distribution& prior,
                                               const Distribution& spread_prior,
                                               const Distribution& marginal);

struct BoundsRow {
  Rat theta;
  Rat lower;
  Rat upper;
};

// Per-theta bounds on nu0(a2) for binary-action families; validates that the
// family is pointwise-shifted or ratio-ordered in theta and that both bound
// columns are nondecreasing.
std::vector<BoundsRow> shift_bounds_table(const ProblemFamily& family, const Distribution& prior);

// Product decision problem with actions = profiles and payoffs summed;
// profile labels are joined with '|'.
DecisionProblem product_problem(const std::vector<DecisionProblem>& problems);

// One information structure rationalizing choices across several problems on
// a shared state space: consistency in the product problem.
Verdict across_problems(const std::vector<DecisionProblem>& problems,
                        const Distribution& joint_marginal, const Distribution& prior);

struct PrivateGame {
  std::vector<std::string> states;
  struct Player {
    std::vector<std::string> actions;
    RatMatrix utility;  // |A_n| x |states|
  };
  std::vector<Player> players;
};

// Public-signal rationalizability of a joint action distribution: consistency
// in the auxiliary one-agent problem with summed payoffs.
Verdict public_bce_check(const PrivateGame& game, const Distribution& prior,
                         const Distribution& joint_marginal);

struct RingGame {
  std::vector<std::string> states;
  struct Player {
    std::vector<std::string> actions;
    RatMatrix payoff;  // |A_n| x |A_{n-1}| (player 1: |A_1| x |states|)
  };
  std::vector<Player> players;
};

struct RingVerdict {
  bool consistent = false;
  Eigen::Index failing_link = -1;  // 1-based first failing link, -1 when none
  std::vector<Verdict> links;
  bool witness_validated = false;
};

// Link-by-link consistency: (prior, nu_1) for player 1, then
// (nu_{n-1}, nu_n) with the predecessor's actions as states. On success the
// chained joint is rebuilt and every obedience constraint revalidated.
RingVerdict ring_check(const RingGame& game, const Distribution& prior,
                       const std::vector<Distribution>& marginals);

}  // namespace bce
