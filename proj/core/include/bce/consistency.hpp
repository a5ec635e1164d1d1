#pragma once

#include "bce/problem.hpp"
#include "bce/rational.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace bce {

// Joint distribution over actions x states backing a consistency verdict.
struct JointDistribution {
  RatMatrix pi;  // J x I, entries >= 0, total mass 1

  RatVector state_marginal() const;
  RatVector action_marginal() const;
};

// Per-action posteriors mu(.|a) for actions with positive marginal mass.
struct BeliefSystem {
  std::vector<Eigen::Index> actions;
  std::vector<RatVector> posteriors;
};

/**
 * Multipliers (p, q, lambda) proving infeasibility: lambda >= 0,
 * q(a) >= p(w) + sum_{a'} lambda(a,a') [u(a,w) - u(a',w)] for every (a,w),
 * and q.nu0 - p.mu0 < 0. lambda_up/lambda_down expose the multipliers on
 * adjacent action pairs.
 */
struct DualCertificate {
  RatVector p;       // over states
  RatVector q;       // over actions
  RatMatrix lambda;  // J x J, row = recommended action, col = deviation

  RatVector lambda_up() const;
  RatVector lambda_down() const;
  Rat objective(const Distribution& prior, const Distribution& marginal) const;
  bool validate(const DecisionProblem& problem, const Distribution& prior,
                const Distribution& marginal) const;
};

struct Verdict {
  bool consistent = false;
  std::optional<JointDistribution> witness;
  std::optional<DualCertificate> dual;
  std::optional<std::string> dominated_action;
};

/**
 * Decides consistency of (prior, marginal) pairs for one decision problem via
 * exact-rational two-phase simplex. Dominated actions are computed once at
 * construction; a marginal putting mass on one short-circuits to inconsistent.
 */
class ConsistencyChecker {
 public:
  explicit ConsistencyChecker(DecisionProblem problem);

  const DecisionProblem& problem() const { return problem_; }
  const std::vector<bool>& dominated() const { return dominated_; }

  Verdict check(const Distribution& prior, const Distribution& marginal) const;

  // sum_a nu0(a) max { p.mu : mu in Delta*(a) }; nullopt encodes -infinity
  // (some supported action has an empty optimal-belief set).
  std::optional<Rat> support_value(const Distribution& marginal, const RatVector& p) const;

  // Range of total pi-mass on an action set over all joints obeying the
  // obedience system and the prior marginal.
  std::pair<Rat, Rat> extreme_marginal_bounds(const Distribution& prior,
                                              const std::vector<Eigen::Index>& action_set) const;

  // max { p.mu : mu in Delta*(a) }; nullopt when Delta*(a) is empty.
  std::optional<Rat> action_support(Eigen::Index action, const RatVector& p) const;

 private:
  DecisionProblem problem_;
  std::vector<bool> dominated_;
};

// One-shot conveniences.
Verdict check_bce(const DecisionProblem& problem, const Distribution& prior,
                  const Distribution& marginal);
std::optional<Rat> support_value(const DecisionProblem& problem, const Distribution& marginal,
                                 const RatVector& p);
std::pair<Rat, Rat> extreme_marginal_bounds(const DecisionProblem& problem,
                                            const Distribution& prior,
                                            const std::vector<std::string>& action_set);

BeliefSystem recover_belief_system(const DecisionProblem& problem, const JointDistribution& joint,
                                   const Distribution& marginal);

bool validate_witness(const DecisionProblem& problem, const JointDistribution& joint,
                      const Distribution& prior, const Distribution& marginal);

}  // namespace bce
