#pragma once

#include "bce/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bce {

// Probability vector over a labeled finite set; weights are nonnegative
// rationals that sum to exactly 1.
struct Distribution {
  std::vector<std::string> domain;
  RatVector weights;

  static Distribution create(std::vector<std::string> domain, RatVector weights);
  static Distribution uniform(std::vector<std::string> domain);
  static Distribution point_mass(std::vector<std::string> domain, Eigen::Index at);

  Eigen::Index size() const { return weights.size(); }
  const Rat& operator[](Eigen::Index i) const { return weights(i); }
  std::optional<Eigen::Index> index_of(const std::string& label) const;
};

// Finite decision problem: states, actions, and a J x I payoff matrix
// (row = action, column = state).
struct DecisionProblem {
  std::vector<std::string> states;
  std::vector<std::string> actions;
  RatMatrix utility;

  static DecisionProblem create(std::vector<std::string> states,
                                std::vector<std::string> actions, RatMatrix utility);

  Eigen::Index num_states() const { return static_cast<Eigen::Index>(states.size()); }
  Eigen::Index num_actions() const { return static_cast<Eigen::Index>(actions.size()); }
  const Rat& u(Eigen::Index action, Eigen::Index state) const { return utility(action, state); }
  std::optional<Eigen::Index> action_index(const std::string& label) const;
  std::optional<Eigen::Index> state_index(const std::string& label) const;

  // u(high, .) - u(low, .) as a vector over states.
  RatVector difference(Eigen::Index high, Eigen::Index low) const;
};

struct UtilityDifference {
  std::string high_action;
  std::string low_action;
  RatVector values;
};

// Adjacent differences d(a_{j+1}, a_j, .) for j = 1..J-1; requires >= 2 actions.
std::vector<UtilityDifference> utility_differences(const DecisionProblem& problem);

// Exact expected utility of an action under a belief over states.
Rat expected_utility(const DecisionProblem& problem, Eigen::Index action, const RatVector& belief);

}  // namespace bce
