#include "bce/problem.hpp"

#include <algorithm>
#include <unordered_set>

namespace bce {

namespace {

void require_unique(const std::vector<std::string>& labels, const char* what) {
  std::unordered_set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) throw InputError(std::string("duplicate ") + what + " label: " + l);
  }
}

}  // namespace

Distribution Distribution::create(std::vector<std::string> domain, RatVector weights) {
  if (domain.empty()) throw InputError("distribution needs a nonempty domain");
  if (static_cast<Eigen::Index>(domain.size()) != weights.size())
    throw InputError("distribution weight count does not match domain");
  require_unique(domain, "domain");
  Rat total = 0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (weights(i) < 0) throw InputError("negative probability for " + domain[i]);
    total += weights(i);
  }
  if (total != 1) throw InputError("probabilities sum to " + rat_to_string(total) + ", not 1");
  Distribution d;
  d.domain = std::move(domain);
  d.weights = std::move(weights);
  return d;
}

Distribution Distribution::uniform(std::vector<std::string> domain) {
  const auto n = static_cast<Eigen::Index>(domain.size());
  RatVector w = RatVector::Constant(n, Rat(1, static_cast<long>(n)));
  return create(std::move(domain), std::move(w));
}

Distribution Distribution::point_mass(std::vector<std::string> domain, Eigen::Index at) {
  RatVector w = RatVector::Zero(static_cast<Eigen::Index>(domain.size()));
  w(at) = 1;
  return create(std::move(domain), std::move(w));
}

std::optional<Eigen::Index> Distribution::index_of(const std::string& label) const {
  for (size_t i = 0; i < domain.size(); ++i)
    if (domain[i] == label) return static_cast<Eigen::Index>(i);
  return std::nullopt;
}

DecisionProblem DecisionProblem::create(std::vector<std::string> states,
                                        std::vector<std::string> actions, RatMatrix utility) {
  if (states.empty()) throw InputError("need at least one state");
  if (actions.empty()) throw InputError("need at least one action");
  require_unique(states, "state");
  require_unique(actions, "action");
  if (utility.rows() != static_cast<Eigen::Index>(actions.size()) ||
      utility.cols() != static_cast<Eigen::Index>(states.size()))
    throw InputError("utility matrix must be actions x states");
  DecisionProblem p;
  p.states = std::move(states);
  p.actions = std::move(actions);
  p.utility = std::move(utility);
  return p;
}

std::optional<Eigen::Index> DecisionProblem::action_index(const std::string& label) const {
  for (size_t i = 0; i < actions.size(); ++i)
    if (actions[i] == label) return static_cast<Eigen::Index>(i);
  return std::nullopt;
}

std::optional<Eigen::Index> DecisionProblem::state_index(const std::string& label) const {
  for (size_t i = 0; i < states.size(); ++i)
    if (states[i] == label) return static_cast<Eigen::Index>(i);
  return std::nullopt;
}

RatVector DecisionProblem::difference(Eigen::Index high, Eigen::Index low) const {
  return (utility.row(high) - utility.row(low)).transpose();
}

std::vector<UtilityDifference> utility_differences(const DecisionProblem& problem) {
  if (problem.num_actions() < 2) throw InputError("utility differences need at least two actions");
  std::vector<UtilityDifference> out;
  out.reserve(problem.num_actions() - 1);
  for (Eigen::Index j = 0; j + 1 < problem.num_actions(); ++j) {
    out.push_back(UtilityDifference{problem.actions[j + 1], problem.actions[j],
                                    problem.difference(j + 1, j)});
  }
  return out;
}

Rat expected_utility(const DecisionProblem& problem, Eigen::Index action, const RatVector& belief) {
  return problem.utility.row(action).dot(belief.transpose());
}

}  // namespace bce
