#pragma once

#include "bce/consistency.hpp"
#include "bce/problem.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace bce {

inline constexpr int kSubsetEnumerationCap = 20;

// Finitely supported distribution over posteriors; weights >= 0 sum to 1.
struct PosteriorDistribution {
  std::vector<RatVector> posteriors;  // each a belief over states
  RatVector weights;

  static PosteriorDistribution create(std::vector<RatVector> posteriors, RatVector weights);
  RatVector mean() const;
};

// Pushforward mass on action subsets, keyed by bitmask over action indices.
struct MenuMeasure {
  Eigen::Index num_actions = 0;
  std::map<std::uint32_t, Rat> mass;
};

// Per-posterior distribution over actions, aligned with a tau support.
struct DecisionRule {
  std::vector<RatVector> action_probs;
};

// Bipartite supply-demand graph: posteriors supply tau(mu), actions demand
// nu0(a), an edge (mu, a) iff a is optimal at mu.
struct FlowNetwork {
  std::vector<Rat> supply;
  std::vector<Rat> demand;
  std::vector<std::vector<Eigen::Index>> edges;  // per posterior, optimal actions
};

// Exact argmax set of expected utility.
std::vector<Eigen::Index> optimal_actions(const DecisionProblem& problem, const RatVector& belief);

MenuMeasure menu_measure(const DecisionProblem& problem, const PosteriorDistribution& tau);

// First subset (size, then lexicographic) violating the covering condition
// sum_{a in B} nu0(a) >= sum_{C subseteq B} tau_A(C); nullopt when none.
std::optional<std::uint32_t> core_check(const Distribution& marginal, const MenuMeasure& menu);

struct ImplementResult {
  bool success = false;
  DecisionRule rule;                   // on success
  std::vector<Eigen::Index> violating; // inclusion-minimal violating coalition on failure
  FlowNetwork network;
};

// Builds the flow network and solves exact max-flow; success iff every supply
// is shipped and every demand met.
ImplementResult implement_tau(const DecisionProblem& problem, const PosteriorDistribution& tau,
                              const Distribution& marginal);

// Stochastic choice from menus reproducing the marginal: sigma(a|B) supported
// in B with nu0(a) = sum_B tau_A(B) sigma(a|B). Requires the core condition.
std::map<std::uint32_t, RatVector> menu_choice(const MenuMeasure& menu,
                                               const Distribution& marginal);

// State-dependent stochastic choice sigma~(a|w) of the experiment induced by
// (tau, rule); requires tau Bayes plausible for the prior.
RatMatrix experiment_kernel(const DecisionProblem& problem, const Distribution& prior,
                            const PosteriorDistribution& tau, const DecisionRule& rule);

// Posterior distribution of an obedient joint: posteriors pi(a,.)/nu0(a) with
// weights nu0(a), equal posteriors merged.
PosteriorDistribution tau_from_bce(const DecisionProblem& problem, const JointDistribution& joint,
                                   const Distribution& marginal);

}  // namespace bce
