#include "bce/extensions.hpp"

#include "bce/classify.hpp"
#include "bce/support_tests.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace bce {

DecisionProblem ProblemFamily::instantiate(size_t k) const {
  if (k >= thetas.size()) throw InputError("theta index out of range");
  switch (mode) {
    case Mode::Shift: {
      RatMatrix u = base.utility;
      const Eigen::Index top = base.num_actions() - 1;
      for (Eigen::Index i = 0; i < base.num_states(); ++i) u(top, i) += thetas[k];
      return DecisionProblem::create(base.states, base.actions, std::move(u));
    }
    case Mode::Ratio: {
      if (base.num_actions() != 2) throw InputError("ratio families need two actions");
      RatMatrix u = RatMatrix::Zero(2, base.num_states());
      if (cost_type1[k] <= 0 || cost_type2[k] <= 0)
        throw InputError("error costs must be positive");
      std::vector<bool> hat(base.num_states(), false);
      for (Eigen::Index i : hat_states) hat[i] = true;
      for (Eigen::Index i = 0; i < base.num_states(); ++i)
        u(1, i) = hat[i] ? cost_type1[k] : -cost_type2[k];
      return DecisionProblem::create(base.states, base.actions, std::move(u));
    }
    case Mode::Table:
      return DecisionProblem::create(base.states, base.actions, tables[k]);
  }
  throw InputError("unknown family mode");
}

bool d_mps_check(const DecisionProblem& problem, const Distribution& prior_base,
                 const Distribution& prior_spread) {
  auto cert = detect_aud(problem);
  if (!cert) throw InputError("d-mps comparison needs affine utility differences");
  if (prior_base.domain != problem.states || prior_spread.domain != problem.states)
    throw InputError("prior domain does not match states");
  const RatVector& d = cert->d;

  Rat mean_base = d.dot(prior_base.weights);
  Rat mean_spread = d.dot(prior_spread.weights);
  if (mean_base != mean_spread) return false;

  for (Eigen::Index star = 0; star < problem.num_states(); ++star) {
    Rat up_base = 0, up_spread = 0, down_base = 0, down_spread = 0;
    for (Eigen::Index i = 0; i < problem.num_states(); ++i) {
      Rat up = std::min(d(i), d(star));
      Rat down = std::min(Rat(-d(i)), Rat(-d(star)));
      up_base += prior_base[i] * up;
      up_spread += prior_spread[i] * up;
      down_base += prior_base[i] * down;
      down_spread += prior_spread[i] * down;
    }
    if (up_spread > up_base) return false;
    if (down_spread > down_base) return false;
  }
  return true;
}

std::pair<Verdict, Verdict> preservation_check(const DecisionProblem& problem,
                                               const Distribution& prior,
                                               const Distribution& spread_prior,
                                               const Distribution& marginal) {
  if (!d_mps_check(problem, prior, spread_prior))
    throw InputError("spread prior is not a d-mean-preserving spread of the base prior");
  ConsistencyChecker checker(problem);
  Verdict base = checker.check(prior, marginal);
  Verdict spread = checker.check(spread_prior, marginal);
  if (base.consistent && !spread.consistent)
    throw std::logic_error("spread pair inconsistent although the base pair is consistent");
  return {std::move(base), std::move(spread)};
}

namespace {

// d(., theta) nondecreasing in theta, state by state.
bool pointwise_shifted(const std::vector<RatVector>& ds) {
  for (size_t k = 0; k + 1 < ds.size(); ++k)
    for (Eigen::Index i = 0; i < ds[k].size(); ++i)
      if (ds[k + 1](i) < ds[k](i)) return false;
  return true;
}

// d(w, theta) / d(w', theta) nondecreasing in theta for w before w' in the
// d-sorted order; compared by cross-multiplication.
bool ratio_ordered(const std::vector<RatVector>& ds) {
  const Eigen::Index I = ds.front().size();
  for (Eigen::Index a = 0; a < I; ++a) {
    for (Eigen::Index b = 0; b < I; ++b) {
      if (ds.front()(a) >= ds.front()(b)) continue;  // need w < w' in d-order
      for (size_t k = 0; k + 1 < ds.size(); ++k) {
        const Rat &xa = ds[k](a), &xb = ds[k](b);
        const Rat &ya = ds[k + 1](a), &yb = ds[k + 1](b);
        if (xb == 0 || yb == 0) return false;
        // xa/xb <= ya/yb with sign-aware cross multiplication
        Rat lhs = xa * yb, rhs = ya * xb;
        bool flip = (xb > 0) != (yb > 0);
        if (flip ? (lhs < rhs) : (lhs > rhs)) return false;
      }
    }
  }
  return true;
}

}  // namespace

std::vector<BoundsRow> shift_bounds_table(const ProblemFamily& family, const Distribution& prior) {
  if (family.thetas.empty()) throw InputError("empty parameter grid");
  std::vector<DecisionProblem> instances;
  std::vector<RatVector> ds;
  for (size_t k = 0; k < family.thetas.size(); ++k) {
    instances.push_back(family.instantiate(k));
    if (instances.back().num_actions() != 2)
      throw InputError("bounds tables need binary-action families");
    ds.push_back(instances.back().difference(1, 0));
  }
  if (!pointwise_shifted(ds) && !ratio_ordered(ds))
    throw InputError("family is neither pointwise shifted nor ratio ordered in theta");

  std::vector<BoundsRow> rows;
  for (size_t k = 0; k < instances.size(); ++k) {
    auto [lb, ub] = bounds_binary_action(instances[k], prior);
    rows.push_back({family.thetas[k], lb, ub});
  }
  for (size_t k = 0; k + 1 < rows.size(); ++k) {
    if (rows[k + 1].lower < rows[k].lower || rows[k + 1].upper < rows[k].upper)
      throw std::logic_error("bound columns failed to be nondecreasing in theta");
  }
  return rows;
}

DecisionProblem product_problem(const std::vector<DecisionProblem>& problems) {
  if (problems.empty()) throw InputError("empty problem list");
  for (const auto& p : problems)
    if (p.states != problems.front().states)
      throw InputError("product construction needs a shared state space");

  std::vector<std::vector<Eigen::Index>> profiles{{}};
  for (const auto& p : problems) {
    std::vector<std::vector<Eigen::Index>> next;
    for (const auto& prefix : profiles) {
      for (Eigen::Index a = 0; a < p.num_actions(); ++a) {
        auto ext = prefix;
        ext.push_back(a);
        next.push_back(std::move(ext));
      }
    }
    profiles = std::move(next);
  }

  std::vector<std::string> labels;
  const Eigen::Index I = problems.front().num_states();
  RatMatrix u = RatMatrix::Zero(static_cast<Eigen::Index>(profiles.size()), I);
  for (size_t r = 0; r < profiles.size(); ++r) {
    std::string label;
    for (size_t n = 0; n < problems.size(); ++n) {
      if (n > 0) label += "|";
      label += problems[n].actions[profiles[r][n]];
      for (Eigen::Index i = 0; i < I; ++i)
        u(static_cast<Eigen::Index>(r), i) += problems[n].u(profiles[r][n], i);
    }
    labels.push_back(std::move(label));
  }
  std::vector<std::string> sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InputError("label clash in product construction");
  return DecisionProblem::create(problems.front().states, std::move(labels), std::move(u));
}

Verdict across_problems(const std::vector<DecisionProblem>& problems,
                        const Distribution& joint_marginal, const Distribution& prior) {
  DecisionProblem product = product_problem(problems);
  if (joint_marginal.domain != product.actions)
    throw InputError("joint marginal domain does not match action profiles");
  return check_bce(product, prior, joint_marginal);
}

Verdict public_bce_check(const PrivateGame& game, const Distribution& prior,
                         const Distribution& joint_marginal) {
  std::vector<DecisionProblem> problems;
  for (const auto& player : game.players)
    problems.push_back(DecisionProblem::create(game.states, player.actions, player.utility));
  return across_problems(problems, joint_marginal, prior);
}

RingVerdict ring_check(const RingGame& game, const Distribution& prior,
                       const std::vector<Distribution>& marginals) {
  if (game.players.empty()) throw InputError("ring game needs players");
  if (marginals.size() != game.players.size())
    throw InputError("one action distribution per player required");

  RingVerdict out;
  out.consistent = true;
  std::vector<JointDistribution> joints;
  for (size_t n = 0; n < game.players.size(); ++n) {
    const auto& states = n == 0 ? game.states : game.players[n - 1].actions;
    DecisionProblem link =
        DecisionProblem::create(states, game.players[n].actions, game.players[n].payoff);
    const Distribution& link_prior = n == 0 ? prior : marginals[n - 1];
    Verdict v = check_bce(link, link_prior, marginals[n]);
    if (!v.consistent && out.consistent) {
      out.consistent = false;
      out.failing_link = static_cast<Eigen::Index>(n) + 1;
    }
    if (v.consistent) joints.push_back(*v.witness);
    out.links.push_back(std::move(v));
  }
  if (!out.consistent) return out;

  // rebuild the chained joint pi(a, w) = pi_1(a_1, w) prod_n pi_n(a_n | a_{n-1})
  // and revalidate every player's obedience constraints
  const Eigen::Index I = static_cast<Eigen::Index>(game.states.size());
  std::vector<Eigen::Index> sizes;
  for (const auto& pl : game.players) sizes.push_back(static_cast<Eigen::Index>(pl.actions.size()));
  Eigen::Index total = 1;
  for (Eigen::Index s : sizes) total *= s;

  std::vector<RatMatrix> conditionals;  // per n >= 1: A_n x A_{n-1}
  for (size_t n = 1; n < game.players.size(); ++n) {
    RatMatrix cond = RatMatrix::Zero(sizes[n], sizes[n - 1]);
    for (Eigen::Index prev = 0; prev < sizes[n - 1]; ++prev) {
      Rat mass = marginals[n - 1][prev];
      for (Eigen::Index own = 0; own < sizes[n]; ++own)
        cond(own, prev) = mass == 0 ? Rat(0) : joints[n].pi(own, prev) / mass;
    }
    conditionals.push_back(std::move(cond));
  }

  // accumulate the pairwise marginals of the chained joint and compare with
  // the per-link witnesses; equality plus link obedience gives game obedience
  std::vector<Eigen::Index> profile(game.players.size(), 0);
  std::vector<RatVector> pair_marginals;
  pair_marginals.push_back(RatVector::Zero(sizes[0] * I));
  for (size_t n = 1; n < game.players.size(); ++n)
    pair_marginals.push_back(RatVector::Zero(sizes[n] * sizes[n - 1]));
  for (Eigen::Index flat = 0; flat < total; ++flat) {
    Eigen::Index rest = flat;
    for (size_t n = game.players.size(); n-- > 0;) {
      profile[n] = rest % sizes[n];
      rest /= sizes[n];
    }
    for (Eigen::Index w = 0; w < I; ++w) {
      Rat mass = joints[0].pi(profile[0], w);
      for (size_t n = 1; n < game.players.size(); ++n)
        mass *= conditionals[n - 1](profile[n], profile[n - 1]);
      if (mass == 0) continue;
      pair_marginals[0](profile[0] * I + w) += mass;
      for (size_t n = 1; n < game.players.size(); ++n)
        pair_marginals[n](profile[n] * sizes[n - 1] + profile[n - 1]) += mass;
    }
  }
  out.witness_validated = true;
  for (size_t n = 0; n < game.players.size() && out.witness_validated; ++n) {
    const Eigen::Index cols = n == 0 ? I : sizes[n - 1];
    for (Eigen::Index own = 0; own < sizes[n]; ++own)
      for (Eigen::Index c = 0; c < cols; ++c)
        if (pair_marginals[n](own * cols + c) != joints[n].pi(own, c))
          out.witness_validated = false;
  }
  return out;
}

}  // namespace bce
