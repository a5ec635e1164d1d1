#include "bce/consistency.hpp"

#include "bce/geometry.hpp"
#include "bce/simplex.hpp"

#include <algorithm>

namespace bce {

RatVector JointDistribution::state_marginal() const {
  RatVector out = RatVector::Zero(pi.cols());
  for (Eigen::Index i = 0; i < pi.cols(); ++i)
    for (Eigen::Index j = 0; j < pi.rows(); ++j) out(i) += pi(j, i);
  return out;
}

RatVector JointDistribution::action_marginal() const {
  RatVector out = RatVector::Zero(pi.rows());
  for (Eigen::Index j = 0; j < pi.rows(); ++j)
    for (Eigen::Index i = 0; i < pi.cols(); ++i) out(j) += pi(j, i);
  return out;
}

RatVector DualCertificate::lambda_up() const {
  RatVector out = RatVector::Zero(lambda.rows());
  for (Eigen::Index j = 0; j + 1 < lambda.rows(); ++j) out(j) = lambda(j, j + 1);
  return out;
}

RatVector DualCertificate::lambda_down() const {
  RatVector out = RatVector::Zero(lambda.rows());
  for (Eigen::Index j = 1; j < lambda.rows(); ++j) out(j) = lambda(j, j - 1);
  return out;
}

Rat DualCertificate::objective(const Distribution& prior, const Distribution& marginal) const {
  return q.dot(marginal.weights) - p.dot(prior.weights);
}

bool DualCertificate::validate(const DecisionProblem& problem, const Distribution& prior,
                               const Distribution& marginal) const {
  const Eigen::Index J = problem.num_actions();
  const Eigen::Index I = problem.num_states();
  if (p.size() != I || q.size() != J || lambda.rows() != J || lambda.cols() != J) return false;
  for (Eigen::Index j = 0; j < J; ++j)
    for (Eigen::Index k = 0; k < J; ++k)
      if (lambda(j, k) < 0) return false;
  for (Eigen::Index j = 0; j < J; ++j) {
    for (Eigen::Index i = 0; i < I; ++i) {
      Rat rhs = p(i);
      for (Eigen::Index k = 0; k < J; ++k) {
        if (k == j) continue;
        rhs += lambda(j, k) * (problem.u(j, i) - problem.u(k, i));
      }
      if (q(j) < rhs) return false;
    }
  }
  return objective(prior, marginal) < 0;
}

ConsistencyChecker::ConsistencyChecker(DecisionProblem problem) : problem_(std::move(problem)) {
  dominated_.resize(problem_.num_actions());
  for (Eigen::Index a = 0; a < problem_.num_actions(); ++a)
    dominated_[a] = is_dominated(problem_, a);
}

Verdict ConsistencyChecker::check(const Distribution& prior, const Distribution& marginal) const {
  if (prior.domain != problem_.states) throw InputError("prior domain does not match states");
  if (marginal.domain != problem_.actions) throw InputError("marginal domain does not match actions");
  const Eigen::Index J = problem_.num_actions();
  const Eigen::Index I = problem_.num_states();

  Verdict verdict;
  for (Eigen::Index a = 0; a < J; ++a) {
    if (marginal[a] > 0 && dominated_[a]) {
      verdict.consistent = false;
      verdict.dominated_action = problem_.actions[a];
      return verdict;
    }
  }

  // variables pi(j,i), indexed j*I + i
  lp::Problem p;
  p.num_vars = J * I;
  struct ObRow { Eigen::Index rec, dev; };
  std::vector<ObRow> obedience;
  for (Eigen::Index j = 0; j < J; ++j) {
    for (Eigen::Index k = 0; k < J; ++k) {
      if (k == j) continue;
      RatVector row = RatVector::Zero(J * I);
      for (Eigen::Index i = 0; i < I; ++i) row(j * I + i) = problem_.u(j, i) - problem_.u(k, i);
      p.add_row(std::move(row), lp::Relation::GreaterEq, Rat(0));
      obedience.push_back({j, k});
    }
  }
  const size_t state_rows_at = p.rows.size();
  for (Eigen::Index i = 0; i < I; ++i) {
    RatVector row = RatVector::Zero(J * I);
    for (Eigen::Index j = 0; j < J; ++j) row(j * I + i) = 1;
    p.add_row(std::move(row), lp::Relation::Equal, prior[i]);
  }
  const size_t action_rows_at = p.rows.size();
  for (Eigen::Index j = 0; j < J; ++j) {
    RatVector row = RatVector::Zero(J * I);
    for (Eigen::Index i = 0; i < I; ++i) row(j * I + i) = 1;
    p.add_row(std::move(row), lp::Relation::Equal, marginal[j]);
  }

  lp::Solution s = lp::solve(p);
  if (s.status == lp::Status::Optimal) {
    verdict.consistent = true;
    JointDistribution joint;
    joint.pi = RatMatrix(J, I);
    for (Eigen::Index j = 0; j < J; ++j)
      for (Eigen::Index i = 0; i < I; ++i) joint.pi(j, i) = s.x(j * I + i);
    verdict.witness = std::move(joint);
    return verdict;
  }

  verdict.consistent = false;
  DualCertificate cert;
  cert.p = RatVector::Zero(I);
  cert.q = RatVector::Zero(J);
  cert.lambda = RatMatrix::Zero(J, J);
  for (Eigen::Index i = 0; i < I; ++i) cert.p(i) = s.farkas(state_rows_at + i);
  for (Eigen::Index j = 0; j < J; ++j) cert.q(j) = -s.farkas(action_rows_at + j);
  for (size_t r = 0; r < obedience.size(); ++r)
    cert.lambda(obedience[r].rec, obedience[r].dev) = s.farkas(r);
  verdict.dual = std::move(cert);
  return verdict;
}

std::optional<Rat> ConsistencyChecker::action_support(Eigen::Index action,
                                                      const RatVector& p) const {
  if (p.size() != problem_.num_states()) throw InputError("direction dimension mismatch");
  if (dominated_[action]) return std::nullopt;
  lp::Problem lpp;
  lpp.num_vars = problem_.num_states();
  lpp.objective = p;
  for (Eigen::Index other = 0; other < problem_.num_actions(); ++other) {
    if (other == action) continue;
    lpp.add_row(problem_.difference(other, action), lp::Relation::LessEq, Rat(0));
  }
  lpp.add_row(RatVector::Constant(problem_.num_states(), Rat(1)), lp::Relation::Equal, Rat(1));
  lp::Solution s = lp::solve(lpp);
  if (s.status != lp::Status::Optimal) return std::nullopt;
  return s.objective;
}

std::optional<Rat> ConsistencyChecker::support_value(const Distribution& marginal,
                                                     const RatVector& p) const {
  if (marginal.domain != problem_.actions) throw InputError("marginal domain does not match actions");
  Rat total = 0;
  for (Eigen::Index a = 0; a < problem_.num_actions(); ++a) {
    if (marginal[a] == 0) continue;
    auto value = action_support(a, p);
    if (!value) return std::nullopt;
    total += marginal[a] * *value;
  }
  return total;
}

std::pair<Rat, Rat> ConsistencyChecker::extreme_marginal_bounds(
    const Distribution& prior, const std::vector<Eigen::Index>& action_set) const {
  if (action_set.empty()) throw InputError("empty action set");
  if (prior.domain != problem_.states) throw InputError("prior domain does not match states");
  const Eigen::Index J = problem_.num_actions();
  const Eigen::Index I = problem_.num_states();

  lp::Problem p;
  p.num_vars = J * I;
  RatVector objective = RatVector::Zero(J * I);
  for (Eigen::Index a : action_set)
    for (Eigen::Index i = 0; i < I; ++i) objective(a * I + i) = 1;

  for (Eigen::Index j = 0; j < J; ++j) {
    for (Eigen::Index k = 0; k < J; ++k) {
      if (k == j) continue;
      RatVector row = RatVector::Zero(J * I);
      for (Eigen::Index i = 0; i < I; ++i) row(j * I + i) = problem_.u(j, i) - problem_.u(k, i);
      p.add_row(std::move(row), lp::Relation::GreaterEq, Rat(0));
    }
  }
  for (Eigen::Index i = 0; i < I; ++i) {
    RatVector row = RatVector::Zero(J * I);
    for (Eigen::Index j = 0; j < J; ++j) row(j * I + i) = 1;
    p.add_row(std::move(row), lp::Relation::Equal, prior[i]);
  }

  p.objective = objective;
  lp::Solution hi = lp::solve(p);
  p.objective = -objective;
  lp::Solution lo = lp::solve(p);
  if (hi.status != lp::Status::Optimal || lo.status != lp::Status::Optimal)
    throw InputError("no obedient joint matches the prior");
  return {-lo.objective, hi.objective};
}

Verdict check_bce(const DecisionProblem& problem, const Distribution& prior,
                  const Distribution& marginal) {
  return ConsistencyChecker(problem).check(prior, marginal);
}

std::optional<Rat> support_value(const DecisionProblem& problem, const Distribution& marginal,
                                 const RatVector& p) {
  return ConsistencyChecker(problem).support_value(marginal, p);
}

std::pair<Rat, Rat> extreme_marginal_bounds(const DecisionProblem& problem,
                                            const Distribution& prior,
                                            const std::vector<std::string>& action_set) {
  std::vector<Eigen::Index> indices;
  for (const auto& label : action_set) {
    auto idx = problem.action_index(label);
    if (!idx) throw InputError("unknown action label: " + label);
    indices.push_back(*idx);
  }
  return ConsistencyChecker(problem).extreme_marginal_bounds(prior, indices);
}

BeliefSystem recover_belief_system(const DecisionProblem& problem, const JointDistribution& joint,
                                   const Distribution& marginal) {
  if (joint.pi.rows() != problem.num_actions() || joint.pi.cols() != problem.num_states())
    throw InputError("joint dimensions do not match problem");
  RatVector am = joint.action_marginal();
  for (Eigen::Index j = 0; j < am.size(); ++j)
    if (am(j) != marginal[j]) throw InputError("joint action marginal does not match");
  BeliefSystem out;
  for (Eigen::Index j = 0; j < problem.num_actions(); ++j) {
    if (marginal[j] == 0) continue;
    out.actions.push_back(j);
    out.posteriors.push_back(joint.pi.row(j).transpose() / marginal[j]);
  }
  return out;
}

bool validate_witness(const DecisionProblem& problem, const JointDistribution& joint,
                      const Distribution& prior, const Distribution& marginal) {
  const Eigen::Index J = problem.num_actions();
  const Eigen::Index I = problem.num_states();
  if (joint.pi.rows() != J || joint.pi.cols() != I) return false;
  for (Eigen::Index j = 0; j < J; ++j)
    for (Eigen::Index i = 0; i < I; ++i)
      if (joint.pi(j, i) < 0) return false;
  for (Eigen::Index j = 0; j < J; ++j) {
    for (Eigen::Index k = 0; k < J; ++k) {
      if (k == j) continue;
      Rat lhs = 0;
      for (Eigen::Index i = 0; i < I; ++i)
        lhs += joint.pi(j, i) * (problem.u(j, i) - problem.u(k, i));
      if (lhs < 0) return false;
    }
  }
  RatVector sm = joint.state_marginal();
  RatVector am = joint.action_marginal();
  for (Eigen::Index i = 0; i < I; ++i)
    if (sm(i) != prior[i]) return false;
  for (Eigen::Index j = 0; j < J; ++j)
    if (am(j) != marginal[j]) return false;
  return true;
}

}  // namespace bce
