#include "bce/classify.hpp"

#include "bce/simplex.hpp"

#include <algorithm>
#include <numeric>

namespace bce {

std::string to_string(StructureTag tag) {
  switch (tag) {
    case StructureTag::BinaryState: return "binary-state";
    case StructureTag::BinaryAction: return "binary-action";
    case StructureTag::AffineUtilityDifferences: return "aud";
    case StructureTag::TwoStep: return "two-step";
    case StructureTag::SmallState: return "small-state";
    case StructureTag::MonotoneConcave: return "monotone-concave";
    case StructureTag::General: return "general";
  }
  return "general";
}

namespace {

std::vector<RatVector> adjacent_differences(const DecisionProblem& problem) {
  std::vector<RatVector> d;
  for (Eigen::Index j = 0; j + 1 < problem.num_actions(); ++j)
    d.push_back(problem.difference(j + 1, j));
  return d;
}

std::vector<Eigen::Index> sort_states_by(const RatVector& key) {
  std::vector<Eigen::Index> order(key.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return key(a) < key(b); });
  return order;
}

bool constant_vector(const RatVector& v) {
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (v(i) != v(0)) return false;
  return true;
}

// Concavity in actions, pointwise: D_{j+1} <= D_j on every state.
bool concave_part1(const std::vector<RatVector>& diffs) {
  for (size_t j = 0; j + 1 < diffs.size(); ++j)
    for (Eigen::Index i = 0; i < diffs[j].size(); ++i)
      if (diffs[j + 1](i) > diffs[j](i)) return false;
  return true;
}

// No belief zeroes two adjacent expected differences at once.
bool concave_part2_lp(const std::vector<RatVector>& diffs, Eigen::Index num_states) {
  for (size_t j = 0; j + 1 < diffs.size(); ++j) {
    lp::Problem p;
    p.num_vars = num_states;
    p.add_row(diffs[j], lp::Relation::Equal, Rat(0));
    p.add_row(diffs[j + 1], lp::Relation::Equal, Rat(0));
    p.add_row(RatVector::Constant(num_states, Rat(1)), lp::Relation::Equal, Rat(1));
    if (lp::solve(p).status == lp::Status::Optimal) return false;
  }
  return true;
}

}  // namespace

std::optional<AudCertificate> detect_aud(const DecisionProblem& problem) {
  const Eigen::Index J = problem.num_actions();
  const Eigen::Index I = problem.num_states();
  if (J < 2) {
    AudCertificate cert;
    cert.d = RatVector::Zero(I);
    cert.gamma = RatVector(0);
    cert.kappa = RatVector(0);
    cert.state_order = sort_states_by(cert.d);
    return cert;
  }
  std::vector<RatVector> diffs = adjacent_differences(problem);

  Eigen::Index first_nonconstant = -1;
  for (size_t j = 0; j < diffs.size(); ++j)
    if (!constant_vector(diffs[j])) { first_nonconstant = static_cast<Eigen::Index>(j); break; }

  AudCertificate cert;
  cert.gamma = RatVector::Constant(J - 1, Rat(1));
  cert.kappa = RatVector::Zero(J - 1);

  if (first_nonconstant < 0) {
    // every difference is state-independent; any d fits, take d == 0
    cert.d = RatVector::Zero(I);
    for (Eigen::Index j = 0; j < J - 1; ++j) cert.kappa(j) = diffs[j](0);
    if (!concave_part1(diffs)) return std::nullopt;
    cert.state_order = sort_states_by(cert.d);
    return cert;
  }

  cert.d = diffs[first_nonconstant];
  Eigen::Index wa = -1, wb = -1;
  for (Eigen::Index i = 1; i < I; ++i)
    if (cert.d(i) != cert.d(0)) { wa = 0; wb = i; break; }

  for (Eigen::Index j = 0; j < J - 1; ++j) {
    const RatVector& dj = diffs[j];
    if (constant_vector(dj)) return std::nullopt;  // gamma > 0 forces a nonconstant image
    Rat gamma = (dj(wa) - dj(wb)) / (cert.d(wa) - cert.d(wb));
    if (gamma <= 0) return std::nullopt;
    Rat kappa = dj(wa) - gamma * cert.d(wa);
    for (Eigen::Index i = 0; i < I; ++i)
      if (dj(i) != gamma * cert.d(i) + kappa) return std::nullopt;
    cert.gamma(j) = gamma;
    cert.kappa(j) = kappa;
  }

  if (!concave_part1(diffs)) return std::nullopt;

  // adjacent pairs share an interior zero iff their -kappa/gamma breakpoints
  // coincide inside the range of d
  if (J >= 3) {
    Rat dmin = cert.d(0), dmax = cert.d(0);
    for (Eigen::Index i = 1; i < I; ++i) {
      dmin = std::min(dmin, cert.d(i));
      dmax = std::max(dmax, cert.d(i));
    }
    for (Eigen::Index j = 0; j + 1 < J - 1; ++j) {
      Rat bj = -cert.kappa(j) / cert.gamma(j);
      Rat bj1 = -cert.kappa(j + 1) / cert.gamma(j + 1);
      if (bj == bj1 && bj >= dmin && bj <= dmax) return std::nullopt;
    }
  }

  cert.state_order = sort_states_by(cert.d);
  return cert;
}

std::optional<TwoStepCertificate> detect_two_step(const DecisionProblem& problem) {
  const Eigen::Index J = problem.num_actions();
  const Eigen::Index I = problem.num_states();
  if (J < 2) return std::nullopt;
  std::vector<RatVector> diffs = adjacent_differences(problem);

  TwoStepCertificate cert;
  cert.d_low = RatVector(J - 1);
  cert.d_high = RatVector(J - 1);
  std::vector<std::vector<bool>> low_sets(J - 1, std::vector<bool>(I, false));

  for (Eigen::Index j = 0; j < J - 1; ++j) {
    Rat lo = diffs[j](0), hi = diffs[j](0);
    for (Eigen::Index i = 1; i < I; ++i) {
      lo = std::min(lo, diffs[j](i));
      hi = std::max(hi, diffs[j](i));
    }
    if (!(lo < 0 && 0 < hi)) return std::nullopt;
    for (Eigen::Index i = 0; i < I; ++i) {
      if (diffs[j](i) == lo)
        low_sets[j][i] = true;
      else if (diffs[j](i) != hi)
        return std::nullopt;  // a third value
    }
    cert.d_low(j) = lo;
    cert.d_high(j) = hi;
  }

  // low sets must be nested and levels decreasing in j (concavity)
  for (Eigen::Index j = 0; j + 1 < J - 1; ++j) {
    for (Eigen::Index i = 0; i < I; ++i)
      if (low_sets[j][i] && !low_sets[j + 1][i]) return std::nullopt;
    if (cert.d_low(j + 1) > cert.d_low(j)) return std::nullopt;
    if (cert.d_high(j + 1) > cert.d_high(j)) return std::nullopt;
  }

  // order states by how many low sets contain them, most first
  RatVector level(I);
  for (Eigen::Index i = 0; i < I; ++i) {
    int count = 0;
    for (Eigen::Index j = 0; j < J - 1; ++j)
      if (low_sets[j][i]) ++count;
    level(i) = Rat(-count);
  }
  cert.state_order = sort_states_by(level);
  cert.i_star.resize(J - 1);
  for (Eigen::Index j = 0; j < J - 1; ++j) {
    Eigen::Index count = 0;
    for (Eigen::Index i = 0; i < I; ++i)
      if (low_sets[j][i]) ++count;
    cert.i_star[j] = count;  // 1-based threshold index in the sorted order
  }
  return cert;
}

std::optional<std::vector<Eigen::Index>> verify_monotone_concave(const DecisionProblem& problem) {
  const Eigen::Index J = problem.num_actions();
  const Eigen::Index I = problem.num_states();
  if (J < 2) return sort_states_by(RatVector::Zero(I));
  std::vector<RatVector> diffs = adjacent_differences(problem);

  // a common increasing order exists iff the per-state difference tuples are
  // totally ordered componentwise; lexicographic sorting then finds it
  std::vector<Eigen::Index> order(I);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    for (const auto& dj : diffs) {
      if (dj(a) != dj(b)) return dj(a) < dj(b);
    }
    return false;
  });
  for (const auto& dj : diffs)
    for (Eigen::Index k = 0; k + 1 < I; ++k)
      if (dj(order[k]) > dj(order[k + 1])) return std::nullopt;

  if (!concave_part1(diffs)) return std::nullopt;
  if (!concave_part2_lp(diffs, I)) return std::nullopt;
  return order;
}

StructureClass classify(const DecisionProblem& problem) {
  StructureClass out;
  out.binary_state = problem.num_states() == 2;
  out.binary_action = problem.num_actions() == 2;
  out.small_state = problem.num_states() <= 3;
  out.aud = detect_aud(problem);
  out.two_step = detect_two_step(problem);
  out.monotone_concave_order = verify_monotone_concave(problem);

  if (out.binary_state)
    out.tag = StructureTag::BinaryState;
  else if (out.binary_action)
    out.tag = StructureTag::BinaryAction;
  else if (out.aud)
    out.tag = StructureTag::AffineUtilityDifferences;
  else if (out.two_step)
    out.tag = StructureTag::TwoStep;
  else if (out.small_state)
    out.tag = StructureTag::SmallState;
  else if (out.monotone_concave_order)
    out.tag = StructureTag::MonotoneConcave;
  else
    out.tag = StructureTag::General;
  return out;
}

}  // namespace bce
