#pragma once

#include "bce/problem.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bce {

enum class StructureTag {
  BinaryState,
  BinaryAction,
  AffineUtilityDifferences,
  TwoStep,
  SmallState,
  MonotoneConcave,
  General,
};

std::string to_string(StructureTag tag);

// Witness for adjacent differences of the form gamma_j * d + kappa_j with
// gamma_j > 0; d is indexed by the original state order and `state_order`
// sorts states so d is nondecreasing (ties by original index).
struct AudCertificate {
  RatVector d;
  RatVector gamma;
  RatVector kappa;
  std::vector<Eigen::Index> state_order;

  Rat d_sorted(Eigen::Index k) const { return d(state_order[k]); }
};

// Witness for adjacent differences taking exactly the two values
// d_low_j < 0 < d_high_j; i_star_j is the number of states on the low side
// under `state_order` and is nondecreasing in j.
struct TwoStepCertificate {
  RatVector d_low;
  RatVector d_high;
  std::vector<Eigen::Index> i_star;
  std::vector<Eigen::Index> state_order;
};

struct StructureClass {
  StructureTag tag = StructureTag::General;
  std::optional<AudCertificate> aud;
  std::optional<TwoStepCertificate> two_step;
  // State order under which the problem has increasing differences and is
  // concave in actions; present iff that holds.
  std::optional<std::vector<Eigen::Index>> monotone_concave_order;

  bool binary_state = false;
  bool binary_action = false;
  bool small_state = false;
};

StructureClass classify(const DecisionProblem& problem);

// Detection pieces, exposed for reuse.
std::optional<AudCertificate> detect_aud(const DecisionProblem& problem);
std::optional<TwoStepCertificate> detect_two_step(const DecisionProblem& problem);
std::optional<std::vector<Eigen::Index>> verify_monotone_concave(const DecisionProblem& problem);

}  // namespace bce
