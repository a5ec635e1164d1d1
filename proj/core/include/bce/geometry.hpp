#pragma once

#include "bce/problem.hpp"
#include "bce/rational.hpp"

#include <vector>

namespace bce {

inline constexpr int kDefaultGeometryCap = 6;

class GeometryCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Halfspace representation: { x : normal.x <= height } rows plus affine-hull
// equalities { x : normal.x == height }. Belief-set polytopes live in the
// I-1 free coordinates (mu_2 ... mu_I).
struct HPolytope {
  struct Row {
    RatVector normal;
    Rat height;
  };
  Eigen::Index dim = 0;
  std::vector<Row> inequalities;
  std::vector<Row> equalities;
};

// Vertex representation; vertices deduplicated and lexicographically sorted.
struct VPolytope {
  Eigen::Index dim = 0;
  std::vector<RatVector> vertices;
};

// Basis of the kernel space { p : p.(x - y) = 0 for all x, y in the polytope }
// together with an anchor point of the polytope.
struct AffineHullBasis {
  std::vector<RatVector> basis;
  RatVector anchor;
};

struct FacetResult {
  HPolytope hrep;
  AffineHullBasis hull;
};

// Exact vertex enumeration by basis subsets. Throws GeometryCapError above the
// dimension cap and std::runtime_error on unbounded input.
VPolytope enumerate_vertices(const HPolytope& h, int cap = kDefaultGeometryCap);

// Minimal H-representation plus affine hull of a vertex set, facets found by
// exact polar-dual vertex enumeration. Throws on empty input.
FacetResult enumerate_facets(const VPolytope& v, int cap = kDefaultGeometryCap);

bool contains(const HPolytope& h, const AffineHullBasis& hull, const RatVector& point);

// H-representation of the beliefs at which `action` is optimal, in the I-1
// free coordinates. No feasibility check is performed.
HPolytope optimal_belief_set(const DecisionProblem& problem, Eigen::Index action);
HPolytope optimal_belief_set(const DecisionProblem& problem, const std::string& action);

// True iff the optimal-belief set of `action` is empty.
bool is_dominated(const DecisionProblem& problem, Eigen::Index action);
bool is_dominated(const DecisionProblem& problem, const std::string& action);

// Vertex set of sum_a nu0(a) * Delta*(a) over the support of the marginal,
// reduced to extreme points. Throws on dominated actions in the support.
VPolytope weighted_minkowski(const DecisionProblem& problem, const Distribution& marginal,
                             int cap = kDefaultGeometryCap);

// Primitive outward facet normals of the identified prior set, in free
// coordinates (lower-dimensional sets are handled through their affine hull).
std::vector<RatVector> refinement_rays(const DecisionProblem& problem,
                                       const Distribution& marginal,
                                       int cap = kDefaultGeometryCap);

// Free-coordinate embedding (drops mu_1) and its inverse.
RatVector to_free_coordinates(const RatVector& belief);
RatVector from_free_coordinates(const RatVector& free_point);

// Lift of a free-coordinate normal to a state-indexed direction with the
// first component pinned to zero.
RatVector lift_free_normal(const RatVector& normal);

}  // namespace bce
