#include "bce/geometry.hpp"

#include "bce/simplex.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace bce {

namespace {

struct VecLess {
  bool operator()(const RatVector& a, const RatVector& b) const { return lex_less(a, b); }
};

// Reduced row echelon form; returns pivot column per row.
std::vector<Eigen::Index> rref(RatMatrix& m) {
  std::vector<Eigen::Index> pivots;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Eigen::Index pr = -1;
    for (Eigen::Index r = row; r < m.rows(); ++r)
      if (m(r, col) != 0) { pr = r; break; }
    if (pr < 0) continue;
    m.row(row).swap(m.row(pr));
    const Rat inv = Rat(1) / m(row, col);
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      if (m(row, c) != 0) m(row, c) *= inv;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col) == 0) continue;
      const Rat f = m(r, col);
      for (Eigen::Index c = 0; c < m.cols(); ++c)
        if (m(row, c) != 0) m(r, c) -= f * m(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

// Solves M x = rhs when M (rows x cols, rows >= cols) has full column rank and
// the system is consistent; returns nullopt otherwise.
std::optional<RatVector> solve_exact(const RatMatrix& m, const RatVector& rhs) {
  RatMatrix aug(m.rows(), m.cols() + 1);
  aug.block(0, 0, m.rows(), m.cols()) = m;
  aug.col(m.cols()) = rhs;
  std::vector<Eigen::Index> pivots = rref(aug);
  for (Eigen::Index p : pivots)
    if (p == m.cols()) return std::nullopt;  // inconsistent
  if (static_cast<Eigen::Index>(pivots.size()) < m.cols()) return std::nullopt;  // underdetermined
  RatVector x = RatVector::Zero(m.cols());
  for (size_t r = 0; r < pivots.size(); ++r) x(pivots[r]) = aug(static_cast<Eigen::Index>(r), m.cols());
  return x;
}

// Basis of { x : rows . x = 0 }.
std::vector<RatVector> nullspace(RatMatrix rows) {
  const Eigen::Index n = rows.cols();
  std::vector<Eigen::Index> pivots = rref(rows);
  std::vector<bool> is_pivot(n, false);
  for (Eigen::Index p : pivots) is_pivot[p] = true;
  std::vector<RatVector> basis;
  for (Eigen::Index free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    RatVector v = RatVector::Zero(n);
    v(free) = 1;
    for (size_t r = 0; r < pivots.size(); ++r)
      v(pivots[r]) = -rows(static_cast<Eigen::Index>(r), free);
    basis.push_back(std::move(v));
  }
  return basis;
}

bool satisfies(const HPolytope& h, const RatVector& x) {
  for (const auto& row : h.equalities)
    if (row.normal.dot(x) != row.height) return false;
  for (const auto& row : h.inequalities)
    if (row.normal.dot(x) > row.height) return false;
  return true;
}

// LP feasibility of an H-polytope with free variables, via x = x+ - x-.
bool hpolytope_feasible(const HPolytope& h) {
  lp::Problem p;
  p.num_vars = 2 * h.dim;
  auto widen = [&](const RatVector& normal) {
    RatVector row(2 * h.dim);
    row.head(h.dim) = normal;
    row.tail(h.dim) = -normal;
    return row;
  };
  for (const auto& row : h.inequalities) p.add_row(widen(row.normal), lp::Relation::LessEq, row.height);
  for (const auto& row : h.equalities) p.add_row(widen(row.normal), lp::Relation::Equal, row.height);
  return lp::solve(p).status == lp::Status::Optimal;
}

Rat support_over_hpolytope(const HPolytope& h, const RatVector& direction, bool* bounded) {
  lp::Problem p;
  p.num_vars = 2 * h.dim;
  RatVector obj(2 * h.dim);
  obj.head(h.dim) = direction;
  obj.tail(h.dim) = -direction;
  p.objective = obj;
  auto widen = [&](const RatVector& normal) {
    RatVector row(2 * h.dim);
    row.head(h.dim) = normal;
    row.tail(h.dim) = -normal;
    return row;
  };
  for (const auto& row : h.inequalities) p.add_row(widen(row.normal), lp::Relation::LessEq, row.height);
  for (const auto& row : h.equalities) p.add_row(widen(row.normal), lp::Relation::Equal, row.height);
  lp::Solution s = lp::solve(p);
  if (s.status == lp::Status::Unbounded) {
    *bounded = false;
    return Rat(0);
  }
  if (s.status != lp::Status::Optimal) throw std::runtime_error("support over empty polytope");
  *bounded = true;
  return s.objective;
}

// True iff `point` lies in the convex hull of `others`.
bool in_convex_hull(const RatVector& point, const std::vector<const RatVector*>& others) {
  if (others.empty()) return false;
  const Eigen::Index dim = point.size();
  lp::Problem p;
  p.num_vars = static_cast<Eigen::Index>(others.size());
  for (Eigen::Index c = 0; c < dim; ++c) {
    RatVector row(p.num_vars);
    for (Eigen::Index k = 0; k < p.num_vars; ++k) row(k) = (*others[k])(c);
    p.add_row(row, lp::Relation::Equal, point(c));
  }
  p.add_row(RatVector::Constant(p.num_vars, Rat(1)), lp::Relation::Equal, Rat(1));
  return lp::solve(p).status == lp::Status::Optimal;
}

std::vector<RatVector> dedupe_sorted(std::vector<RatVector> points) {
  std::set<RatVector, VecLess> set(points.begin(), points.end());
  return {set.begin(), set.end()};
}

}  // namespace

RatVector to_free_coordinates(const RatVector& belief) {
  return belief.tail(belief.size() - 1);
}

RatVector from_free_coordinates(const RatVector& free_point) {
  RatVector out(free_point.size() + 1);
  Rat first = 1;
  for (Eigen::Index i = 0; i < free_point.size(); ++i) first -= free_point(i);
  out(0) = first;
  out.tail(free_point.size()) = free_point;
  return out;
}

RatVector lift_free_normal(const RatVector& normal) {
  RatVector out = RatVector::Zero(normal.size() + 1);
  out.tail(normal.size()) = normal;
  return out;
}

HPolytope optimal_belief_set(const DecisionProblem& problem, Eigen::Index action) {
  if (action < 0 || action >= problem.num_actions()) throw InputError("unknown action index");
  const Eigen::Index I = problem.num_states();
  HPolytope h;
  h.dim = I - 1;
  // obedience rows in free coordinates: c_1 + sum_{i>=2} mu_i (c_i - c_1) <= 0
  // where c = u(other, .) - u(action, .)
  for (Eigen::Index other = 0; other < problem.num_actions(); ++other) {
    if (other == action) continue;
    RatVector c = problem.difference(other, action);
    RatVector normal(I - 1);
    bool zero_normal = true;
    for (Eigen::Index i = 1; i < I; ++i) {
      normal(i - 1) = c(i) - c(0);
      if (normal(i - 1) != 0) zero_normal = false;
    }
    if (zero_normal && I >= 2) {
      // state-independent payoff gap: either no restriction or an empty set
      if (c(0) <= 0) continue;
      RatVector e = RatVector::Zero(I - 1);
      e(0) = 1;
      h.inequalities.push_back({e, Rat(-1)});
      h.inequalities.push_back({-e, Rat(0)});
      continue;
    }
    h.inequalities.push_back({std::move(normal), -c(0)});
  }
  // simplex bounds: mu_i >= 0 for i >= 2 and sum mu_i <= 1 (mu_1 >= 0)
  for (Eigen::Index i = 0; i < I - 1; ++i) {
    RatVector normal = RatVector::Zero(I - 1);
    normal(i) = -1;
    h.inequalities.push_back({std::move(normal), Rat(0)});
  }
  if (I >= 2) h.inequalities.push_back({RatVector::Constant(I - 1, Rat(1)), Rat(1)});
  return h;
}

HPolytope optimal_belief_set(const DecisionProblem& problem, const std::string& action) {
  auto idx = problem.action_index(action);
  if (!idx) throw InputError("unknown action label: " + action);
  return optimal_belief_set(problem, *idx);
}

bool is_dominated(const DecisionProblem& problem, Eigen::Index action) {
  if (action < 0 || action >= problem.num_actions()) throw InputError("unknown action index");
  // feasibility over all I coordinates: mu >= 0, sum = 1, obedience
  lp::Problem p;
  p.num_vars = problem.num_states();
  for (Eigen::Index other = 0; other < problem.num_actions(); ++other) {
    if (other == action) continue;
    p.add_row(problem.difference(other, action), lp::Relation::LessEq, Rat(0));
  }
  p.add_row(RatVector::Constant(problem.num_states(), Rat(1)), lp::Relation::Equal, Rat(1));
  return lp::solve(p).status != lp::Status::Optimal;
}

bool is_dominated(const DecisionProblem& problem, const std::string& action) {
  auto idx = problem.action_index(action);
  if (!idx) throw InputError("unknown action label: " + action);
  return is_dominated(problem, *idx);
}

VPolytope enumerate_vertices(const HPolytope& h, int cap) {
  if (h.dim > cap)
    throw GeometryCapError("dimension " + std::to_string(h.dim) + " above cap " + std::to_string(cap));
  VPolytope out;
  out.dim = h.dim;
  if (h.dim == 0) {
    if (hpolytope_feasible(h)) out.vertices.push_back(RatVector(0));
    return out;
  }

  // equality block, reduced once
  RatMatrix eq(static_cast<Eigen::Index>(h.equalities.size()), h.dim + 1);
  for (size_t r = 0; r < h.equalities.size(); ++r) {
    eq.block(static_cast<Eigen::Index>(r), 0, 1, h.dim) = h.equalities[r].normal.transpose();
    eq(static_cast<Eigen::Index>(r), h.dim) = h.equalities[r].height;
  }
  RatMatrix eq_red = eq;
  std::vector<Eigen::Index> eq_pivots = rref(eq_red);
  for (Eigen::Index p : eq_pivots)
    if (p == h.dim) return out;  // inconsistent equalities: empty
  const Eigen::Index eq_rank = static_cast<Eigen::Index>(eq_pivots.size());
  const Eigen::Index need = h.dim - eq_rank;

  const Eigen::Index m = static_cast<Eigen::Index>(h.inequalities.size());
  if (need > m) return out;

  std::vector<RatVector> found;
  std::vector<Eigen::Index> subset(need);
  std::function<void(Eigen::Index, Eigen::Index)> rec = [&](Eigen::Index start, Eigen::Index k) {
    if (k == need) {
      RatMatrix sys(eq_rank + need, h.dim);
      RatVector rhs(eq_rank + need);
      for (Eigen::Index r = 0; r < eq_rank; ++r) {
        sys.row(r) = eq_red.block(r, 0, 1, h.dim);
        rhs(r) = eq_red(r, h.dim);
      }
      for (Eigen::Index k2 = 0; k2 < need; ++k2) {
        sys.row(eq_rank + k2) = h.inequalities[subset[k2]].normal.transpose();
        rhs(eq_rank + k2) = h.inequalities[subset[k2]].height;
      }
      auto x = solve_exact(sys, rhs);
      if (x && satisfies(h, *x)) found.push_back(std::move(*x));
      return;
    }
    for (Eigen::Index i = start; i <= m - (need - k); ++i) {
      subset[k] = i;
      rec(i + 1, k + 1);
    }
  };
  rec(0, 0);

  out.vertices = dedupe_sorted(std::move(found));

  if (!out.vertices.empty()) {
    // reject unbounded input: max/min of each coordinate must be finite
    for (Eigen::Index c = 0; c < h.dim; ++c) {
      RatVector dir = RatVector::Zero(h.dim);
      dir(c) = 1;
      bool bounded = true;
      support_over_hpolytope(h, dir, &bounded);
      if (bounded) support_over_hpolytope(h, -dir, &bounded);
      if (!bounded) throw std::runtime_error("unbounded polyhedron");
    }
  } else {
    if (hpolytope_feasible(h)) throw std::runtime_error("unbounded polyhedron");
  }
  return out;
}

FacetResult enumerate_facets(const VPolytope& v, int cap) {
  if (v.vertices.empty()) throw InputError("facet enumeration needs a nonempty vertex set");
  const Eigen::Index n = v.dim;
  const RatVector& anchor = v.vertices.front();

  RatMatrix diffs(static_cast<Eigen::Index>(v.vertices.size()) - 1, n);
  for (size_t i = 1; i < v.vertices.size(); ++i)
    diffs.row(static_cast<Eigen::Index>(i - 1)) = (v.vertices[i] - anchor).transpose();

  FacetResult out;
  out.hull.anchor = anchor;
  out.hrep.dim = n;

  RatMatrix span = diffs;
  std::vector<Eigen::Index> pivots = rref(span);
  const Eigen::Index d = static_cast<Eigen::Index>(pivots.size());
  if (d > cap) throw GeometryCapError("affine dimension above cap");

  RatMatrix diff_rows = diffs;
  if (diff_rows.rows() == 0) diff_rows = RatMatrix::Zero(1, n);
  out.hull.basis = nullspace(std::move(diff_rows));
  for (auto& b : out.hull.basis) b = primitive_vector(b);
  for (const auto& b : out.hull.basis)
    out.hrep.equalities.push_back({b, b.dot(anchor)});

  if (d == 0) return out;  // a single point: no facets

  // pick d affinely independent difference vectors as a projection basis
  std::vector<Eigen::Index> chosen;
  {
    RatMatrix acc(0, n);
    for (Eigen::Index r = 0; r < diffs.rows() && static_cast<Eigen::Index>(chosen.size()) < d; ++r) {
      RatMatrix trial(acc.rows() + 1, n);
      trial.topRows(acc.rows()) = acc;
      trial.row(acc.rows()) = diffs.row(r);
      RatMatrix probe = trial;
      if (static_cast<Eigen::Index>(rref(probe).size()) == trial.rows()) {
        acc = trial;
        chosen.push_back(r);
      }
    }
  }
  RatMatrix s_cols(n, d);  // columns span the affine hull directions
  for (Eigen::Index k = 0; k < d; ++k) s_cols.col(k) = diffs.row(chosen[k]).transpose();

  // row selection making S restricted to those rows invertible
  std::vector<Eigen::Index> rows;
  {
    RatMatrix acc(0, d);
    for (Eigen::Index r = 0; r < n && static_cast<Eigen::Index>(rows.size()) < d; ++r) {
      RatMatrix trial(acc.rows() + 1, d);
      trial.topRows(acc.rows()) = acc;
      trial.row(acc.rows()) = s_cols.row(r);
      RatMatrix probe2 = trial;
      if (static_cast<Eigen::Index>(rref(probe2).size()) == trial.rows()) {
        acc = trial;
        rows.push_back(r);
      }
    }
  }
  RatMatrix s_sub(d, d);
  for (Eigen::Index k = 0; k < d; ++k) s_sub.row(k) = s_cols.row(rows[k]);
  // L = s_sub^{-1} applied to the selected rows of (x - anchor)
  RatMatrix s_sub_inv(d, d);
  {
    RatMatrix aug(d, 2 * d);
    aug.leftCols(d) = s_sub;
    aug.rightCols(d) = RatMatrix::Identity(d, d);
    rref(aug);
    s_sub_inv = aug.rightCols(d);
  }
  auto project = [&](const RatVector& x) {
    RatVector sel(d);
    for (Eigen::Index k = 0; k < d; ++k) sel(k) = x(rows[k]) - anchor(rows[k]);
    return RatVector(s_sub_inv * sel);
  };

  std::vector<RatVector> proj;
  proj.reserve(v.vertices.size());
  for (const auto& vert : v.vertices) proj.push_back(project(vert));

  // centroid is interior of the full-dimensional projected polytope
  RatVector centroid = RatVector::Zero(d);
  for (const auto& p : proj) centroid += p;
  centroid /= Rat(static_cast<long>(proj.size()));

  // polar dual: vertices of { y : y.(p - c) <= 1 } are primal facets
  HPolytope dual;
  dual.dim = d;
  for (const auto& p : proj) dual.inequalities.push_back({p - centroid, Rat(1)});
  VPolytope dual_vertices = enumerate_vertices(dual, cap);

  std::set<RatVector, VecLess> seen;
  for (const auto& y : dual_vertices.vertices) {
    // projected facet: y.(x_proj) <= y.c + 1; lift through the projection map
    RatVector ambient = RatVector::Zero(n);
    RatVector coeff = s_sub_inv.transpose() * y;
    for (Eigen::Index k = 0; k < d; ++k) ambient(rows[k]) = coeff(k);
    Rat height = y.dot(centroid) + 1 + ambient.dot(anchor);
    Rat scale = primitive_scale(ambient);
    RatVector normal = ambient * scale;
    height *= scale;
    RatVector key(n + 1);
    key.head(n) = normal;
    key(n) = height;
    if (seen.insert(key).second) out.hrep.inequalities.push_back({std::move(normal), height});
  }
  std::sort(out.hrep.inequalities.begin(), out.hrep.inequalities.end(),
            [](const HPolytope::Row& a, const HPolytope::Row& b) {
              if (a.normal != b.normal) return lex_less(a.normal, b.normal);
              return a.height < b.height;
            });
  return out;
}

bool contains(const HPolytope& h, const AffineHullBasis& hull, const RatVector& point) {
  if (point.size() != h.dim) throw InputError("dimension mismatch in containment test");
  for (const auto& b : hull.basis)
    if (b.dot(point - hull.anchor) != 0) return false;
  return satisfies(h, point);
}

VPolytope weighted_minkowski(const DecisionProblem& problem, const Distribution& marginal,
                             int cap) {
  if (marginal.domain != problem.actions) throw InputError("marginal/action mismatch");
  std::vector<RatVector> acc;
  acc.push_back(RatVector::Zero(problem.num_states() - 1));
  for (Eigen::Index a = 0; a < problem.num_actions(); ++a) {
    if (marginal[a] == 0) continue;
    VPolytope va = enumerate_vertices(optimal_belief_set(problem, a), cap);
    if (va.vertices.empty())
      throw InputError("dominated action in marginal support: " + problem.actions[a]);
    std::vector<RatVector> next;
    next.reserve(acc.size() * va.vertices.size());
    for (const auto& base : acc)
      for (const auto& vert : va.vertices) next.push_back(base + marginal[a] * vert);
    acc = dedupe_sorted(std::move(next));
  }

  // keep extreme points only
  VPolytope out;
  out.dim = problem.num_states() - 1;
  for (size_t i = 0; i < acc.size(); ++i) {
    std::vector<const RatVector*> others;
    others.reserve(acc.size() - 1);
    for (size_t k = 0; k < acc.size(); ++k)
      if (k != i) others.push_back(&acc[k]);
    if (!in_convex_hull(acc[i], others)) out.vertices.push_back(acc[i]);
  }
  return out;
}

std::vector<RatVector> refinement_rays(const DecisionProblem& problem,
                                       const Distribution& marginal, int cap) {
  FacetResult fr = enumerate_facets(weighted_minkowski(problem, marginal, cap), cap);
  std::vector<RatVector> rays;
  rays.reserve(fr.hrep.inequalities.size());
  for (const auto& row : fr.hrep.inequalities) rays.push_back(primitive_vector(row.normal));
  std::sort(rays.begin(), rays.end(), lex_less);
  rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
  return rays;
}

}  // namespace bce
