#include "bce/simplex.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace bce::lp {

void Problem::add_row(RatVector coeffs, Relation rel, Rat rhs) {
  if (coeffs.size() != num_vars) throw std::invalid_argument("constraint width mismatch");
  rows.push_back(Constraint{std::move(coeffs), rel, std::move(rhs)});
}

namespace {

// Dense tableau over exact rationals. Columns: structural vars, then one
// slack/surplus per inequality row, then one artificial per row that needs
// one. The last tableau row carries the reduced costs z_j - c_j and is
// updated by every pivot. Dantzig pricing with a permanent switch to Bland's
// rule once the objective stalls, so termination is guaranteed.
class Tableau {
 public:
  Tableau(const Problem& problem)
      : n_(problem.num_vars), m_(static_cast<Eigen::Index>(problem.rows.size())) {
    flipped_.assign(m_, false);
    rels_.resize(m_);
    a_ = RatMatrix::Zero(m_, n_);
    b_ = RatVector::Zero(m_);
    for (Eigen::Index r = 0; r < m_; ++r) {
      const Constraint& row = problem.rows[r];
      a_.row(r) = row.coeffs.transpose();
      b_(r) = row.rhs;
      rels_[r] = row.rel;
      if (b_(r) < 0) {  // normalize to b >= 0
        a_.row(r) = -a_.row(r);
        b_(r) = -b_(r);
        flipped_[r] = true;
        if (rels_[r] == Relation::LessEq)
          rels_[r] = Relation::GreaterEq;
        else if (rels_[r] == Relation::GreaterEq)
          rels_[r] = Relation::LessEq;
      }
    }

    slack_col_.assign(m_, -1);
    art_col_.assign(m_, -1);
    Eigen::Index extra = 0;
    for (Eigen::Index r = 0; r < m_; ++r)
      if (rels_[r] != Relation::Equal) ++extra;
    Eigen::Index art_count = 0;
    for (Eigen::Index r = 0; r < m_; ++r)
      if (rels_[r] != Relation::LessEq) ++art_count;

    cols_ = n_ + extra + art_count;
    t_ = RatMatrix::Zero(m_ + 1, cols_ + 1);
    t_.block(0, 0, m_, n_) = a_;
    t_.col(cols_).head(m_) = b_;

    Eigen::Index next = n_;
    for (Eigen::Index r = 0; r < m_; ++r) {
      if (rels_[r] == Relation::LessEq) {
        slack_col_[r] = next;
        t_(r, next++) = 1;
      } else if (rels_[r] == Relation::GreaterEq) {
        slack_col_[r] = next;
        t_(r, next++) = -1;
      }
    }
    first_art_ = next;
    basis_.assign(m_, -1);
    for (Eigen::Index r = 0; r < m_; ++r) {
      if (rels_[r] == Relation::LessEq) {
        basis_[r] = slack_col_[r];
      } else {
        art_col_[r] = next;
        t_(r, next) = 1;
        basis_[r] = next;
        ++next;
      }
    }
    assert(next == cols_);
  }

  // Phase 1: maximize -sum(artificials). Returns the optimal value (0 iff feasible).
  Rat run_phase1() {
    RatVector cost = RatVector::Zero(cols_);
    for (Eigen::Index r = 0; r < m_; ++r)
      if (art_col_[r] >= 0) cost(art_col_[r]) = -1;
    load_cost(cost);
    run(/*forbid_artificials=*/false);
    phase1_cost_ = cost;
    Rat value = 0;
    for (Eigen::Index r = 0; r < m_; ++r)
      if (basis_[r] >= first_art_) value -= t_(r, cols_);
    return value;
  }

  // Phase 2 on the original objective; artificial columns stay but may not re-enter.
  void run_phase2(const RatVector& objective) {
    drive_out_artificials();
    RatVector cost = RatVector::Zero(cols_);
    if (objective.size() > 0) cost.head(n_) = objective;
    phase2_cost_ = cost;
    load_cost(cost);
    unbounded_ = false;
    run(/*forbid_artificials=*/true);
  }

  bool unbounded() const { return unbounded_; }

  RatVector primal() const {
    RatVector x = RatVector::Zero(n_);
    for (Eigen::Index r = 0; r < m_; ++r)
      if (basis_[r] < n_) x(basis_[r]) = t_(r, cols_);
    return x;
  }

  // Row multipliers y solving B^T y = c_B against the *normalized* rows,
  // mapped back to the caller's row orientation.
  RatVector duals(const RatVector& cost) const {
    RatMatrix bt(m_, m_);
    RatVector cb(m_);
    for (Eigen::Index r = 0; r < m_; ++r) {
      for (Eigen::Index k = 0; k < m_; ++k) bt(k, r) = original_entry(r, basis_[k]);
      cb(r) = cost(basis_[r]);
    }
    RatVector y = solve_square(bt, cb);
    for (Eigen::Index r = 0; r < m_; ++r)
      if (flipped_[r]) y(r) = -y(r);
    return y;
  }

  const RatVector& phase1_cost() const { return phase1_cost_; }
  const RatVector& phase2_cost() const { return phase2_cost_; }

 private:
  Rat original_entry(Eigen::Index row, Eigen::Index col) const {
    if (col < n_) return a_(row, col);
    if (col == slack_col_[row]) return rels_[row] == Relation::LessEq ? Rat(1) : Rat(-1);
    if (col == art_col_[row]) return Rat(1);
    // slack/artificial of some other row
    return Rat(0);
  }

  static RatVector solve_square(RatMatrix m, RatVector rhs) {
    const Eigen::Index n = m.rows();
    for (Eigen::Index col = 0; col < n; ++col) {
      Eigen::Index pivot = -1;
      for (Eigen::Index r = col; r < n; ++r)
        if (m(r, col) != 0) { pivot = r; break; }
      if (pivot < 0) throw std::runtime_error("singular basis matrix");
      m.row(col).swap(m.row(pivot));
      std::swap(rhs(col), rhs(pivot));
      const Rat inv = Rat(1) / m(col, col);
      for (Eigen::Index r = 0; r < n; ++r) {
        if (r == col || m(r, col) == 0) continue;
        const Rat f = m(r, col) * inv;
        for (Eigen::Index c = col; c < n; ++c) m(r, c) -= f * m(col, c);
        rhs(r) -= f * rhs(col);
      }
    }
    RatVector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = rhs(i) / m(i, i);
    return x;
  }

  void pivot(Eigen::Index row, Eigen::Index col) {
    const Rat inv = Rat(1) / t_(row, col);
    if (inv != 1) {
      for (Eigen::Index c = 0; c <= cols_; ++c)
        if (t_(row, c) != 0) t_(row, c) *= inv;
    }
    for (Eigen::Index r = 0; r <= m_; ++r) {  // includes the reduced-cost row
      if (r == row || t_(r, col) == 0) continue;
      const Rat f = t_(r, col);
      for (Eigen::Index c = 0; c <= cols_; ++c)
        if (t_(row, c) != 0) t_(r, c) -= f * t_(row, c);
    }
    basis_[row] = col;
  }

  // Rebuilds the reduced-cost row z_j - c_j for a new cost vector.
  void load_cost(const RatVector& cost) {
    for (Eigen::Index c = 0; c < cols_; ++c) t_(m_, c) = -cost(c);
    t_(m_, cols_) = 0;
    for (Eigen::Index r = 0; r < m_; ++r) {
      const Rat cb = cost(basis_[r]);
      if (cb == 0) continue;
      for (Eigen::Index c = 0; c <= cols_; ++c)
        if (t_(r, c) != 0) t_(m_, c) += cb * t_(r, c);
    }
  }

  void run(bool forbid_artificials) {
    int stalls = 0;
    bool bland = false;
    Rat last_obj = t_(m_, cols_);
    const int stall_limit = static_cast<int>(2 * (m_ + cols_)) + 10;
    while (true) {
      Eigen::Index entering = -1;
      if (bland) {
        for (Eigen::Index c = 0; c < cols_; ++c) {
          if (forbid_artificials && c >= first_art_) break;
          if (t_(m_, c) < 0) { entering = c; break; }
        }
      } else {
        Rat best = 0;
        for (Eigen::Index c = 0; c < cols_; ++c) {
          if (forbid_artificials && c >= first_art_) break;
          if (t_(m_, c) < best) { best = t_(m_, c); entering = c; }
        }
      }
      if (entering < 0) return;  // optimal

      Eigen::Index leaving = -1;
      Rat best_ratio = 0;
      for (Eigen::Index r = 0; r < m_; ++r) {
        if (t_(r, entering) <= 0) continue;
        Rat ratio = t_(r, cols_) / t_(r, entering);
        if (leaving < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[r] < basis_[leaving])) {
          leaving = r;
          best_ratio = ratio;
        }
      }
      if (leaving < 0) {
        unbounded_ = true;
        return;
      }
      pivot(leaving, entering);
      if (t_(m_, cols_) == last_obj) {
        if (++stalls > stall_limit) bland = true;
      } else {
        stalls = 0;
        last_obj = t_(m_, cols_);
      }
    }
  }

  // After a feasible phase 1, pivot basic artificials out on any nonzero
  // structural/slack column; rows with no such column are redundant and keep
  // their (zero-valued) artificial.
  void drive_out_artificials() {
    for (Eigen::Index r = 0; r < m_; ++r) {
      if (basis_[r] < first_art_) continue;
      Eigen::Index col = -1;
      for (Eigen::Index c = 0; c < first_art_; ++c)
        if (t_(r, c) != 0) { col = c; break; }
      if (col >= 0) pivot(r, col);
    }
  }

  Eigen::Index n_, m_, cols_ = 0, first_art_ = 0;
  RatMatrix a_;
  RatVector b_;
  RatMatrix t_;
  std::vector<Relation> rels_;
  std::vector<bool> flipped_;
  std::vector<Eigen::Index> slack_col_, art_col_;
  std::vector<Eigen::Index> basis_;
  RatVector phase1_cost_, phase2_cost_;
  bool unbounded_ = false;
};

}  // namespace

Solution solve(const Problem& problem) {
  if (problem.objective.size() != 0 && problem.objective.size() != problem.num_vars)
    throw std::invalid_argument("objective width mismatch");

  Solution out;
  Tableau tab(problem);
  Rat phase1 = tab.run_phase1();
  if (phase1 < 0) {
    out.status = Status::Infeasible;
    // phase-1 duals y satisfy y^T A >= 0 columnwise and y.b = phase1 < 0;
    // negate to the advertised Farkas orientation.
    out.farkas = -tab.duals(tab.phase1_cost());
    return out;
  }

  tab.run_phase2(problem.objective);
  if (tab.unbounded()) {
    out.status = Status::Unbounded;
    return out;
  }
  out.status = Status::Optimal;
  out.x = tab.primal();
  out.objective = 0;
  if (problem.objective.size() > 0) out.objective = problem.objective.dot(out.x);
  out.duals = tab.duals(tab.phase2_cost());
  return out;
}

}  // namespace bce::lp
