// Shared golden instances and random-instance generators for the test suites.
// Expected values here are derived independently of the library code paths
// they check: worked examples by hand, or brute-force/LP constructions.
#pragma once

#include "bce/classify.hpp"
#include "bce/extensions.hpp"
#include "bce/geometry.hpp"
#include "bce/problem.hpp"
#include "bce/rational.hpp"
#include "bce/simplex.hpp"

#include <numeric>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

using namespace bce;

// 3x3 matching: u(a_j, w_i) = 1[i == j]
inline DecisionProblem match3() {
  RatMatrix u = RatMatrix::Zero(3, 3);
  for (int k = 0; k < 3; ++k) u(k, k) = 1;
  return DecisionProblem::create({"w1", "w2", "w3"}, {"a1", "a2", "a3"}, std::move(u));
}

// four states, two actions, u(a1,.) = 0, u(a2,.) = (-9,-5,-1,5)
inline DecisionProblem fourstate() {
  RatMatrix u = RatMatrix::Zero(2, 4);
  u(1, 0) = -9; u(1, 1) = -5; u(1, 2) = -1; u(1, 3) = 5;
  return DecisionProblem::create({"w1", "w2", "w3", "w4"}, {"a1", "a2"}, std::move(u));
}

// absolute loss on three states/actions: u(a_j, w_k) = -|k - j|
inline DecisionProblem abs3() {
  RatMatrix u(3, 3);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) u(j, k) = -(k > j ? k - j : j - k);
  return DecisionProblem::create({"w1", "w2", "w3"}, {"a1", "a2", "a3"}, std::move(u));
}

// 2x2 matching
inline DecisionProblem coin() {
  RatMatrix u = RatMatrix::Zero(2, 2);
  u(0, 0) = 1; u(1, 1) = 1;
  return DecisionProblem::create({"w1", "w2"}, {"a1", "a2"}, std::move(u));
}

// states {-1, 1}, u(a1,.) = 0, u(a2, w) = w + theta
inline DecisionProblem shift(const Rat& theta) {
  RatMatrix u = RatMatrix::Zero(2, 2);
  u(1, 0) = theta - 1;
  u(1, 1) = theta + 1;
  return DecisionProblem::create({"lo", "hi"}, {"a1", "a2"}, std::move(u));
}

inline Rat rand_rat(std::mt19937_64& rng, int lo, int hi, int max_den) {
  std::uniform_int_distribution<int> num(lo, hi);
  std::uniform_int_distribution<int> den(1, max_den);
  return Rat(num(rng), den(rng));
}

inline Distribution rand_distribution(std::mt19937_64& rng, std::vector<std::string> domain) {
  const auto n = domain.size();
  std::uniform_int_distribution<int> mass(0, 10);
  std::vector<long> raw(n, 0);
  long total = 0;
  while (total == 0) {
    total = 0;
    for (size_t i = 0; i < n; ++i) {
      raw[i] = mass(rng);
      total += raw[i];
    }
  }
  RatVector w(static_cast<Eigen::Index>(n));
  for (size_t i = 0; i < n; ++i) w(static_cast<Eigen::Index>(i)) = Rat(raw[i], total);
  return Distribution::create(std::move(domain), std::move(w));
}

inline RatVector rand_belief(std::mt19937_64& rng, Eigen::Index n) {
  std::uniform_int_distribution<int> mass(0, 12);
  std::vector<long> raw(n, 0);
  long total = 0;
  while (total == 0) {
    total = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      raw[i] = mass(rng);
      total += raw[i];
    }
  }
  RatVector w(n);
  for (Eigen::Index i = 0; i < n; ++i) w(i) = Rat(raw[i], total);
  return w;
}

inline std::vector<std::string> state_labels(int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back("w" + std::to_string(i));
  return out;
}

inline std::vector<std::string> action_labels(int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back("a" + std::to_string(i));
  return out;
}

inline DecisionProblem rand_problem(std::mt19937_64& rng, int num_states, int num_actions) {
  RatMatrix u(num_actions, num_states);
  for (int j = 0; j < num_actions; ++j)
    for (int i = 0; i < num_states; ++i) u(j, i) = rand_rat(rng, -6, 6, 3);
  return DecisionProblem::create(state_labels(num_states), action_labels(num_actions),
                                 std::move(u));
}

// Affine utility differences with concavity built in: gamma_j > 0 and kappa
// gaps large enough that adjacent differences decrease pointwise and their
// breakpoints stay distinct. States are shuffled afterwards.
inline DecisionProblem rand_aud_problem(std::mt19937_64& rng, int num_states, int num_actions) {
  const int I = num_states, J = num_actions;
  RatVector d(I);
  for (int i = 0; i < I; ++i) d(i) = rand_rat(rng, -8, 8, 2);
  Rat dmax = d(0), dmin = d(0);
  for (int i = 1; i < I; ++i) {
    dmax = std::max(dmax, d(i));
    dmin = std::min(dmin, d(i));
  }

  RatVector gamma(J - 1), kappa(J - 1);
  Rat prev_kappa = Rat(rng() % 7) - 3;
  Rat prev_gamma = 0;
  for (int j = 0; j < J - 1; ++j) {
    gamma(j) = Rat(1 + static_cast<long>(rng() % 4), 1 + static_cast<long>(rng() % 2));
    if (j == 0) {
      kappa(j) = prev_kappa;
    } else {
      // force gamma_j d + kappa_j <= gamma_{j-1} d + kappa_{j-1} everywhere,
      // with a strict margin so breakpoints differ
      Rat gap = (gamma(j) - prev_gamma) * ((gamma(j) >= prev_gamma) ? dmax : dmin);
      kappa(j) = prev_kappa - gap - Rat(1 + static_cast<long>(rng() % 3), 2);
    }
    prev_kappa = kappa(j);
    prev_gamma = gamma(j);
  }

  RatMatrix u(J, I);
  for (int i = 0; i < I; ++i) u(0, i) = rand_rat(rng, -3, 3, 2);
  for (int j = 1; j < J; ++j)
    for (int i = 0; i < I; ++i) u(j, i) = u(j - 1, i) + gamma(j - 1) * d(i) + kappa(j - 1);

  std::vector<int> perm(I);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  RatMatrix shuffled(J, I);
  for (int i = 0; i < I; ++i) shuffled.col(i) = u.col(perm[i]);
  return DecisionProblem::create(state_labels(I), action_labels(J), std::move(shuffled));
}

// Two-step differences: d_low decreasing below zero, d_high decreasing above,
// nested low sets; states shuffled afterwards.
inline DecisionProblem rand_two_step_problem(std::mt19937_64& rng, int num_states,
                                             int num_actions) {
  const int I = num_states, J = num_actions;
  std::vector<Rat> dlo(J - 1), dhi(J - 1);
  Rat lo = Rat(-1, 1 + static_cast<long>(rng() % 2));
  Rat hi = Rat(1 + static_cast<long>(rng() % 3));
  for (int j = 0; j < J - 1; ++j) {
    dlo[j] = lo;
    dhi[j] = hi;
    lo -= Rat(static_cast<long>(rng() % 3), 2);
    hi -= Rat(static_cast<long>(rng() % 2), 3);
    if (hi <= 0) hi = Rat(1, 4);
  }
  // thresholds nondecreasing in 1..I-1
  std::vector<int> istar(J - 1);
  int cur = 1 + static_cast<int>(rng() % (I - 1));
  for (int j = 0; j < J - 1; ++j) {
    istar[j] = cur;
    cur = std::min(I - 1, cur + static_cast<int>(rng() % 2));
  }

  RatMatrix u(J, I);
  for (int i = 0; i < I; ++i) u(0, i) = rand_rat(rng, -2, 2, 2);
  for (int j = 1; j < J; ++j)
    for (int i = 0; i < I; ++i)
      u(j, i) = u(j - 1, i) + (i < istar[j - 1] ? dlo[j - 1] : dhi[j - 1]);

  std::vector<int> perm(I);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  RatMatrix shuffled(J, I);
  for (int i = 0; i < I; ++i) shuffled.col(i) = u.col(perm[i]);
  return DecisionProblem::create(state_labels(I), action_labels(J), std::move(shuffled));
}

// Consistent pair built straight from the Minkowski representation: random
// marginal over non-dominated actions, one belief inside each optimal set
// (random vertex mixture), prior = weighted average.
inline std::pair<Distribution, Distribution> rand_consistent_pair(std::mt19937_64& rng,
                                                                  const DecisionProblem& problem) {
  const Eigen::Index J = problem.num_actions();
  const Eigen::Index I = problem.num_states();
  std::vector<Eigen::Index> alive;
  std::vector<VPolytope> verts(J);
  for (Eigen::Index a = 0; a < J; ++a) {
    verts[a] = enumerate_vertices(optimal_belief_set(problem, a), 8);
    if (!verts[a].vertices.empty()) alive.push_back(a);
  }
  RatVector nu = RatVector::Zero(J);
  long total = 0;
  std::vector<long> raw(alive.size());
  while (total == 0) {
    total = 0;
    for (size_t k = 0; k < alive.size(); ++k) {
      raw[k] = static_cast<long>(rng() % 7);
      total += raw[k];
    }
  }
  for (size_t k = 0; k < alive.size(); ++k) nu(alive[k]) = Rat(raw[k], total);

  RatVector mu = RatVector::Zero(I);
  for (size_t k = 0; k < alive.size(); ++k) {
    if (nu(alive[k]) == 0) continue;
    const auto& vs = verts[alive[k]].vertices;
    RatVector mix = RatVector::Zero(I - 1);
    long wtotal = 0;
    std::vector<long> wraw(vs.size());
    while (wtotal == 0) {
      wtotal = 0;
      for (size_t v = 0; v < vs.size(); ++v) {
        wraw[v] = static_cast<long>(rng() % 5);
        wtotal += wraw[v];
      }
    }
    for (size_t v = 0; v < vs.size(); ++v) mix += Rat(wraw[v], wtotal) * vs[v];
    mu += nu(alive[k]) * from_free_coordinates(mix);
  }
  return {Distribution::create(problem.states, std::move(mu)),
          Distribution::create(problem.actions, std::move(nu))};
}

// Elementary mean-preserving spread in d-space: take mass off an interior
// atom of the prior pushforward and split it between a lower and a higher
// d-value, keeping the mean fixed. Returns nullopt when the prior has no
// interior atom to spread.
inline std::optional<Distribution> make_d_spread(const DecisionProblem& problem,
                                                 const AudCertificate& cert,
                                                 const Distribution& prior,
                                                 std::mt19937_64& rng) {
  const auto& order = cert.state_order;
  RatVector w = prior.weights;
  Eigen::Index lo = -1, mid = -1, hi = -1;
  for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(order.size()); ++k) {
    Eigen::Index s = order[k];
    if (mid >= 0 && cert.d(s) > cert.d(mid)) { hi = s; break; }
    if (lo >= 0 && w(s) > 0 && cert.d(s) > cert.d(lo) && mid < 0) mid = s;
    if (lo < 0) lo = s;
  }
  if (mid < 0 || hi < 0) return std::nullopt;
  Rat eps = w(mid) / Rat(2 + static_cast<long>(rng() % 3));
  Rat gap_lo = cert.d(mid) - cert.d(lo);
  Rat gap_hi = cert.d(hi) - cert.d(mid);
  w(mid) -= eps;
  w(lo) += eps * gap_hi / (gap_lo + gap_hi);
  w(hi) += eps * gap_lo / (gap_lo + gap_hi);
  return Distribution::create(problem.states, std::move(w));
}

// Independent oracle for ring games: one LP over the flattened joint
// pi(a_1..a_N, w) with every player's obedience rows, the prior marginal, and
// all per-player action marginals.
inline bool flat_ring_consistent(const RingGame& game, const Distribution& prior,
                                 const std::vector<Distribution>& marginals) {
  const Eigen::Index I = static_cast<Eigen::Index>(game.states.size());
  const size_t N = game.players.size();
  std::vector<Eigen::Index> sizes;
  for (const auto& pl : game.players) sizes.push_back(static_cast<Eigen::Index>(pl.actions.size()));
  Eigen::Index total = I;
  for (Eigen::Index s : sizes) total *= s;

  auto flat = [&](const std::vector<Eigen::Index>& profile, Eigen::Index w) {
    Eigen::Index idx = 0;
    for (size_t n = 0; n < N; ++n) idx = idx * sizes[n] + profile[n];
    return idx * I + w;
  };
  auto payoff = [&](size_t n, const std::vector<Eigen::Index>& profile, Eigen::Index own,
                    Eigen::Index w) {
    if (n == 0) return game.players[0].payoff(own, w);
    return game.players[n].payoff(own, profile[n - 1]);
  };

  std::vector<std::vector<Eigen::Index>> profiles{{}};
  for (size_t n = 0; n < N; ++n) {
    std::vector<std::vector<Eigen::Index>> next;
    for (const auto& prefix : profiles)
      for (Eigen::Index a = 0; a < sizes[n]; ++a) {
        auto ext = prefix;
        ext.push_back(a);
        next.push_back(std::move(ext));
      }
    profiles = std::move(next);
  }

  lp::Problem p;
  p.num_vars = total;
  for (size_t n = 0; n < N; ++n) {
    for (Eigen::Index rec = 0; rec < sizes[n]; ++rec) {
      for (Eigen::Index dev = 0; dev < sizes[n]; ++dev) {
        if (dev == rec) continue;
        RatVector row = RatVector::Zero(total);
        for (const auto& profile : profiles) {
          if (profile[n] != rec) continue;
          for (Eigen::Index w = 0; w < I; ++w)
            row(flat(profile, w)) += payoff(n, profile, rec, w) - payoff(n, profile, dev, w);
        }
        p.add_row(std::move(row), lp::Relation::GreaterEq, Rat(0));
      }
    }
  }
  for (Eigen::Index w = 0; w < I; ++w) {
    RatVector row = RatVector::Zero(total);
    for (const auto& profile : profiles) row(flat(profile, w)) = 1;
    p.add_row(std::move(row), lp::Relation::Equal, prior[w]);
  }
  for (size_t n = 0; n < N; ++n) {
    for (Eigen::Index a = 0; a < sizes[n]; ++a) {
      RatVector row = RatVector::Zero(total);
      for (const auto& profile : profiles) {
        if (profile[n] != a) continue;
        for (Eigen::Index w = 0; w < I; ++w) row(flat(profile, w)) = 1;
      }
      p.add_row(std::move(row), lp::Relation::Equal, marginals[n][a]);
    }
  }
  return lp::solve(p).status == lp::Status::Optimal;
}

inline RingGame rand_ring_game(std::mt19937_64& rng, int players, int max_states,
                               int max_actions) {
  RingGame game;
  game.states = state_labels(2 + static_cast<int>(rng() % (max_states - 1)));
  Eigen::Index prev = static_cast<Eigen::Index>(game.states.size());
  for (int n = 0; n < players; ++n) {
    const int own = 2 + static_cast<int>(rng() % (max_actions - 1));
    RatMatrix payoff(own, prev);
    for (int r = 0; r < own; ++r)
      for (Eigen::Index c = 0; c < prev; ++c) payoff(r, c) = rand_rat(rng, -4, 4, 2);
    std::vector<std::string> labels;
    for (int r = 0; r < own; ++r)
      labels.push_back("p" + std::to_string(n) + "a" + std::to_string(r));
    game.players.push_back({labels, std::move(payoff)});
    prev = own;
  }
  return game;
}

}  // namespace oracle
