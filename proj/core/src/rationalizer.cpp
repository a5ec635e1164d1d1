#include "bce/rationalizer.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>

namespace bce {

namespace {

// Max-flow on the bipartite network with a deterministic shortest-augmenting
// path search; edge order follows posterior then action input order.
class GaleFlow {
 public:
  GaleFlow(const FlowNetwork& net)
      : m_(static_cast<Eigen::Index>(net.supply.size())),
        j_(static_cast<Eigen::Index>(net.demand.size())),
        net_(net) {
    flow_.assign(m_, std::map<Eigen::Index, Rat>());
    source_residual_ = net.supply;
    sink_residual_ = net.demand;
  }

  Rat run() {
    Rat total = 0;
    while (true) {
      // BFS over residual: source -> posterior -> action -> sink
      std::vector<Eigen::Index> prev_action(m_, -2);   // how we reached posterior (>=0: via action back-edge, -1: from source)
      std::vector<Eigen::Index> prev_posterior(j_, -1);
      std::deque<std::pair<bool, Eigen::Index>> queue;  // (is_posterior, index)
      for (Eigen::Index s = 0; s < m_; ++s) {
        if (source_residual_[s] > 0) {
          prev_action[s] = -1;
          queue.emplace_back(true, s);
        }
      }
      Eigen::Index reached_action = -1;
      while (!queue.empty() && reached_action < 0) {
        auto [is_posterior, idx] = queue.front();
        queue.pop_front();
        if (is_posterior) {
          for (Eigen::Index a : net_.edges[idx]) {
            if (prev_posterior[a] >= 0) continue;
            prev_posterior[a] = idx;
            if (sink_residual_[a] > 0) { reached_action = a; break; }
            queue.emplace_back(false, a);
          }
        } else {
          // residual back-edges: posteriors that sent flow to this action
          for (Eigen::Index s = 0; s < m_; ++s) {
            if (prev_action[s] != -2) continue;
            auto it = flow_[s].find(idx);
            if (it == flow_[s].end() || it->second == 0) continue;
            prev_action[s] = idx;
            queue.emplace_back(true, s);
          }
        }
      }
      if (reached_action < 0) return total;

      // bottleneck along the alternating path
      Rat push = sink_residual_[reached_action];
      {
        Eigen::Index a = reached_action;
        while (true) {
          Eigen::Index s = prev_posterior[a];
          if (prev_action[s] == -1) {
            push = std::min(push, source_residual_[s]);
            break;
          }
          Eigen::Index back = prev_action[s];
          push = std::min(push, flow_[s][back]);
          a = back;
        }
      }
      // apply
      {
        Eigen::Index a = reached_action;
        sink_residual_[a] -= push;
        while (true) {
          Eigen::Index s = prev_posterior[a];
          flow_[s][a] += push;
          if (prev_action[s] == -1) {
            source_residual_[s] -= push;
            break;
          }
          Eigen::Index back = prev_action[s];
          flow_[s][back] -= push;
          a = back;
        }
        total += push;
      }
    }
  }

  // Posteriors/actions reachable from unsaturated sources in the residual graph.
  std::pair<std::vector<bool>, std::vector<bool>> reachable() const {
    std::vector<bool> post(m_, false), act(j_, false);
    std::deque<std::pair<bool, Eigen::Index>> queue;
    for (Eigen::Index s = 0; s < m_; ++s)
      if (source_residual_[s] > 0) { post[s] = true; queue.emplace_back(true, s); }
    while (!queue.empty()) {
      auto [is_posterior, idx] = queue.front();
      queue.pop_front();
      if (is_posterior) {
        for (Eigen::Index a : net_.edges[idx])
          if (!act[a]) { act[a] = true; queue.emplace_back(false, a); }
      } else {
        for (Eigen::Index s = 0; s < m_; ++s) {
          if (post[s]) continue;
          auto it = flow_[s].find(idx);
          if (it != flow_[s].end() && it->second > 0) { post[s] = true; queue.emplace_back(true, s); }
        }
      }
    }
    return {post, act};
  }

  Rat flow_on(Eigen::Index posterior, Eigen::Index action) const {
    auto it = flow_[posterior].find(action);
    return it == flow_[posterior].end() ? Rat(0) : it->second;
  }

 private:
  Eigen::Index m_, j_;
  const FlowNetwork& net_;
  std::vector<std::map<Eigen::Index, Rat>> flow_;
  std::vector<Rat> source_residual_, sink_residual_;
};

Rat menu_worth(const MenuMeasure& menu, std::uint32_t coalition) {
  Rat worth = 0;
  for (const auto& [mask, m] : menu.mass)
    if ((mask & ~coalition) == 0) worth += m;
  return worth;
}

}  // namespace

PosteriorDistribution PosteriorDistribution::create(std::vector<RatVector> posteriors,
                                                    RatVector weights) {
  if (posteriors.size() != static_cast<size_t>(weights.size()))
    throw InputError("posterior count does not match weight count");
  Rat total = 0;
  for (Eigen::Index k = 0; k < weights.size(); ++k) {
    if (weights(k) < 0) throw InputError("negative posterior weight");
    total += weights(k);
  }
  if (total != 1) throw InputError("posterior weights sum to " + rat_to_string(total) + ", not 1");
  for (const auto& mu : posteriors) {
    Rat s = 0;
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
      if (mu(i) < 0) throw InputError("negative posterior probability");
      s += mu(i);
    }
    if (s != 1) throw InputError("posterior does not sum to 1");
  }
  // drop zero-weight atoms
  PosteriorDistribution out;
  for (Eigen::Index k = 0; k < weights.size(); ++k) {
    if (weights(k) == 0) continue;
    out.posteriors.push_back(posteriors[k]);
  }
  out.weights = RatVector(static_cast<Eigen::Index>(out.posteriors.size()));
  Eigen::Index at = 0;
  for (Eigen::Index k = 0; k < weights.size(); ++k)
    if (weights(k) != 0) out.weights(at++) = weights(k);
  return out;
}

RatVector PosteriorDistribution::mean() const {
  if (posteriors.empty()) throw InputError("empty posterior distribution");
  RatVector m = RatVector::Zero(posteriors.front().size());
  for (size_t k = 0; k < posteriors.size(); ++k) m += weights(static_cast<Eigen::Index>(k)) * posteriors[k];
  return m;
}

std::vector<Eigen::Index> optimal_actions(const DecisionProblem& problem, const RatVector& belief) {
  if (belief.size() != problem.num_states()) throw InputError("belief dimension mismatch");
  std::vector<Eigen::Index> best;
  Rat best_value;
  for (Eigen::Index a = 0; a < problem.num_actions(); ++a) {
    Rat v = expected_utility(problem, a, belief);
    if (best.empty() || v > best_value) {
      best = {a};
      best_value = v;
    } else if (v == best_value) {
      best.push_back(a);
    }
  }
  return best;
}

MenuMeasure menu_measure(const DecisionProblem& problem, const PosteriorDistribution& tau) {
  if (problem.num_actions() > kSubsetEnumerationCap)
    throw InputError("action count above subset-enumeration cap");
  MenuMeasure out;
  out.num_actions = problem.num_actions();
  for (size_t k = 0; k < tau.posteriors.size(); ++k) {
    std::uint32_t mask = 0;
    for (Eigen::Index a : optimal_actions(problem, tau.posteriors[k])) mask |= (1u << a);
    out.mass[mask] += tau.weights(static_cast<Eigen::Index>(k));
  }
  return out;
}

std::optional<std::uint32_t> core_check(const Distribution& marginal, const MenuMeasure& menu) {
  const Eigen::Index J = marginal.size();
  if (menu.num_actions != J) throw InputError("menu/marginal action mismatch");
  if (J > kSubsetEnumerationCap) throw InputError("action count above subset-enumeration cap");

  // subsets ordered by size then lexicographically on sorted index lists
  std::vector<Eigen::Index> picks;
  std::uint32_t found = 0;
  bool ok = true;
  std::function<bool(Eigen::Index, Eigen::Index)> rec = [&](Eigen::Index start,
                                                            Eigen::Index left) -> bool {
    if (left == 0) {
      std::uint32_t mask = 0;
      Rat cover = 0;
      for (Eigen::Index a : picks) { mask |= (1u << a); cover += marginal[a]; }
      if (cover < menu_worth(menu, mask)) { found = mask; return true; }
      return false;
    }
    for (Eigen::Index a = start; a <= J - left; ++a) {
      picks.push_back(a);
      if (rec(a + 1, left - 1)) return true;
      picks.pop_back();
    }
    return false;
  };
  for (Eigen::Index size = 1; size <= J; ++size) {
    picks.clear();
    if (rec(0, size)) { ok = false; break; }
  }
  if (ok) return std::nullopt;
  return found;
}

ImplementResult implement_tau(const DecisionProblem& problem, const PosteriorDistribution& tau,
                              const Distribution& marginal) {
  if (marginal.domain != problem.actions) throw InputError("marginal domain does not match actions");
  ImplementResult out;
  out.network.supply.assign(tau.weights.size(), Rat(0));
  for (Eigen::Index k = 0; k < tau.weights.size(); ++k) out.network.supply[k] = tau.weights(k);
  out.network.demand.assign(problem.num_actions(), Rat(0));
  for (Eigen::Index a = 0; a < problem.num_actions(); ++a) out.network.demand[a] = marginal[a];
  out.network.edges.resize(tau.posteriors.size());
  for (size_t k = 0; k < tau.posteriors.size(); ++k)
    out.network.edges[k] = optimal_actions(problem, tau.posteriors[k]);

  GaleFlow flow(out.network);
  Rat total = flow.run();
  if (total == 1) {
    out.success = true;
    out.rule.action_probs.resize(tau.posteriors.size());
    for (size_t k = 0; k < tau.posteriors.size(); ++k) {
      RatVector probs = RatVector::Zero(problem.num_actions());
      for (Eigen::Index a : out.network.edges[k])
        probs(a) = flow.flow_on(static_cast<Eigen::Index>(k), a) /
                   tau.weights(static_cast<Eigen::Index>(k));
      out.rule.action_probs[k] = std::move(probs);
    }
    return out;
  }

  out.success = false;
  // min-cut: actions reachable from unsaturated supplies violate the covering
  // condition; prune to an inclusion-minimal violating coalition
  auto [post_reach, act_reach] = flow.reachable();
  std::vector<Eigen::Index> coalition;
  for (Eigen::Index a = 0; a < problem.num_actions(); ++a)
    if (act_reach[a]) coalition.push_back(a);

  MenuMeasure menu = menu_measure(problem, tau);
  auto violates = [&](const std::vector<Eigen::Index>& set) {
    std::uint32_t mask = 0;
    Rat cover = 0;
    for (Eigen::Index a : set) { mask |= (1u << a); cover += marginal[a]; }
    return cover < menu_worth(menu, mask);
  };
  bool shrunk = true;
  while (shrunk) {
    shrunk = false;
    for (size_t i = 0; i < coalition.size(); ++i) {
      std::vector<Eigen::Index> smaller = coalition;
      smaller.erase(smaller.begin() + static_cast<long>(i));
      if (!smaller.empty() && violates(smaller)) {
        coalition = std::move(smaller);
        shrunk = true;
        break;
      }
    }
  }
  out.violating = std::move(coalition);
  return out;
}

std::map<std::uint32_t, RatVector> menu_choice(const MenuMeasure& menu,
                                               const Distribution& marginal) {
  if (auto bad = core_check(marginal, menu); bad)
    throw InputError("core condition fails; no menu-choice system exists");
  const Eigen::Index J = marginal.size();

  // same flow problem with menus as supply nodes
  FlowNetwork net;
  std::vector<std::uint32_t> menus;
  for (const auto& [mask, m] : menu.mass) {
    if (m == 0) continue;
    menus.push_back(mask);
    net.supply.push_back(m);
    std::vector<Eigen::Index> edge;
    for (Eigen::Index a = 0; a < J; ++a)
      if (mask & (1u << a)) edge.push_back(a);
    net.edges.push_back(std::move(edge));
  }
  net.demand.assign(J, Rat(0));
  for (Eigen::Index a = 0; a < J; ++a) net.demand[a] = marginal[a];

  GaleFlow flow(net);
  Rat total = flow.run();
  if (total != 1) throw std::logic_error("flow infeasible despite core condition");

  std::map<std::uint32_t, RatVector> out;
  for (size_t k = 0; k < menus.size(); ++k) {
    RatVector sigma = RatVector::Zero(J);
    for (Eigen::Index a : net.edges[k])
      sigma(a) = flow.flow_on(static_cast<Eigen::Index>(k), a) / net.supply[k];
    out[menus[k]] = std::move(sigma);
  }
  return out;
}

RatMatrix experiment_kernel(const DecisionProblem& problem, const Distribution& prior,
                            const PosteriorDistribution& tau, const DecisionRule& rule) {
  if (rule.action_probs.size() != tau.posteriors.size())
    throw InputError("decision rule support does not match tau");
  RatVector mean = tau.mean();
  for (Eigen::Index i = 0; i < prior.size(); ++i)
    if (mean(i) != prior[i]) throw InputError("tau is not Bayes plausible for the prior");

  const Eigen::Index J = problem.num_actions();
  const Eigen::Index I = problem.num_states();
  RatMatrix kernel = RatMatrix::Zero(J, I);
  for (Eigen::Index i = 0; i < I; ++i) {
    if (prior[i] == 0) continue;  // posteriors carry no mass there either
    for (size_t k = 0; k < tau.posteriors.size(); ++k) {
      const Rat scale = tau.posteriors[k](i) / prior[i] * tau.weights(static_cast<Eigen::Index>(k));
      if (scale == 0) continue;
      for (Eigen::Index a = 0; a < J; ++a) kernel(a, i) += scale * rule.action_probs[k](a);
    }
  }
  return kernel;
}

PosteriorDistribution tau_from_bce(const DecisionProblem& problem, const JointDistribution& joint,
                                   const Distribution& marginal) {
  if (joint.pi.rows() != problem.num_actions() || joint.pi.cols() != problem.num_states())
    throw InputError("joint dimensions do not match problem");
  RatVector am = joint.action_marginal();
  for (Eigen::Index j = 0; j < am.size(); ++j)
    if (am(j) != marginal[j]) throw InputError("joint action marginal does not match");

  std::vector<RatVector> posteriors;
  std::vector<Rat> weights;
  for (Eigen::Index j = 0; j < problem.num_actions(); ++j) {
    if (marginal[j] == 0) continue;
    RatVector mu = joint.pi.row(j).transpose() / marginal[j];
    bool merged = false;
    for (size_t k = 0; k < posteriors.size(); ++k) {
      if (posteriors[k] == mu) {
        weights[k] += marginal[j];
        merged = true;
        break;
      }
    }
    if (!merged) {
      posteriors.push_back(std::move(mu));
      weights.push_back(marginal[j]);
    }
  }
  RatVector w(static_cast<Eigen::Index>(weights.size()));
  for (size_t k = 0; k < weights.size(); ++k) w(static_cast<Eigen::Index>(k)) = weights[k];
  return PosteriorDistribution::create(std::move(posteriors), std::move(w));
}

}  // namespace bce
