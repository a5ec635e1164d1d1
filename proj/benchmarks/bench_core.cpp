#include "bce/classify.hpp"
#include "bce/consistency.hpp"
#include "bce/geometry.hpp"
#include "bce/rationalizer.hpp"
#include "bce/support_tests.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace bce;

namespace {

DecisionProblem match3() {
  RatMatrix u = RatMatrix::Zero(3, 3);
  for (int k = 0; k < 3; ++k) u(k, k) = 1;
  return DecisionProblem::create({"w1", "w2", "w3"}, {"a1", "a2", "a3"}, std::move(u));
}

DecisionProblem fourstate() {
  RatMatrix u = RatMatrix::Zero(2, 4);
  u(1, 0) = -9; u(1, 1) = -5; u(1, 2) = -1; u(1, 3) = 5;
  return DecisionProblem::create({"w1", "w2", "w3", "w4"}, {"a1", "a2"}, std::move(u));
}

DecisionProblem random_problem(std::mt19937_64& rng, int states, int actions) {
  std::uniform_int_distribution<int> num(-6, 6);
  std::uniform_int_distribution<int> den(1, 3);
  RatMatrix u(actions, states);
  for (int j = 0; j < actions; ++j)
    for (int i = 0; i < states; ++i) u(j, i) = Rat(num(rng), den(rng));
  std::vector<std::string> s, a;
  for (int i = 1; i <= states; ++i) s.push_back("w" + std::to_string(i));
  for (int i = 1; i <= actions; ++i) a.push_back("a" + std::to_string(i));
  return DecisionProblem::create(std::move(s), std::move(a), std::move(u));
}

Distribution random_distribution(std::mt19937_64& rng, std::vector<std::string> domain) {
  std::uniform_int_distribution<int> mass(1, 9);
  std::vector<long> raw(domain.size());
  long total = 0;
  for (auto& r : raw) { r = mass(rng); total += r; }
  RatVector w(static_cast<Eigen::Index>(domain.size()));
  for (size_t i = 0; i < raw.size(); ++i) w(static_cast<Eigen::Index>(i)) = Rat(raw[i], total);
  return Distribution::create(std::move(domain), std::move(w));
}

void BM_check_match3(benchmark::State& state) {
  DecisionProblem p = match3();
  ConsistencyChecker checker(p);
  Distribution prior = Distribution::uniform(p.states);
  Distribution nu = Distribution::uniform(p.actions);
  for (auto _ : state) benchmark::DoNotOptimize(checker.check(prior, nu).consistent);
}
BENCHMARK(BM_check_match3);

void BM_check_random(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const int states = static_cast<int>(state.range(0));
  const int actions = static_cast<int>(state.range(1));
  DecisionProblem p = random_problem(rng, states, actions);
  ConsistencyChecker checker(p);
  Distribution prior = random_distribution(rng, p.states);
  Distribution nu = random_distribution(rng, p.actions);
  for (auto _ : state) benchmark::DoNotOptimize(checker.check(prior, nu).consistent);
}
BENCHMARK(BM_check_random)->Args({3, 3})->Args({5, 4})->Args({6, 5});

void BM_aud_family(benchmark::State& state) {
  DecisionProblem p = fourstate();
  for (auto _ : state) benchmark::DoNotOptimize(testfns_aud(p).size());
}
BENCHMARK(BM_aud_family);

void BM_check_aud_verdict(benchmark::State& state) {
  DecisionProblem p = fourstate();
  Distribution prior = Distribution::uniform(p.states);
  Distribution nu = Distribution::uniform(p.actions);
  for (auto _ : state) benchmark::DoNotOptimize(check_aud(p, prior, nu).consistent);
}
BENCHMARK(BM_check_aud_verdict);

void BM_minkowski_facets(benchmark::State& state) {
  DecisionProblem p = match3();
  Distribution nu = Distribution::uniform(p.actions);
  for (auto _ : state) {
    FacetResult fr = enumerate_facets(weighted_minkowski(p, nu));
    benchmark::DoNotOptimize(fr.hrep.inequalities.size());
  }
}
BENCHMARK(BM_minkowski_facets);

void BM_gale_flow(benchmark::State& state) {
  DecisionProblem p = match3();
  std::vector<RatVector> posteriors;
  for (int k = 0; k < 3; ++k) {
    RatVector e = RatVector::Zero(3);
    e(k) = 1;
    posteriors.push_back(e);
  }
  PosteriorDistribution tau =
      PosteriorDistribution::create(posteriors, RatVector::Constant(3, Rat(1, 3)));
  Distribution nu = Distribution::uniform(p.actions);
  for (auto _ : state) benchmark::DoNotOptimize(implement_tau(p, tau, nu).success);
}
BENCHMARK(BM_gale_flow);

}  // namespace

BENCHMARK_MAIN();
