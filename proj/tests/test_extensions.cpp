#include "doctest.h"

#include "bce/extensions.hpp"
#include "bce/simplex.hpp"
#include "bce/support_tests.hpp"

#include "oracles.hpp"

#include <random>

using namespace bce;

namespace {

RingGame coin_chain() {
  RingGame game;
  game.states = {"w1", "w2"};
  RatMatrix match = RatMatrix::Zero(2, 2);
  match(0, 0) = 1;
  match(1, 1) = 1;
  game.players.push_back({{"a1", "a2"}, match});
  game.players.push_back({{"b1", "b2"}, match});
  return game;
}

}  // namespace

TEST_CASE("d-mps detects spreads on the safe/risky problem") {
  // two-sided difference: +1 on the good state, 0 in the middle, -1 otherwise
  RatMatrix u = RatMatrix::Zero(2, 3);
  u(1, 0) = -1; u(1, 1) = 0; u(1, 2) = 1;
  DecisionProblem p = DecisionProblem::create({"bad", "mid", "good"}, {"safe", "risky"},
                                              std::move(u));
  Distribution base = Distribution::create(p.states,
                                           rat_vector({Rat(1, 4), Rat(1, 2), Rat(1, 4)}));
  // move mass to the extremes, keeping the good/bad gap fixed
  Distribution spread = Distribution::create(p.states,
                                             rat_vector({Rat(3, 8), Rat(1, 4), Rat(3, 8)}));
  CHECK(d_mps_check(p, base, spread));
  CHECK_FALSE(d_mps_check(p, spread, base));  // a contraction, not a spread
  CHECK(d_mps_check(p, base, base));          // reflexive

  // mean mismatch
  Distribution tilted = Distribution::create(p.states,
                                             rat_vector({Rat(1, 4), Rat(1, 4), Rat(1, 2)}));
  CHECK_FALSE(d_mps_check(p, base, tilted));

  CHECK_THROWS_AS(d_mps_check(oracle::match3(), Distribution::uniform({"w1", "w2", "w3"}),
                              Distribution::uniform({"w1", "w2", "w3"})),
                  InputError);
}

TEST_CASE("preservation of consistency under d-mps") {
  RatMatrix u = RatMatrix::Zero(2, 3);
  u(1, 0) = -1; u(1, 1) = 0; u(1, 2) = 1;
  DecisionProblem p = DecisionProblem::create({"bad", "mid", "good"}, {"safe", "risky"},
                                              std::move(u));
  Distribution base = Distribution::create(p.states,
                                           rat_vector({Rat(1, 4), Rat(1, 2), Rat(1, 4)}));
  Distribution spread = Distribution::create(p.states,
                                             rat_vector({Rat(3, 8), Rat(1, 4), Rat(3, 8)}));
  Distribution nu = Distribution::create(p.actions, rat_vector({Rat(1, 2), Rat(1, 2)}));
  auto [v_base, v_spread] = preservation_check(p, base, spread, nu);
  CHECK(v_base.consistent);
  CHECK(v_spread.consistent);
}

TEST_CASE("random d-mps spreads preserve consistency") {
  std::mt19937_64 rng(71);
  int done = 0;
  while (done < 60) {
    DecisionProblem p = oracle::rand_aud_problem(rng, 3 + static_cast<int>(rng() % 3), 2);
    auto cert = detect_aud(p);
    REQUIRE(cert.has_value());
    auto [prior, nu] = oracle::rand_consistent_pair(rng, p);

    auto spread = oracle::make_d_spread(p, *cert, prior, rng);
    if (!spread || !d_mps_check(p, prior, *spread)) continue;
    ++done;
    auto [v_base, v_spread] = preservation_check(p, prior, *spread, nu);
    CHECK(v_base.consistent);
    CHECK(v_spread.consistent);
  }
}

TEST_CASE("payoff-shifter bound tables are monotone") {
  ProblemFamily family;
  family.base = oracle::shift(Rat(0));
  family.mode = ProblemFamily::Mode::Shift;
  family.thetas = {Rat(-1, 2), Rat(0), Rat(1, 2)};
  Distribution prior = Distribution::create({"lo", "hi"}, rat_vector({Rat(1, 2), Rat(1, 2)}));
  auto rows = shift_bounds_table(family, prior);
  REQUIRE(rows.size() == 3);
  for (size_t k = 0; k + 1 < rows.size(); ++k) {
    CHECK(rows[k].lower <= rows[k + 1].lower);
    CHECK(rows[k].upper <= rows[k + 1].upper);
  }
  // closed form at theta = 0 with the even prior: everything rationalizable
  CHECK(rows[1].lower == Rat(0));
  CHECK(rows[1].upper == Rat(1));
}

TEST_CASE("constant family gives constant columns") {
  ProblemFamily family;
  family.base = oracle::shift(Rat(1, 4));
  family.mode = ProblemFamily::Mode::Shift;
  family.thetas = {Rat(0), Rat(0), Rat(0)};
  Distribution prior = Distribution::create({"lo", "hi"}, rat_vector({Rat(1, 3), Rat(2, 3)}));
  auto rows = shift_bounds_table(family, prior);
  for (size_t k = 1; k < rows.size(); ++k) {
    CHECK(rows[k].lower == rows[0].lower);
    CHECK(rows[k].upper == rows[0].upper);
  }
}

TEST_CASE("hypothesis-testing family is ratio ordered with monotone bounds") {
  ProblemFamily family;
  RatMatrix base_u = RatMatrix::Zero(2, 3);
  base_u(1, 0) = -1; base_u(1, 1) = -1; base_u(1, 2) = 1;
  family.base = DecisionProblem::create({"w1", "w2", "w3"}, {"a1", "a2"}, std::move(base_u));
  family.mode = ProblemFamily::Mode::Ratio;
  family.thetas = {Rat(1), Rat(2), Rat(3)};
  family.cost_type1 = {Rat(1), Rat(1), Rat(1)};
  family.cost_type2 = {Rat(2), Rat(1), Rat(1, 2)};  // cII/cI falls in theta
  family.hat_states = {2};
  Distribution prior = Distribution::create({"w1", "w2", "w3"},
                                            rat_vector({Rat(1, 4), Rat(1, 4), Rat(1, 2)}));
  auto rows = shift_bounds_table(family, prior);
  REQUIRE(rows.size() == 3);
  for (size_t k = 0; k + 1 < rows.size(); ++k) {
    CHECK(rows[k].lower <= rows[k + 1].lower);
    CHECK(rows[k].upper <= rows[k + 1].upper);
  }
  // Example-style closed form: LB = mu(hat)(1 + cII/cI) - cII/cI, UB = mu(hat)(1 + cI/cII)
  CHECK(rows[0].lower == std::max(Rat(0), Rat(Rat(1, 2) * 3 - 2)));
  CHECK(rows[0].upper == std::min(Rat(1), Rat(Rat(1, 2) * Rat(3, 2))));
}

TEST_CASE("non-monotone families are rejected") {
  ProblemFamily family;
  family.base = oracle::shift(Rat(0));
  family.mode = ProblemFamily::Mode::Table;
  family.thetas = {Rat(0), Rat(1)};
  RatMatrix u0 = RatMatrix::Zero(2, 2);
  u0(1, 0) = -1; u0(1, 1) = 1;
  RatMatrix u1 = RatMatrix::Zero(2, 2);
  u1(1, 0) = -2; u1(1, 1) = 1;  // low state falls, ratio falls: neither criterion holds
  family.tables = {u0, u1};
  Distribution prior = Distribution::create({"lo", "hi"}, rat_vector({Rat(1, 2), Rat(1, 2)}));
  CHECK_THROWS_AS(shift_bounds_table(family, prior), InputError);
}

TEST_CASE("across two payoff-shifter problems") {
  // first problem theta = 0, second theta in (0, 1]
  Rat theta(1, 2);
  std::vector<DecisionProblem> problems = {oracle::shift(Rat(0)), oracle::shift(theta)};
  // relabel the shared states once: shift() already uses {lo, hi}
  std::vector<std::string> profile_labels = {"a1|a1", "a1|a2", "a2|a1", "a2|a2"};

  // any mass on (a2, a1) kills consistency
  Distribution bad = Distribution::create(
      profile_labels, rat_vector({Rat(1, 4), Rat(1, 4), Rat(1, 4), Rat(1, 4)}));
  Distribution prior = Distribution::create({"lo", "hi"}, rat_vector({Rat(1, 2), Rat(1, 2)}));
  Verdict v = across_problems(problems, bad, prior);
  CHECK_FALSE(v.consistent);
  REQUIRE(v.dominated_action.has_value());
  CHECK(*v.dominated_action == "a2|a1");

  // the interval endpoints across a theta-grid match the two-problem formula
  std::mt19937_64 rng(72);
  for (int step = 1; step <= 4; ++step) {
    Rat th(step, 4);
    std::vector<DecisionProblem> pair = {oracle::shift(Rat(0)), oracle::shift(th)};
    DecisionProblem product = product_problem(pair);
    for (int iter = 0; iter < 6; ++iter) {
      RatVector w = RatVector::Zero(4);
      // keep (a2|a1) at zero mass
      Distribution three = oracle::rand_distribution(rng, {"x", "y", "z"});
      w(0) = three[0]; w(1) = three[1]; w(3) = three[2];
      Distribution joint = Distribution::create(profile_labels, std::move(w));
      auto [lo, hi] = binary_state_interval(product, joint);
      CHECK(lo == joint[1] * (1 - th) / 2 + joint[3] / 2);
      CHECK(hi == (1 - th) / 2 + joint[1] * th / 2 + joint[3] * (1 + th) / 2);
    }
  }
}

TEST_CASE("across a single problem reduces to the plain check") {
  std::mt19937_64 rng(73);
  for (int iter = 0; iter < 20; ++iter) {
    DecisionProblem p = oracle::rand_problem(rng, 2, 3);
    Distribution prior = oracle::rand_distribution(rng, p.states);
    Distribution nu = oracle::rand_distribution(rng, p.actions);
    Verdict direct = check_bce(p, prior, nu);
    Distribution relabeled = Distribution::create(product_problem({p}).actions, nu.weights);
    Verdict across = across_problems({p}, relabeled, prior);
    CHECK(direct.consistent == across.consistent);
  }
}

TEST_CASE("public signals in a two-player matching game") {
  PrivateGame game;
  game.states = {"w1", "w2"};
  RatMatrix match = RatMatrix::Zero(2, 2);
  match(0, 0) = 1;
  match(1, 1) = 1;
  game.players.push_back({{"a1", "a2"}, match});
  game.players.push_back({{"b1", "b2"}, match});

  Distribution prior = Distribution::create({"w1", "w2"}, rat_vector({Rat(1, 2), Rat(1, 2)}));
  std::vector<std::string> profiles = {"a1|b1", "a1|b2", "a2|b1", "a2|b2"};

  // full public revelation: both match the state together
  Distribution diag = Distribution::create(
      profiles, rat_vector({Rat(1, 2), Rat(0), Rat(0), Rat(1, 2)}));
  CHECK(public_bce_check(game, prior, diag).consistent);

  // anti-comonotone play is public-consistent only at the knife-edge prior
  Distribution anti = Distribution::create(
      profiles, rat_vector({Rat(0), Rat(1, 2), Rat(1, 2), Rat(0)}));
  CHECK(public_bce_check(game, prior, anti).consistent);
  Distribution skewed = Distribution::create({"w1", "w2"}, rat_vector({Rat(1, 3), Rat(2, 3)}));
  CHECK_FALSE(public_bce_check(game, skewed, anti).consistent);

  // projections of a consistent joint marginal are singly consistent
  for (int n = 0; n < 2; ++n) {
    RatVector proj = RatVector::Zero(2);
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) {
        Rat mass = diag[2 * x + y];
        proj(n == 0 ? x : y) += mass;
      }
    DecisionProblem single =
        DecisionProblem::create(game.states, game.players[n].actions, game.players[n].utility);
    CHECK(check_bce(single, prior,
                    Distribution::create(game.players[n].actions, proj))
              .consistent);
  }
}

TEST_CASE("single-player private game reduces to the plain check") {
  std::mt19937_64 rng(74);
  for (int iter = 0; iter < 15; ++iter) {
    DecisionProblem p = oracle::rand_problem(rng, 3, 2);
    PrivateGame game;
    game.states = p.states;
    game.players.push_back({p.actions, p.utility});
    Distribution prior = oracle::rand_distribution(rng, p.states);
    Distribution nu = oracle::rand_distribution(rng, p.actions);
    CHECK(public_bce_check(game, prior, nu).consistent == check_bce(p, prior, nu).consistent);
  }
}

TEST_CASE("ring chain of two matching players") {
  RingGame game = coin_chain();
  Distribution prior = Distribution::create({"w1", "w2"}, rat_vector({Rat(1, 2), Rat(1, 2)}));

  std::vector<Distribution> even = {
      Distribution::create({"a1", "a2"}, rat_vector({Rat(1, 2), Rat(1, 2)})),
      Distribution::create({"b1", "b2"}, rat_vector({Rat(1, 2), Rat(1, 2)}))};
  RingVerdict ok = ring_check(game, prior, even);
  CHECK(ok.consistent);
  CHECK(ok.witness_validated);

  // player 2 always plays b1 while watching a fifty-fifty predecessor is fine
  // (indifference at the uniform belief); skew player 1 to break it
  std::vector<Distribution> skew = {
      Distribution::create({"a1", "a2"}, rat_vector({Rat(1, 4), Rat(3, 4)})),
      Distribution::create({"b1", "b2"}, rat_vector({Rat(1), Rat(0)}))};
  Distribution prior_skew = Distribution::create({"w1", "w2"},
                                                 rat_vector({Rat(1, 4), Rat(3, 4)}));
  RingVerdict bad = ring_check(game, prior_skew, skew);
  CHECK_FALSE(bad.consistent);
  CHECK(bad.failing_link == 2);
}

TEST_CASE("single-player ring reduces to the plain check") {
  std::mt19937_64 rng(75);
  for (int iter = 0; iter < 15; ++iter) {
    DecisionProblem p = oracle::rand_problem(rng, 2, 2);
    RingGame game;
    game.states = p.states;
    game.players.push_back({p.actions, p.utility});
    Distribution prior = oracle::rand_distribution(rng, p.states);
    Distribution nu = oracle::rand_distribution(rng, p.actions);
    RingVerdict rv = ring_check(game, prior, {nu});
    CHECK(rv.consistent == check_bce(p, prior, nu).consistent);
  }
}

TEST_CASE("ring verdicts match the flattened LP") {
  std::mt19937_64 rng(76);
  for (int iter = 0; iter < 25; ++iter) {
    const int players = 2 + static_cast<int>(rng() % 2);
    RingGame game = oracle::rand_ring_game(rng, players, 3, 3);
    Distribution prior = oracle::rand_distribution(rng, game.states);
    std::vector<Distribution> marginals;
    for (const auto& pl : game.players)
      marginals.push_back(oracle::rand_distribution(rng, pl.actions));

    RingVerdict rv = ring_check(game, prior, marginals);
    CHECK(rv.consistent == oracle::flat_ring_consistent(game, prior, marginals));
    if (rv.consistent) CHECK(rv.witness_validated);
  }
}
