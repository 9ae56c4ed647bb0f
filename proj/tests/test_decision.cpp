#include <sstream>

#include "blackwell/decision.hpp"
#include "blackwell/errors.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace blackwell;

namespace {

DecisionProblem random_problem(Rng& rng, std::size_t n, std::size_t actions) {
  Matrix m(actions, std::vector<double>(n));
  for (auto& row : m)
    for (double& v : row) v = rng.uniform(-1.0, 1.0);
  return DecisionProblem(std::move(m));
}

Distortion random_rule(Rng& rng, std::size_t n) {
  switch (rng.index(5)) {
    case 0: return Distortion::grether(n, rng.uniform(0.3, 3.0), rng.uniform(0.3, 3.0));
    case 1: return Distortion::shrinkage(n, rng.uniform01());
    case 2: return Distortion::trivial(Belief::normalized(rng.simplex(n)));
    case 3:
      if (n >= 3) return Distortion::occasionally_stubborn(n, testing::random_stubborn_spec(rng, n));
      [[fallthrough]];
    default: return Distortion::bayes(n);
  }
}

}  // namespace

TEST_CASE("value_V examples") {
  const auto q = quadratic_loss_problem();
  auto v = value_V(q, Belief::binary(0.5));
  CHECK(v.payoff == doctest::Approx(0.05));
  REQUIRE(v.argmax.size() == 1);
  CHECK(v.argmax[0] == 50);

  DecisionProblem single({{1.0, 2.0, 3.0}});
  CHECK(value_V(single, Belief({0.2, 0.3, 0.5})).payoff == doctest::Approx(0.2 + 0.6 + 1.5));

  // Two-action problem {0, alpha.x - beta} with alpha = (1,0,0), beta = 0.4.
  DecisionProblem hp({{0.0, 0.0, 0.0}, {0.6, -0.4, -0.4}});
  CHECK(value_V(hp, Belief({0.7, 0.2, 0.1})).payoff == doctest::Approx(0.3));
  CHECK(value_V(hp, Belief({0.1, 0.2, 0.7})).payoff == doctest::Approx(0.0));
  auto kink = value_V(hp, Belief({0.4, 0.3, 0.3}));
  CHECK(kink.argmax.size() == 2);
  CHECK_THROWS_AS(DecisionProblem({}), Error);
}

TEST_CASE("selectors choose among optimal actions") {
  DecisionProblem hp({{0.0, 0.0}, {0.5, -0.5}});
  const Belief tie = Belief::binary(0.5);
  CHECK(Selector{}.choose(hp, tie) == 0);
  CHECK(Selector{SelectorPolicy::LexicographicLast, 1e-10, {}}.choose(hp, tie) == 1);
  Selector pinned{SelectorPolicy::Pinned, 1e-10, {Pin{tie, 1e-12, 1}}};
  CHECK(pinned.choose(hp, tie) == 1);
  // A pin never forces a suboptimal action.
  Selector wrong{SelectorPolicy::Pinned, 1e-10, {Pin{Belief::binary(0.2), 0.1, 1}}};
  CHECK(wrong.choose(hp, Belief::binary(0.2)) == 0);
}

TEST_CASE("welfare_W examples") {
  const auto q = quadratic_loss_problem();
  const Belief mu = Belief::binary(0.5);
  const auto c = Distortion::occasionally_coarse(0.3, 0.7, 0.2, 0.8);
  CHECK(welfare_W(q, c, mu, {}, WelfareMode::SingleMistake, Belief::binary(0.1)) == doctest::Approx(0.17));
  CHECK(welfare_W(q, c, mu, {}, WelfareMode::DoubleMistake, Belief::binary(0.1)) == doctest::Approx(0.09));

  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 2 + rng.index(3);
    const Belief m = rng.interior_belief(n);
    const auto p = random_problem(rng, n, 1 + rng.index(5));
    const Belief x = Belief::normalized(rng.simplex(n));
    const double v = value_V(p, x).payoff;
    CHECK(std::abs(welfare_W(p, Distortion::bayes(n), m, {}, WelfareMode::SingleMistake, x) - v) <= 1e-12);
    CHECK(std::abs(welfare_W(p, Distortion::bayes(n), m, {}, WelfareMode::DoubleMistake, x) - v) <= 1e-12);
    const auto d = random_rule(rng, n);
    CHECK(welfare_W(p, d, m, {}, WelfareMode::SingleMistake, x) <= v + 1e-12);
  }
}

TEST_CASE("expected_payoff") {
  const auto q = quadratic_loss_problem();
  const Belief mu = Belief::binary(0.5);
  CHECK(expected_payoff(q, Distortion::bayes(2), mu, {}, WelfareMode::SingleMistake,
                        PosteriorDistribution::degenerate(mu)) == doctest::Approx(0.05));
  CHECK_THROWS_AS(expected_payoff(q, Distortion::bayes(2), mu, {}, WelfareMode::SingleMistake,
                                  PosteriorDistribution::degenerate(Belief::binary(0.4))),
                  Error);
  // Blackwell's theorem for the Bayesian benchmark: garbling never helps.
  Rng rng(6);
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = 2 + rng.index(3);
    const Belief m = rng.interior_belief(n);
    const auto p = random_problem(rng, n, 2 + rng.index(4));
    const auto pi = testing::random_experiment(rng, n, 2 + rng.index(3));
    const auto pi2 = garble(pi, GarblingMatrix(testing::random_stochastic(rng, pi.signals(), 1 + rng.index(3))));
    const double more = expected_payoff(p, Distortion::bayes(n), m, {}, WelfareMode::SingleMistake, bayes(m, pi));
    const double less = expected_payoff(p, Distortion::bayes(n), m, {}, WelfareMode::SingleMistake, bayes(m, pi2));
    CHECK(more >= less - 1e-12);
  }
}

TEST_CASE("convexity_violations") {
  const auto q = quadratic_loss_problem();
  const Belief mu = Belief::binary(0.5);
  CHECK(convexity_violations(q, Distortion::bayes(2), mu, {}, WelfareMode::SingleMistake, 1000).empty());
  CHECK(convexity_violations(q, Distortion::occasionally_coarse(0.3, 0.7, 0.2, 0.8), mu, {},
                             WelfareMode::SingleMistake, 1000)
            .empty());
  // Threshold problem with its kink at 0.6, between the prior and the beliefs that shrink across it.
  DecisionProblem thr({{0.0, 0.0}, {0.4, -0.6}});
  auto v = convexity_violations(thr, Distortion::shrinkage(2, 0.5), mu, {}, WelfareMode::SingleMistake, 200);
  CHECK_FALSE(v.empty());
  for (const auto& r : v) CHECK(r.gap > 1e-9);

  // Oracle: brute force over every triple of a 201-node grid for the same instance.
  bool brute = false;
  auto W = [&](double x) {
    return welfare_W(thr, Distortion::shrinkage(2, 0.5), mu, {}, WelfareMode::SingleMistake, Belief::binary(x));
  };
  for (int i = 0; i <= 200 && !brute; ++i)
    for (int k = i + 2; k <= 200 && !brute; k += 2) {
      const int j = (i + k) / 2;
      brute = W(j / 200.0) > 0.5 * (W(i / 200.0) + W(k / 200.0)) + 1e-9;
    }
  CHECK(brute);

  const Belief mu3 = Belief::uniform(3);
  Rng rng(10);
  for (int i = 0; i < 20; ++i) {
    const auto p = random_problem(rng, 3, 2 + rng.index(4));
    CHECK(convexity_violations(p, Distortion::bayes(3), mu3, {}, WelfareMode::SingleMistake, 200, 1e-9, i).empty());
    CHECK(convexity_violations(p, Distortion::shrinkage(3, 0.5), mu3, {}, WelfareMode::DoubleMistake, 200, 1e-9, i)
              .empty());
  }

  std::ostringstream csv;
  write_convexity_csv(csv, v);
  CHECK(csv.str().rfind("x,x_prime,lambda,lhs,rhs,gap\n", 0) == 0);
}

TEST_CASE("five-piece form of W for a coarse rule") {
  const auto q = quadratic_loss_problem();
  const Belief mu = Belief::binary(0.5);
  const auto c = Distortion::occasionally_coarse(0.3, 0.7, 0.2, 0.8);
  // L_c(x) = -(c^2 - 2cx + x) + 0.3 is the payoff of action c at belief x.
  auto L = [](double c, double x) { return -(c * c - 2 * c * x + x) + 0.3; };
  auto V = [](double x) { return -x * (1 - x) + 0.3; };
  for (int k = 0; k <= 1000; ++k) {
    const double x = k / 1000.0;
    double expect;
    if (k == 0) expect = L(0.2, 0.0);
    else if (k == 1000) expect = L(0.8, 1.0);
    else if (x < 0.3) expect = L(0.3, x);
    else if (x > 0.7) expect = L(0.7, x);
    else {
      // Brute-force V over the action grid.
      expect = -1e300;
      for (int a = 0; a <= 100; ++a) expect = std::max(expect, L(a / 100.0, x));
    }
    CHECK(std::abs(welfare_W(q, c, mu, {}, WelfareMode::SingleMistake, Belief::binary(x)) - expect) <= 1e-9);
    if (k % 100 == 0 && x >= 0.3 && x <= 0.7) CHECK(expect == doctest::Approx(V(x)));
  }
}

TEST_CASE("format_number is locale independent and round-trips") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(-2.0) == "-2");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}
