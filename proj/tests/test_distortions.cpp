#include <sstream>

#include "blackwell/distortions.hpp"
#include "blackwell/errors.hpp"
#include "blackwell/geometry.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace blackwell;
using testing::stubborn_rule_a;
using testing::stubborn_rule_b;

TEST_CASE("evaluate examples") {
  const Belief mu = Belief::binary(0.5);
  Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    Belief x = Belief::normalized(rng.simplex(3));
    CHECK(Distortion::bayes(3).evaluate(Belief::uniform(3), x) == x);
  }
  const Belief g = Distortion::grether(2, 2.0, 1.0).evaluate(mu, Belief::binary(0.7));
  CHECK(g[0] == doctest::Approx(0.49 / 0.58));
  CHECK(g[1] == doctest::Approx(0.09 / 0.58));

  const Distortion c = Distortion::occasionally_coarse(0.3, 0.7, 0.2, 0.8);
  CHECK(c.evaluate(mu, Belief::binary(0.1)).scalar() == doctest::Approx(0.3));
  CHECK(c.evaluate(mu, Belief::binary(0.5)).scalar() == doctest::Approx(0.5));
  CHECK(c.evaluate(mu, Belief::binary(0.0)).scalar() == doctest::Approx(0.2));
  CHECK(c.evaluate(mu, Belief::binary(1.0)).scalar() == doctest::Approx(0.8));
  CHECK(c.evaluate(mu, Belief::binary(0.9)).scalar() == doctest::Approx(0.7));

  CHECK_THROWS_AS(Distortion::occasionally_coarse(0.7, 0.3, 0.2, 0.8), Error);
  CHECK_THROWS_AS(Distortion::occasionally_coarse(0.3, 0.7, 0.4, 0.8), Error);
  CHECK_THROWS_AS(Distortion::bayes(2).evaluate(Belief({1.0, 0.0}), mu), Error);

  // Grether fixes vertices and sends zero coordinates to zero.
  const Belief mu3({0.2, 0.3, 0.5});
  CHECK(Distortion::grether(3, 0.5, 2.0).evaluate(mu3, Belief::vertex(3, 1)) == Belief::vertex(3, 1));
  CHECK(Distortion::grether(3, 0.5, 2.0).evaluate(mu3, Belief({0.5, 0.5, 0.0}))[2] == 0.0);
  // beta = 1 on the prior returns the prior.
  CHECK(distance_inf(Distortion::grether(3, 3.0, 1.0).evaluate(mu3, mu3), mu3) < 1e-15);

  const Belief s = Distortion::shrinkage(3, 0.25).evaluate(mu3, Belief::vertex(3, 0));
  CHECK(s[0] == doctest::Approx(0.25 + 0.75 * 0.2));
}

TEST_CASE("stubborn evaluation follows the rule description") {
  const Distortion b = stubborn_rule_b();
  const Belief mu = Belief::uniform(3);
  const Belief xs({0.5, 0.5, 0.0});
  CHECK(b.evaluate(mu, Belief({0.2, 0.8, 0.0})) == xs);
  CHECK(b.evaluate(mu, Belief({0.7, 0.3, 0.0})) == Belief({0.7, 0.3, 0.0}));
  CHECK(b.evaluate(mu, Belief({0.4, 0.0, 0.6})) == Belief({0.4, 0.0, 0.6}));
  CHECK(b.evaluate(mu, Belief({0.0, 0.4, 0.6})) == xs);
  CHECK(b.evaluate(mu, Belief({0.2, 0.3, 0.5})) == xs);
  CHECK(b.evaluate(mu, Belief::vertex(3, 1)) == Belief({0.3, 0.7, 0.0}));
  CHECK(b.evaluate(mu, Belief::vertex(3, 0)) == Belief::vertex(3, 0));
  CHECK(b.evaluate(mu, Belief::vertex(3, 2)) == Belief::vertex(3, 2));

  const Distortion a = stubborn_rule_a();
  CHECK(a.evaluate(mu, Belief::vertex(3, 0)) == Belief::vertex(3, 0));
  CHECK(a.evaluate(mu, Belief::vertex(3, 2))[1] == doctest::Approx(1.0 / 6));
  CHECK(a.evaluate(mu, Belief({0.0, 0.5, 0.5}))[1] == doctest::Approx(1.0 / 3));

  // The figure (a) vertex images are off the segments to x*, so the checked constructor rejects them.
  StubbornSpec spec;
  spec.x_star = Belief({0.2, 1.0 / 3.0, 1.0 - 0.2 - 1.0 / 3.0});
  spec.vertex_images.emplace(2, Belief({0.2, 1.0 / 6.0, 1.0 - 0.2 - 1.0 / 6.0}));
  CHECK_THROWS_AS(Distortion::occasionally_stubborn(3, spec), Error);
  StubbornSpec bad_edge;
  bad_edge.x_star = Belief::uniform(3);
  bad_edge.edge_case = EdgeCase{Face({0, 1}), 0};
  CHECK_THROWS_AS(Distortion::occasionally_stubborn(3, bad_edge), Error);
}

TEST_CASE("pushforward") {
  const Belief mu = Belief::binary(0.5);
  PosteriorDistribution rho({Belief::binary(0.7), Belief::binary(0.3)}, {0.5, 0.5});
  auto same = pushforward(Distortion::bayes(2), mu, rho);
  CHECK(same.support() == rho.support());
  auto collapsed = pushforward(Distortion::trivial(Belief::binary(0.4)), mu, rho);
  CHECK(collapsed.size() == 1);
  CHECK(collapsed.probs()[0] == doctest::Approx(1.0));
  auto g = pushforward(Distortion::grether(2, 2.0, 1.0), mu, rho);
  REQUIRE(g.size() == 2);
  CHECK(g.support()[0].scalar() == doctest::Approx(0.8448).epsilon(1e-4));
  CHECK(g.support()[1].scalar() == doctest::Approx(0.1552).epsilon(1e-3));
  CHECK(g.probs()[0] == doctest::Approx(0.5));

  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 3;
    const Belief m = rng.interior_belief(n);
    auto r = bayes(m, testing::random_experiment(rng, n, 2 + rng.index(4)));
    auto p = pushforward(Distortion::occasionally_stubborn(n, testing::random_stubborn_spec(rng, n)), m, r);
    double total = 0.0;
    for (double q : p.probs()) total += q;
    CHECK(total == doctest::Approx(1.0));
    CHECK(p.size() <= r.size());
  }
}

TEST_CASE("classify_error") {
  const Belief mu = Belief::binary(0.5);
  CHECK(classify_error(Distortion::bayes(2), mu, Belief::binary(0.3)).kind == ErrorKind::None);
  auto s = classify_error(Distortion::shrinkage(2, 0.5), mu, Belief::binary(0.9));
  CHECK(s.kind == ErrorKind::Contractive);
  CHECK(*s.witness_lambda == doctest::Approx(0.5));
  CHECK(classify_error(Distortion::grether(2, 2.0, 1.0), mu, Belief::binary(0.7)).kind == ErrorKind::Expansive);
  // An error at the prior itself is expansive: the segment from mu to mu is a point.
  CHECK(classify_error(Distortion::grether(2, 1.0, 2.0), Belief::binary(0.3), Belief::binary(0.3)).kind ==
        ErrorKind::Expansive);

  Rng rng(8);
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = 2 + rng.index(3);
    const Belief m = rng.interior_belief(n);
    const Belief x = Belief::normalized(rng.simplex(n));
    CHECK(classify_error(Distortion::bayes(n), m, x).kind == ErrorKind::None);
    const double lambda = rng.uniform(0.0, 0.99);
    if (distance_inf(x, m) > 1e-6) {
      auto c = classify_error(Distortion::shrinkage(n, lambda), m, x);
      CHECK(c.kind == ErrorKind::Contractive);
      CHECK(*c.witness_lambda == doctest::Approx(lambda).epsilon(1e-6));
    }
  }
}

TEST_CASE("is_occasionally_coarse") {
  const Belief mu = Belief::binary(0.5);
  auto b = is_occasionally_coarse(Distortion::bayes(2), mu, 1000);
  CHECK(b.holds);
  CHECK(b.a == 0.0);
  CHECK(b.b == 1.0);
  auto c = is_occasionally_coarse(Distortion::occasionally_coarse(0.3, 0.7, 0.2, 0.8), mu, 1000);
  CHECK(c.holds);
  CHECK(c.a == doctest::Approx(0.3));
  CHECK(c.b == doctest::Approx(0.7));
  CHECK(c.u == doctest::Approx(0.2));
  CHECK(c.v == doctest::Approx(0.8));
  auto g = is_occasionally_coarse(Distortion::grether(2, 2.0, 1.0), mu, 1000);
  CHECK_FALSE(g.holds);
  REQUIRE(g.refutation.has_value());
  CHECK(g.refutation->condition == 3);
  CHECK_FALSE(is_occasionally_coarse(Distortion::shrinkage(2, 0.5), mu, 200).holds);
  CHECK(is_occasionally_coarse(Distortion::trivial(Belief::binary(0.4)), mu, 200).holds);
  CHECK_THROWS_AS(is_occasionally_coarse(Distortion::bayes(3), Belief::uniform(3), 200), Error);

  Rng rng(12);
  for (int i = 0; i < 60; ++i) {
    const CoarseRule p = testing::random_coarse_params(rng);
    const Belief m = rng.interior_belief(2);
    auto v = is_occasionally_coarse(Distortion::occasionally_coarse(p.a, p.b, p.u, p.v), m, 500);
    CHECK(v.holds);
    if (p.a > 1.0 / 500) CHECK(v.a == doctest::Approx(p.a));
    if (p.b < 1.0 - 1.0 / 500) CHECK(v.b == doctest::Approx(p.b));
  }
}

TEST_CASE("is_occasionally_stubborn") {
  const Belief mu = Belief::uniform(3);
  auto b = is_occasionally_stubborn(Distortion::bayes(3), mu);
  CHECK(b.holds);
  CHECK_FALSE(b.x_star.has_value());

  auto g = is_occasionally_stubborn(Distortion::grether(3, 2.0, 1.0), mu);
  CHECK_FALSE(g.holds);
  CHECK(g.refutation->condition == 1);

  auto fb = is_occasionally_stubborn(stubborn_rule_b(), mu);
  CHECK(fb.holds);
  CHECK(distance_inf(*fb.x_star, Belief({0.5, 0.5, 0.0})) < 1e-12);

  // Example (a) as stated: x* is recovered, but a vertex image is not between x* and its vertex.
  auto fa = is_occasionally_stubborn(stubborn_rule_a(), mu);
  CHECK_FALSE(fa.holds);
  REQUIRE(fa.x_star.has_value());
  CHECK((*fa.x_star)[1] == doctest::Approx(1.0 / 3));
  CHECK(fa.refutation->condition == 3);

  CHECK(is_occasionally_stubborn(Distortion::trivial(Belief({0.2, 0.3, 0.5})), mu).holds);
  CHECK_FALSE(is_occasionally_stubborn(Distortion::shrinkage(3, 0.5), mu).holds);
  CHECK_THROWS_AS(is_occasionally_stubborn(Distortion::bayes(2), Belief::uniform(2)), Error);

  // Only a vertex errs: the interior is correct, so there is no common x* to anchor it.
  StubbornSpec lone;
  lone.x_star = Belief::uniform(3);
  lone.correct_faces = {Face({0, 1, 2})};
  lone.vertex_images.emplace(0, Belief({0.8, 0.1, 0.1}));
  auto v = is_occasionally_stubborn(Distortion::stubborn_form(3, lone), mu);
  CHECK_FALSE(v.holds);

  Rng rng(21);
  for (int i = 0; i < 60; ++i) {
    const std::size_t n = 3 + rng.index(2);
    const Belief m = rng.interior_belief(n);
    auto d = Distortion::occasionally_stubborn(n, testing::random_stubborn_spec(rng, n));
    auto verdict = is_occasionally_stubborn(d, m, 32);
    CHECK(verdict.holds);
  }
}

TEST_CASE("is_trivial_on_interior and is_affine") {
  const Belief mu = Belief::uniform(3);
  CHECK(is_trivial_on_interior(Distortion::trivial(Belief({0.1, 0.2, 0.7})), mu));
  CHECK_FALSE(is_trivial_on_interior(Distortion::bayes(3), mu));
  CHECK_FALSE(is_trivial_on_interior(Distortion::bayes(2), Belief::uniform(2)));
  CHECK(is_trivial_on_interior(stubborn_rule_a(), mu));

  CHECK(is_affine(Distortion::shrinkage(3, 0.5), mu));
  CHECK(is_affine(Distortion::shrinkage(2, 0.3), Belief::binary(0.7)));
  CHECK(is_affine(Distortion::bayes(4), Belief::uniform(4)));
  CHECK(is_affine(Distortion::trivial(Belief({0.1, 0.2, 0.7})), mu));
  CHECK_FALSE(is_affine(Distortion::grether(3, 2.0, 1.0), mu));
  CHECK_FALSE(is_affine(Distortion::occasionally_coarse(0.3, 0.7, 0.2, 0.8), Belief::binary(0.5)));
}

TEST_CASE("tabulated rules") {
  const Belief mu = Belief::binary(0.5);
  const Distortion g = Distortion::grether(2, 2.0, 1.0);
  const Distortion t = Distortion::tabulate(g, mu, 100);
  CHECK(t.family() == Family::Tabulated);
  CHECK(distance_inf(t.evaluate(mu, Belief::binary(0.7)), g.evaluate(mu, Belief::binary(0.7))) < 1e-12);
  // Nearest node, no interpolation.
  CHECK(distance_inf(t.evaluate(mu, Belief::binary(0.7041)), g.evaluate(mu, Belief::binary(0.7))) < 1e-12);

  std::istringstream csv("x1,x2,y1,y2\n0,1,0,1\n0.5,0.5,0.6,0.4\n1,0,1,0\n");
  const Distortion c = Distortion::tabulated(TabulatedRule::from_csv(csv, 2));
  CHECK(c.evaluate(mu, Belief::binary(0.45)).scalar() == doctest::Approx(0.6));

  std::istringstream tri("0,0,1,0,0,1\n1,0,0,1,0,0\n0,1,0,0,1,0\n");
  const Distortion v = Distortion::tabulated(TabulatedRule::from_csv(tri, 3));
  try {
    v.evaluate(Belief::uniform(3), Belief::uniform(3));
    FAIL("expected GridMiss");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GridMiss);
  }
  std::istringstream broken("0,1,0\n");
  CHECK_THROWS_AS(TabulatedRule::from_csv(broken, 2), Error);
}
