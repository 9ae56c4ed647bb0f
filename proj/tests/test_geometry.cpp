#include <cmath>

#include "blackwell/errors.hpp"
#include "blackwell/geometry.hpp"
#include "blackwell/lp.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace blackwell;

TEST_CASE("belief construction clamps tiny negatives and rejects bad input") {
  Belief b({0.5, 0.5 + 1e-13, -1e-13});
  CHECK(b[2] == 0.0);
  CHECK_THROWS_AS(Belief({0.5, 0.6}), Error);
  CHECK_THROWS_AS(Belief({1.2, -0.2}), Error);
  CHECK(Face::of(Belief({0.5, 0.0, 0.5})).support() == std::vector<std::size_t>{0, 2});
  CHECK(Face::of(Belief({0.5, 0.0, 0.5})).dim() == 1);
  CHECK(all_faces(3, 2).size() == 4);
}

TEST_CASE("lp solves a textbook problem and reports infeasibility") {
  // min -x - y s.t. x + 2y <= 4, 3x + y <= 6
  lp::Program p;
  auto x = p.add_variable(-1.0), y = p.add_variable(-1.0);
  p.add_constraint({{x, 1.0}, {y, 2.0}}, lp::Relation::LessEqual, 4.0);
  p.add_constraint({{x, 3.0}, {y, 1.0}}, lp::Relation::LessEqual, 6.0);
  auto s = p.minimize();
  REQUIRE(s.optimal());
  CHECK(s.x[x] == doctest::Approx(1.6));
  CHECK(s.x[y] == doctest::Approx(1.2));

  lp::Program q;
  auto z = q.add_variable(1.0);
  q.add_constraint({{z, 1.0}}, lp::Relation::GreaterEqual, 2.0);
  q.add_constraint({{z, 1.0}}, lp::Relation::LessEqual, 1.0);
  CHECK(q.minimize().status == lp::Status::Infeasible);

  lp::Program u;
  auto f = u.add_variable(1.0, true);
  u.add_constraint({{f, 1.0}}, lp::Relation::LessEqual, 3.0);
  CHECK(u.minimize().status == lp::Status::Unbounded);

  lp::Program e;
  auto g = e.add_variable(1.0, true);
  e.add_constraint({{g, 1.0}}, lp::Relation::GreaterEqual, -2.5);
  auto se = e.minimize();
  REQUIRE(se.optimal());
  CHECK(se.x[g] == doctest::Approx(-2.5));
}

TEST_CASE("on_segment") {
  auto r = on_segment(Belief({1, 0}), Belief({0, 1}), Belief({0.3, 0.7}));
  CHECK(r.on);
  CHECK(r.lambda == doctest::Approx(0.3));
  CHECK_FALSE(on_segment(Belief({1, 0, 0}), Belief({0, 1, 0}), Belief({0, 0, 1})).on);

  const Belief x({0.6, 0.3, 0.1}), y = Belief::uniform(3);
  // Exact point at lambda = 0.625.
  auto exact = on_segment(x, y, mix(x, y, 0.625));
  CHECK(exact.on);
  CHECK(exact.lambda == doctest::Approx(0.625));
  // The rounded point (0.5, 0.3167, 0.1833) is about 4e-3 off the segment: on it only at a loose tolerance.
  const Belief rounded({0.5, 0.3167, 0.1833});
  auto loose = on_segment(x, y, rounded, 1e-2);
  CHECK(loose.on);
  CHECK(loose.lambda == doctest::Approx(0.625).epsilon(0.02));
  CHECK_FALSE(on_segment(x, y, rounded, 1e-9).on);

  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    Belief a = rng.interior_belief(4), b = rng.interior_belief(4);
    auto at_a = on_segment(a, b, a);
    auto at_b = on_segment(a, b, b);
    CHECK(at_a.on);
    CHECK(at_a.lambda == doctest::Approx(1.0));
    CHECK(at_b.on);
    CHECK(at_b.lambda == doctest::Approx(0.0));
  }
}

TEST_CASE("affinely_independent") {
  CHECK(affinely_independent({Belief({1, 0, 0}), Belief({0, 1, 0}), Belief({0, 0, 1})}));
  CHECK_FALSE(affinely_independent({Belief({1, 0}), Belief({0, 1}), Belief({0.5, 0.5})}));
  CHECK_FALSE(affinely_independent({Belief({0.2, 0.2, 0.6}), Belief({0.4, 0.4, 0.2}), Belief({0.3, 0.3, 0.4})}));
  CHECK_FALSE(affinely_independent({Belief({0.2, 0.8}), Belief({0.2, 0.8})}));
  CHECK(affinely_independent({Belief({0.2, 0.8})}));
  CHECK_THROWS_AS(affinely_independent({}), Error);
}

TEST_CASE("in_convex_hull examples") {
  const std::vector<Belief> verts{Belief({1, 0, 0}), Belief({0, 1, 0}), Belief({0, 0, 1})};
  CHECK(in_convex_hull(Belief::uniform(3), verts));
  CHECK_FALSE(in_convex_hull(Belief({1, 0, 0}), {Belief({0.5, 0.5, 0}), Belief({0, 0, 1})}));
  const std::vector<Belief> h{Belief({0.2, 0.2, 0.6}), Belief({0.5, 0.5, 0.0}), Belief({0.3, 0.4, 0.3})};
  const Belief p({0.35, 0.35, 0.30});
  // Coordinates 1 and 2 differ only through the third point: w3*(0.4-0.3)=0 gives w3=0,
  // then 0.2 w1 + 0.5 w2 = 0.35 with w1 + w2 = 1 gives w1 = w2 = 0.5.
  CHECK(in_convex_hull(p, h));
  CHECK(hull_distance(p, h) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("in_convex_hull agrees with a brute-force weight grid") {
  Rng rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.index(2);
    const std::size_t k = 1 + rng.index(4);
    std::vector<Belief> hull;
    for (std::size_t j = 0; j < k; ++j) hull.push_back(Belief::normalized(rng.simplex(n)));
    Belief p = rng.index(2) == 0 ? Belief::normalized(rng.simplex(n)) : hull[0];
    if (rng.index(3) == 0 && k >= 2) {
      // A point known to be inside: a grid combination of the hull.
      std::vector<double> c(n, 0.0);
      for (std::size_t j = 0; j < k; ++j)
        for (std::size_t t = 0; t < n; ++t) c[t] += hull[j][t] / static_cast<double>(k);
      p = Belief::normalized(c);
    }
    const double brute = testing::brute_hull_distance(p, hull, 64);
    // The grid can miss the true optimum by at most (k-1)/64 * max coordinate spread.
    const double slack = static_cast<double>(k - 1) / 64.0;
    if (brute <= 1e-12) {
      CHECK(in_convex_hull(p, hull));
      ++checked;
    } else if (brute > slack + 1e-9) {
      CHECK_FALSE(in_convex_hull(p, hull));
      ++checked;
    }
    CHECK(hull_distance(p, hull) <= brute + 1e-9);
  }
  CHECK(checked > 150);
}

TEST_CASE("separating_hyperplane examples") {
  const std::vector<Belief> tri{Belief({0.2, 0.2, 0.6}), Belief({0.6, 0.2, 0.2}), Belief({0.2, 0.6, 0.2})};
  const Belief p({0.9, 0.05, 0.05});
  Hyperplane h = separating_hyperplane(p, tri);
  CHECK(h.evaluate(p) > 0.0);
  for (const auto& q : tri) CHECK(h.evaluate(q) < 0.0);

  Hyperplane h2 = separating_hyperplane(Belief({1, 0}), {Belief({0.5, 0.5})});
  CHECK(h2.normal[0] > 0.0);
  CHECK(h2.normal[1] < 0.0);
  CHECK(h2.evaluate(Belief({1, 0})) > 0.0);
  CHECK(h2.evaluate(Belief({0.5, 0.5})) < 0.0);

  const std::vector<Belief> verts{Belief({1, 0, 0}), Belief({0, 1, 0}), Belief({0, 0, 1})};
  try {
    separating_hyperplane(Belief::uniform(3), verts);
    FAIL("expected NoStrictSeparation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoStrictSeparation);
  }
}

TEST_CASE("separation round-trip on random instances") {
  Rng rng(77);
  int separated = 0, inside = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + rng.index(4);
    const std::size_t k = 1 + rng.index(5);
    std::vector<Belief> hull;
    for (std::size_t j = 0; j < k; ++j) hull.push_back(Belief::normalized(rng.simplex(n)));
    const Belief p = Belief::normalized(rng.simplex(n));
    if (in_convex_hull(p, hull)) {
      CHECK_THROWS_AS(separating_hyperplane(p, hull), Error);
      ++inside;
      continue;
    }
    try {
      Hyperplane h = separating_hyperplane(p, hull);
      double inf = 0.0;
      for (double a : h.normal) inf = std::max(inf, std::abs(a));
      CHECK(inf == doctest::Approx(1.0));
      CHECK(h.evaluate(p) > 0.0);
      for (const auto& q : hull) CHECK(h.evaluate(q) < 0.0);
      ++separated;
    } catch (const Error& e) {
      // Only points within the separation margin of the hull may fail.
      CHECK(hull_distance(p, hull) < 1e-8);
    }
  }
  CHECK(separated > 300);
  CHECK(inside > 0);
}
