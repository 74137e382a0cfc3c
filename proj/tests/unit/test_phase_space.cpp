// Copyright 2026 The berezin-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include "doctest.h"

#include "berezin/errors.hpp"
#include "berezin/phase_space.hpp"

using namespace berezin;

TEST_SUITE("phase_space") {

TEST_CASE("finite grid sizes and weights") {
  const QuadGrid g2 = finite_gabor_grid(2);
  CHECK(g2.size() == 4);
  for (double w : g2.weights()) CHECK(w == 0.5);
  const QuadGrid g8 = finite_gabor_grid(8);
  CHECK(g8.size() == 64);
  CHECK(g8.total_weight() == doctest::Approx(8.0).epsilon(1e-15));
  double column = 0.0;
  for (std::size_t j = 0; j < g8.size(); ++j) {
    if (g8.point(j).second == 0.0) column += g8.weight(j);
  }
  CHECK(column == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g8.origin() == PhasePoint{0.0, 0.0});
  CHECK_THROWS_AS(finite_gabor_grid(1), InvalidArgument);
}

TEST_CASE("plane grid includes endpoints") {
  const QuadGrid g = plane_grid(1, 1, 1, 1);
  CHECK(g.size() == 9);
  for (double w : g.weights()) CHECK(w == 1.0);
  const QuadGrid big = plane_grid(8, 8, 0.25, 0.25);
  CHECK(big.size() == 65 * 65);
  CHECK(big.total_weight() == doctest::Approx(65.0 * 65.0 * 0.0625).epsilon(1e-12));
  CHECK_THROWS_AS(plane_grid(1, 1, 2, 1), InvalidArgument);
  CHECK_THROWS_AS(plane_grid(1, 1, 0, 1), InvalidArgument);
}

TEST_CASE("affine grid weights") {
  const QuadGrid g = affine_grid(0.25, 4, 4, 1.0, 8);
  // Independent: log(16)/4 per scale cell, 2/8 per shift cell.
  const double dlog = std::log(16.0) / 4.0;
  CHECK(dlog == doctest::Approx(0.6931).epsilon(1e-4));
  for (double w : g.weights()) CHECK(w == doctest::Approx(dlog * 0.25).epsilon(1e-14));
  CHECK(std::fabs(g.total_weight() - std::log(16.0) * 2.0) < 1e-12);
  const QuadGrid one = affine_grid(1.0, 2.0, 1, 0.5, 1);
  CHECK(one.size() == 1);
  CHECK(one.weight(0) == doctest::Approx(std::log(2.0) * 1.0).epsilon(1e-14));
  CHECK_THROWS_AS(affine_grid(0.0, 1.0, 2, 1.0, 2), InvalidArgument);
}

TEST_CASE("distance examples") {
  CHECK(distance({0, 0}, {7, 0}, Geometry::finite_gabor(8)) == 1.0);
  CHECK(distance({0, 0}, {3, 4}, Geometry::plane()) == doctest::Approx(5.0));
  // cosh d = 1 + |z - z'|^2 / (2 Im z Im z') with z = i, z' = i e.
  const double e = std::exp(1.0);
  const double d = std::acosh(1.0 + (e - 1.0) * (e - 1.0) / (2.0 * e));
  CHECK(d == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(distance({1, 0}, {e, 0}, Geometry::affine()) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(distance({0, 0}, {1, 0}, Geometry::affine()), InvalidArgument);
}

TEST_CASE("action examples") {
  const Geometry g8 = Geometry::finite_gabor(8);
  CHECK(act(GroupElement::finite(1, 2, {0, 1}), {3, 4}, g8) == PhasePoint{4, 6});
  CHECK(act(GroupElement::finite(7, 7), {3, 4}, g8) == PhasePoint{2, 3});
  const PhasePoint y = act(GroupElement::affine(1.0, 0.5), {2.0, 1.0}, Geometry::affine());
  CHECK(y.first == 2.0);
  CHECK(y.second == doctest::Approx(0.5 / 2.0 + 1.0));
  for (const Geometry& g : {g8, Geometry::plane(), Geometry::affine()}) {
    const PhasePoint x = g.kind == GeometryKind::AffineHalfPlane ? PhasePoint{0.7, -1.3} : PhasePoint{3, 5};
    CHECK(act(identity_element(g), x, g) == x);
  }
  CHECK_THROWS_AS(act(GroupElement::affine(1, 0), {1, 1}, g8), InvalidArgument);
}

TEST_CASE("metric invariance, action law and inverse (seeded)") {
  std::mt19937_64 rng(20260101);
  for (const Geometry& g : {Geometry::finite_gabor(8), Geometry::plane(), Geometry::affine()}) {
    auto point = [&] {
      if (g.kind == GeometryKind::FiniteGabor) {
        std::uniform_int_distribution<int> u(0, g.N - 1);
        return PhasePoint{double(u(rng)), double(u(rng))};
      }
      std::uniform_real_distribution<double> u(-3, 3);
      if (g.kind == GeometryKind::AffineHalfPlane) return PhasePoint{std::exp(u(rng) / 2), u(rng)};
      return PhasePoint{u(rng), u(rng)};
    };
    for (int i = 0; i < 100; ++i) {
      const GroupElement h1 = random_element(g, rng);
      const GroupElement h2 = random_element(g, rng);
      const PhasePoint x = point();
      const PhasePoint y = point();
      CHECK(std::fabs(distance(act(h1, x, g), act(h1, y, g), g) - distance(x, y, g)) <= 1e-10);
      CHECK(distance(x, y, g) == doctest::Approx(distance(y, x, g)));
      const PhasePoint lhs = act(compose(h1, h2, g), x, g);
      const PhasePoint rhs = act(h1, act(h2, x, g), g);
      const double tol = g.kind == GeometryKind::FiniteGabor ? 0.0 : 1e-12 * (1 + std::fabs(lhs.second));
      CHECK(std::fabs(lhs.first - rhs.first) <= tol);
      CHECK(std::fabs(lhs.second - rhs.second) <= tol);
      const PhasePoint back = act(inverse(h1, g), act(h1, x, g), g);
      CHECK(distance(back, x, g) <= 1e-9);
    }
  }
}

TEST_CASE("heisenberg composition law on the centre") {
  // (p', q', z')(p, q, z) = (p + p', q + q', z z' e^{2 pi i p q' / N}) on Z_N.
  const Geometry g = Geometry::finite_gabor(8);
  const GroupElement a = GroupElement::finite(1, 3);
  const GroupElement b = GroupElement::finite(2, 5);
  const GroupElement ab = compose(a, b, g);
  CHECK(ab.first == 3);
  CHECK(ab.second == 0);
  CHECK(std::abs(std::abs(ab.phase) - 1.0) < 1e-14);
  const GroupElement e = compose(a, inverse(a, g), g);
  CHECK(std::abs(e.phase - std::complex<double>(1.0, 0.0)) < 1e-12);
}

TEST_CASE("ball integral") {
  const QuadGrid g = finite_gabor_grid(8);
  std::vector<double> zero(g.size(), 0.0), one(g.size(), 1.0), point(g.size(), 0.0);
  point[g.origin_index()] = 1.0;
  CHECK(ball_integral(zero, g, g.origin(), 3) == 0.0);
  CHECK(ball_integral(one, g, g.origin(), 100) == doctest::Approx(8.0));
  CHECK(ball_integral(point, g, g.origin(), 0.5) == doctest::Approx(1.0 / 8));
  const QuadGrid p = plane_grid(4, 4, 0.25, 0.25);
  std::vector<double> ones(p.size(), 1.0);
  double prev = 0.0;
  for (double R = 0.25; R < 6; R += 0.25) {
    const double v = ball_integral(ones, p, {0.3, -0.2}, R);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("nearest index and interior") {
  const QuadGrid p = plane_grid(2, 2, 0.5, 0.5);
  const auto j = p.nearest_index({0.26, -0.74});
  REQUIRE(j);
  CHECK(p.point(*j) == PhasePoint{0.5, -0.5});
  CHECK_FALSE(p.nearest_index({3.0, 0.0}));
  for (std::size_t i : p.interior_indices(1.0)) {
    CHECK(std::fabs(p.point(i).first) <= 1.0 + 1e-12);
    CHECK(std::fabs(p.point(i).second) <= 1.0 + 1e-12);
  }
  CHECK(grid_from_extent(p.extent()).fingerprint() == p.fingerprint());
}

}  // TEST_SUITE
