// Copyright 2026 The berezin-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"

#include "berezin/errors.hpp"
#include "berezin/symbols.hpp"

using namespace berezin;

namespace {

Symbol random_indicator(const QuadGrid& grid, std::mt19937_64& rng, double p = 0.3) {
  std::bernoulli_distribution coin(p);
  std::vector<double> s(grid.size());
  for (double& v : s) v = coin(rng) ? 1.0 : 0.0;
  return Symbol(grid, std::move(s), "random");
}

}  // namespace

TEST_SUITE("symbols") {

TEST_CASE("indicator basics") {
  const QuadGrid g = finite_gabor_grid(8);
  const Geometry geo = g.geometry();
  const Symbol empty = indicator(g, SetSpec(BallUnion{}, geo));
  for (double v : empty.samples()) CHECK(v == 0.0);
  CHECK(empty.sup_bound() == 0.0);
  const Symbol all = indicator(g, SetSpec(BallUnion{{g.origin()}, {1e9}}, geo));
  for (double v : all.samples()) CHECK(v == 1.0);
  CHECK(all.sup_bound() == 1.0);
  CHECK_THROWS_AS(SetSpec(BallUnion{{g.origin()}, {-1.0}}, geo), InvalidArgument);
  CHECK_THROWS_AS(SetSpec(BallUnion{{g.origin(), g.origin()}, {1.0}}, geo), InvalidArgument);
  CHECK_THROWS_AS(Symbol(g, std::vector<double>(3, 0.0), "short"), InvalidArgument);
}

TEST_CASE("ball union mass by direct scan") {
  const QuadGrid g = plane_grid(8, 8, 0.125, 0.125);
  BallUnion u;
  for (int n = 1; n <= 10; ++n) {
    u.centers.push_back({double(n * n), 0.0});
    u.radii.push_back(1.0 / n);
  }
  const Symbol s = indicator(g, SetSpec(u, g.geometry()));
  double brute = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    bool in = false;
    for (int n = 1; n <= 10; ++n) {
      in = in || std::hypot(g.point(j).first - n * n, g.point(j).second) < 1.0 / n - 1e-12;
    }
    if (in) brute += g.weight(j);
  }
  CHECK(brute > 0.0);
  CHECK(l1_norm(s, g) == doctest::Approx(brute).epsilon(1e-14));
}

TEST_CASE("strip, band and predicate membership") {
  const Geometry plane = Geometry::plane();
  const SetSpec strip(Strip{Axis::Second, 0.5, 0.5}, plane);
  CHECK(strip.contains({100.0, 0.5}));
  CHECK(strip.contains({-3.0, 1.0}));
  CHECK_FALSE(strip.contains({0.0, 1.25}));
  const SetSpec band(Band{Axis::First, 1, 2}, Geometry::affine());
  CHECK(band.contains({1.5, 40.0}));
  CHECK_FALSE(band.contains({2.5, 0.0}));
  const SetSpec pred(Predicate{"abs(t) < 1 && w > 0"}, plane);
  CHECK(pred.contains({0.5, 0.5}));
  CHECK_FALSE(pred.contains({-0.5, 0.5}));
  CHECK_THROWS_AS(SetSpec(Predicate{"x < 1"}, plane), InvalidArgument);
  CHECK(coordinate_names(Geometry::finite_gabor(4)) == std::vector<std::string>{"p", "q"});
}

TEST_CASE("translates") {
  const QuadGrid g = finite_gabor_grid(8);
  std::mt19937_64 rng(2);
  std::vector<double> s(g.size());
  std::uniform_real_distribution<double> u(0, 1);
  for (double& v : s) v = u(rng);
  const Symbol sigma(g, s, "random");
  const Symbol same = translate_symbol(sigma, identity_element(g.geometry()), g);
  CHECK(std::equal(same.samples().begin(), same.samples().end(), sigma.samples().begin()));
  const int q0 = 3;
  const Symbol moved = translate_symbol(sigma, GroupElement::finite(0, q0), g);
  for (int p = 0; p < 8; ++p) {
    for (int q = 0; q < 8; ++q) CHECK(moved[p * 8 + q] == sigma[p * 8 + (q - q0 + 8) % 8]);
  }
  // Indicators translate through their set.
  const Symbol pt = indicator(g, SetSpec(BallUnion{{{1, 1}}, {0.5}}, g.geometry()));
  const Symbol pt_moved = translate_symbol(pt, GroupElement::finite(2, 3), g);
  CHECK(pt_moved[3 * 8 + 4] == 1.0);
  CHECK(l1_norm(pt_moved, g) == doctest::Approx(1.0 / 8));

  const QuadGrid a = affine_grid(0.25, 4, 8, 4, 32);
  const Symbol band = indicator(a, SetSpec(Band{Axis::First, 1, 2}, a.geometry()));
  for (double b : {0.25, -1.5, 3.0}) {
    const Symbol t = translate_symbol(band, GroupElement::affine(1, b), a);
    CHECK(std::equal(t.samples().begin(), t.samples().end(), band.samples().begin()));
  }
}

TEST_CASE("pointwise max and complement") {
  const QuadGrid g = finite_gabor_grid(8);
  std::mt19937_64 rng(8);
  const Symbol a = random_indicator(g, rng), zero = Symbol::constant(g, 0.0);
  const Symbol m0 = pointwise_max(a, zero), mm = pointwise_max(a, a);
  CHECK(std::equal(m0.samples().begin(), m0.samples().end(), a.samples().begin()));
  CHECK(std::equal(mm.samples().begin(), mm.samples().end(), a.samples().begin()));
  const SetSpec A(BallUnion{{{0, 0}}, {1.5}}, g.geometry());
  const SetSpec B(Strip{Axis::First, 4, 0}, g.geometry());
  const Symbol ab = pointwise_max(indicator(g, A), indicator(g, B));
  const Symbol u = Symbol::indicator(g, {A, B});
  for (std::size_t j = 0; j < g.size(); ++j) {
    CHECK(ab[j] == u[j]);
    CHECK(u[j] == ((A.contains(g.point(j)) || B.contains(g.point(j))) ? 1.0 : 0.0));
  }
  const Symbol c = complement(a);
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(c[j] == 1.0 - a[j]);
  CHECK_THROWS_AS(pointwise_max(a, Symbol::constant(finite_gabor_grid(4), 0.0)), InvalidArgument);
}

TEST_CASE("translate supremum: zero and invariant symbols") {
  const QuadGrid g = finite_gabor_grid(8);
  const FrameFamily F = make_finite_gabor(builtin_window("gaussian", SignalLattice::cyclic(8)));
  std::vector<GroupElement> cand;
  for (int s = 1; s <= 8; ++s) cand.push_back(GroupElement::finite(0, s % 8));
  const auto probes = default_probes(g, 1);
  SupOptions unbudgeted;
  unbudgeted.budget_radius = std::numeric_limits<double>::infinity();
  const SupResult zero = sup_translates_select(Symbol::constant(g, 0.0), F, g, cand, probes, unbudgeted);
  CHECK(zero.selected == std::vector<std::size_t>{0, 1, 2, 3, 4, 5});
  for (double v : zero.rho.samples()) CHECK(v == 0.0);
  for (const SupStage& st : zero.stages) CHECK(st.bound == 0.0);
  // With the unit budget the shifts 2..6 leave B(e, 1) once combined.
  CHECK_THROWS_AS(sup_translates_select(Symbol::constant(g, 0.0), F, g, cand, probes), StageFailure);

  const QuadGrid a = affine_grid(0.25, 4, 8, 4, 32);
  const FrameFamily W = make_affine_wavelet(builtin_window("mexican_hat", SignalLattice::line(4, 1.0 / 16)), a);
  const Symbol band = indicator(a, SetSpec(Band{Axis::First, 1, 2}, a.geometry()));
  std::vector<GroupElement> shifts;
  for (int k = 1; k <= 8; ++k) shifts.push_back(GroupElement::affine(1, std::exp2(-k)));
  SupOptions opt;
  opt.stages = 3;
  const SupResult r = sup_translates_select(band, W, a, shifts, default_probes(a, 16), opt);
  CHECK(std::equal(r.rho.samples().begin(), r.rho.samples().end(), band.samples().begin()));
  for (const SupStage& st : r.stages) CHECK(st.bound == 0.0);
}

TEST_CASE("translate supremum: exhaustive product check") {
  const int N = 16;
  const QuadGrid g = finite_gabor_grid(N);
  const Geometry geo = g.geometry();
  const FrameFamily F = make_finite_gabor(builtin_window("gaussian", SignalLattice::cyclic(N)));
  const Symbol point = indicator(g, SetSpec(BallUnion{{{0, 0}}, {0.5}}, geo));
  std::vector<GroupElement> cand;
  for (int s = 1; s < N; ++s) cand.push_back(GroupElement::finite(0, s));
  SupOptions opt;
  opt.stages = 3;
  opt.budget_radius = std::numeric_limits<double>::infinity();
  const SupResult r = sup_translates_select(point, F, g, cand, default_probes(g, 1), opt);
  REQUIRE(r.selected.size() == 3);
  REQUIRE(r.products.size() == 8);
  CHECK(r.rho.sup_bound() == point.sup_bound());
  // rho = max over subsets I of sigma translated by the product over I.
  std::vector<double> oracle(g.size(), 0.0);
  for (unsigned mask = 0; mask < 8; ++mask) {
    GroupElement h = identity_element(geo);
    for (int k = 0; k < 3; ++k) {
      if (mask & (1u << k)) h = compose(cand[r.selected[k]], h, geo);
    }
    CHECK(act(h, {0, 0}, geo) == act(r.products[mask], {0, 0}, geo));
    const Symbol t = translate_symbol(point, h, g);
    for (std::size_t j = 0; j < g.size(); ++j) {
      oracle[j] = std::max(oracle[j], t[j]);
      CHECK(r.rho[j] >= t[j]);
    }
  }
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(r.rho[j] == oracle[j]);
  CHECK(l1_norm(r.rho, g) <= 8.0 / N + 1e-15);
  for (const SupStage& st : r.stages) CHECK(st.bound <= 3.0 * std::exp2(-st.k) + 1e-15);
}

TEST_CASE("translate supremum: stage failure") {
  const int N = 8;
  const QuadGrid g = finite_gabor_grid(N);
  const FrameFamily F = make_finite_gabor(builtin_window("dirac", SignalLattice::cyclic(N)));
  // Column q = 0: its transform is 1 on the column and 0 elsewhere. Shifts by
  // 3 pass stage 1 (change 1 <= 3/2) and fail stage 2 (change 1 > 3/4).
  const Symbol column = indicator(g, SetSpec(Strip{Axis::Second, 0, 0}, g.geometry()));
  const std::vector<GroupElement> cand(3, GroupElement::finite(0, 3));
  SupOptions opt;
  opt.budget_radius = std::numeric_limits<double>::infinity();
  try {
    sup_translates_select(column, F, g, cand, default_probes(g, 1), opt);
    CHECK(false);
  } catch (const StageFailure& e) {
    CHECK(e.stage() == 2);
    CHECK(e.best_bound() == doctest::Approx(1.0));
  }
}

}  // TEST_SUITE
