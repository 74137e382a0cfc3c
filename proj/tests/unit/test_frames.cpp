// Copyright 2026 The berezin-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include "doctest.h"

#include "berezin/errors.hpp"
#include "berezin/frames.hpp"

using namespace berezin;

namespace {

constexpr double kPi = 3.14159265358979323846;

HilbertVector random_window(int N, std::mt19937_64& rng) {
  return random_unit_vector(SignalLattice::cyclic(N), rng);
}

}  // namespace

TEST_SUITE("frames") {

TEST_CASE("finite gabor with dirac window") {
  const int N = 8;
  const SignalLattice lat = SignalLattice::cyclic(N);
  const FrameFamily F = make_finite_gabor(builtin_window("dirac", lat), "dirac");
  const QuadGrid grid = finite_gabor_grid(N);
  std::mt19937_64 rng(7);
  const HilbertVector f = random_unit_vector(lat, rng);
  const auto c = analysis(F, grid, f);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const int p = static_cast<int>(grid.point(j).first);
    const int q = static_cast<int>(grid.point(j).second);
    // <f, k_(p,q)> = f(q) conj(e^{2 pi i p (q - q)/N}) = f(q).
    CHECK(std::abs(c[j] - f[q]) < 1e-14);
    (void)p;
  }
  // Reconstruction by direct summation over the 64 elements.
  std::vector<cplx> direct(N, 0.0);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const HilbertVector k = F.vector_at(grid.point(j));
    for (int x = 0; x < N; ++x) direct[x] += c[j] * grid.weight(j) * k[x];
  }
  for (int x = 0; x < N; ++x) CHECK(std::abs(direct[x] - f[x]) < 1e-12);
  CHECK((synthesis(F, grid, c) - f).norm() < 1e-12);
}

TEST_CASE("constant window overlaps") {
  const int N = 8;
  const SignalLattice lat = SignalLattice::cyclic(N);
  const FrameFamily F = make_finite_gabor(HilbertVector(lat, std::vector<cplx>(N, 1.0 / std::sqrt(8.0))));
  for (int q = 0; q < N; ++q) CHECK(std::abs(kernel_gram(F, {0, 0}, {0, double(q)}) - 1.0) < 1e-14);
}

TEST_CASE("finite parseval identity across N and windows") {
  std::mt19937_64 rng(11);
  for (int N : {2, 4, 8, 16, 64}) {
    const QuadGrid grid = finite_gabor_grid(N);
    for (int w = 0; w < 20; ++w) {
      const FrameFamily F = make_finite_gabor(random_window(N, rng));
      CHECK(std::fabs(F.window().norm() - 1.0) < 1e-12);
      const HilbertVector f = random_unit_vector(F.lattice(), rng);
      const auto c = analysis(F, grid, f);
      double energy = 0.0;
      for (std::size_t j = 0; j < c.size(); ++j) energy += std::norm(c[j]) * grid.weight(j);
      CHECK(std::fabs(energy - 1.0) < 1e-10);
      if (w < 3) CHECK(frame_operator_residual(F, grid, 4, 99 + w) < 1e-10);
    }
  }
}

TEST_CASE("finite gabor errors") {
  const SignalLattice lat = SignalLattice::cyclic(8);
  CHECK_THROWS_AS(make_finite_gabor(HilbertVector(lat)), InvalidArgument);
  const FrameFamily F = make_finite_gabor(builtin_window("gaussian", lat));
  CHECK_THROWS_AS(analysis(F, finite_gabor_grid(4), HilbertVector(lat)), InvalidArgument);
  CHECK_THROWS_AS(synthesis(F, finite_gabor_grid(8), std::vector<cplx>(3)), InvalidArgument);
  CHECK_THROWS_AS(frame_operator_residual(F, finite_gabor_grid(8), 0, 1), InvalidArgument);
}

TEST_CASE("finite norm constancy and gram invariance") {
  std::mt19937_64 rng(5);
  const int N = 16;
  const FrameFamily F = make_finite_gabor(random_window(N, rng));
  const Geometry g = F.geometry();
  const double ke = F.vector_at({0, 0}).norm();
  std::uniform_int_distribution<int> u(0, N - 1);
  for (int i = 0; i < 100; ++i) {
    const PhasePoint x{double(u(rng)), double(u(rng))};
    const PhasePoint y{double(u(rng)), double(u(rng))};
    CHECK(std::fabs(F.vector_at(x).norm() - ke) < 1e-10);
    const GroupElement h = random_element(g, rng);
    CHECK(std::fabs(std::abs(kernel_gram(F, act(h, x, g), act(h, y, g))) - std::abs(kernel_gram(F, x, y))) < 1e-10);
    const GroupElement s = F.sample_invariant_subgroup(rng);
    CHECK(F.in_invariant_subgroup(s));
    CHECK(std::abs(kernel_gram(F, act(s, x, g), act(s, y, g)) - kernel_gram(F, x, y)) < 1e-10);
  }
  CHECK_FALSE(F.in_invariant_subgroup(GroupElement::finite(1, 0)));
}

TEST_CASE("plane gabor gaussian") {
  const QuadGrid grid = plane_grid(8, 8, 0.25, 0.25);
  const SignalLattice lat = matched_lattice(grid);
  const HilbertVector phi = builtin_window("gaussian", lat);
  const FrameFamily F = make_plane_gabor(phi, grid, "gaussian");
  CHECK(std::fabs(F.window().norm() - 1.0) < 1e-12);
  const HilbertVector k0 = F.vector_at({0, 0});
  CHECK((k0 - F.window()).norm() < 1e-15);
  for (double t : {0.25, 0.5, 1.0, 2.0}) {
    CHECK(std::fabs(std::abs(kernel_gram(F, {0, 0}, {0, t})) - std::exp(-kPi * t * t / 2)) < 1e-6);
  }
  for (const auto& [x, y] : {std::pair<PhasePoint, PhasePoint>{{0.5, -1}, {1.5, 0.25}},
                             {{-2, 1}, {-1.25, 1.5}}, {{0, 0}, {0.75, 0.75}}}) {
    const double dw = x.first - y.first, dt = x.second - y.second;
    CHECK(std::fabs(std::abs(kernel_gram(F, x, y)) - std::exp(-kPi * (dt * dt + dw * dw) / 2)) < 1e-6);
  }
  std::mt19937_64 rng(3);
  const Geometry g = F.geometry();
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 100; ++i) {
    const PhasePoint x{std::round(u(rng) * 4) / 4, std::round(u(rng) * 4) / 4};
    const PhasePoint y{std::round(u(rng) * 4) / 4, std::round(u(rng) * 4) / 4};
    CHECK(std::fabs(F.vector_at(x).norm() - 1.0) < 1e-3);
    const GroupElement h = GroupElement::heisenberg(std::round(u(rng) * 4) / 4, std::round(u(rng) * 4) / 4);
    CHECK(std::fabs(std::abs(kernel_gram(F, act(h, x, g), act(h, y, g))) - std::abs(kernel_gram(F, x, y))) < 1e-3);
    const GroupElement s = F.invariant_element(std::round(u(rng) * 4) / 4);
    CHECK(std::abs(kernel_gram(F, act(s, x, g), act(s, y, g)) - kernel_gram(F, x, y)) < 1e-3);
  }
  CHECK(frame_operator_residual(F, grid, 5, 1) < 1e-2);
  CHECK_THROWS_AS(make_plane_gabor(builtin_window("gaussian", SignalLattice::line(4, 0.3)), grid), InvalidArgument);
  CHECK_THROWS_AS(make_plane_gabor(phi, finite_gabor_grid(4)), InvalidArgument);
}

TEST_CASE("plane round trip on the acceptance grid" * doctest::timeout(120)) {
  const QuadGrid grid = plane_grid(8, 8, 0.125, 0.125);
  const FrameFamily F = make_plane_gabor(builtin_window("gaussian", matched_lattice(grid)), grid, "gaussian");
  const double r = frame_operator_residual(F, grid, 3, 2);
  MESSAGE("plane acceptance-grid residual " << r);
  CHECK(r < 1e-2);
}

TEST_CASE("affine wavelet atoms") {
  // At a = 1/4 the default step 1/32 leaves 8 samples per unit of the dilated
  // window, a 1.2e-3 norm error; 1/64 halves the spacing.
  const SignalLattice lat = SignalLattice::line(16, 1.0 / 64);
  const QuadGrid grid = affine_grid(0.25, 4, 8, 4, 32);
  const FrameFamily M = make_affine_wavelet(builtin_window("mexican_hat", lat), grid, "mexican_hat");
  CHECK((M.vector_at({1, 0}) - M.window()).norm() < 1e-14);
  const double n0 = M.window().norm();
  for (double a : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    for (double b : {-1.0, 0.0, 0.75}) CHECK(std::fabs(M.vector_at({a, b}).norm() - n0) < 1e-3 * n0);
  }
  const FrameFamily H = make_affine_wavelet(builtin_window("haar", lat), grid, "haar");
  const double h0 = std::real(kernel_gram(H, {1, 0}, {1, 0}));
  CHECK(std::fabs(std::real(kernel_gram(H, {1, 0}, {1, 0})) / h0 - 1.0) < 1e-14);
  CHECK(std::abs(kernel_gram(H, {1, 0}, {1, 1})) < 1e-14);
  // Small shifts: W(1, b) / W(1, 0) = 1 - 3|b|.
  CHECK(std::fabs(std::real(kernel_gram(H, {1, 0}, {1, 0.125})) / h0 - (1 - 3 * 0.125)) < 1e-2);
  CHECK(M.in_invariant_subgroup(GroupElement::affine(1, 0.3)));
  CHECK_FALSE(M.in_invariant_subgroup(GroupElement::affine(2, 0)));
  CHECK_THROWS_AS(make_affine_wavelet(builtin_window("haar", lat), plane_grid(2, 2, 1, 1)), InvalidArgument);
}

TEST_CASE("affine haar residual shrinks with extent") {
  // Fixed trial class: unit combinations of Haar atoms with a in [1/2, 2] and
  // |b| <= 1, the same vectors for every extent.
  const SignalLattice lat = SignalLattice::line(4, 1.0 / 128);
  const FrameFamily ref = make_affine_wavelet(builtin_window("haar", lat), affine_grid(0.5, 2, 2, 1, 2), "haar");
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<HilbertVector> trials;
  for (int t = 0; t < 3; ++t) {
    HilbertVector v(lat);
    for (int k = 0; k < 6; ++k) v = v + ref.vector_at({std::exp2(u(rng)), u(rng)}).scaled(cplx(u(rng), u(rng)));
    trials.push_back(v.scaled(1.0 / v.norm()));
  }
  double prev = 1e300;
  for (int octaves : {2, 4, 6}) {
    const double a_min = std::exp2(-octaves), a_max = std::exp2(octaves);
    const double b_half = 4.0 / a_min;
    const QuadGrid grid = affine_grid(a_min, a_max, 8 * octaves, b_half, static_cast<int>(32 * b_half));
    const FrameFamily F = make_affine_wavelet(builtin_window("haar", lat), grid, "haar");
    const double r = frame_operator_residual(F, grid, trials);
    MESSAGE("haar a in [2^-" << octaves << ", 2^" << octaves << "]: residual " << r);
    CHECK(r < prev);
    prev = r;
  }
}

}  // TEST_SUITE
