// Copyright 2026 The berezin-lab Authors
// SPDX-License-Identifier: Apache-2.0

// Continuous Parseval frame families k_x for the three geometries, with
// analysis / synthesis transforms on a quadrature grid.
//
// Phase convention: k_{(p,q)}(x) = e^{2 pi i p (x - q)/N} phi(x - q) and
// k_{(w,t)}(x) = e^{2 pi i w (x - t)} phi(x - t). Grams differ from the
// e^{2 pi i p x} convention by a phase only.

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "berezin/phase_space.hpp"
#include "berezin/signal.hpp"

namespace berezin {

enum class WindowNormalization { L2, Admissible, None };

std::string to_string(WindowNormalization n);

/// A frame vector restricted to its index support: values for lattice
/// indices [lo, lo + values.size()).
struct FrameAtom {
  std::size_t lo = 0;
  std::vector<cplx> values;
};

class FrameFamily {
 public:
  FrameFamily(Geometry geometry, HilbertVector window, WindowNormalization normalization,
              std::string window_name);

  const Geometry& geometry() const { return geometry_; }
  const SignalLattice& lattice() const { return window_.lattice(); }
  const HilbertVector& window() const { return window_; }
  const std::string& window_name() const { return window_name_; }
  WindowNormalization normalization() const { return normalization_; }
  /// Window norm (or admissibility constant, for Admissible) before scaling.
  double pre_normalization_value() const { return pre_value_; }

  FrameAtom atom(const PhasePoint& x) const;
  HilbertVector vector_at(const PhasePoint& x) const;

  /// Membership in the canonical invariant subgroup: pure time shifts
  /// (0, q, 1) for Heisenberg geometries, (1, b) for the affine group.
  bool in_invariant_subgroup(const GroupElement& h) const;
  /// Element of the invariant subgroup with the given shift parameter.
  GroupElement invariant_element(double shift) const;
  GroupElement sample_invariant_subgroup(std::mt19937_64& rng) const;

 private:
  Geometry geometry_;
  HilbertVector window_;
  WindowNormalization normalization_;
  std::string window_name_;
  double pre_value_ = 1.0;
  std::size_t support_lo_ = 0;
  std::size_t support_hi_ = 0;
};

FrameFamily make_finite_gabor(const HilbertVector& phi, std::string window_name = "custom",
                              WindowNormalization normalization = WindowNormalization::L2);
FrameFamily make_plane_gabor(const HilbertVector& phi, const QuadGrid& grid,
                             std::string window_name = "custom",
                             WindowNormalization normalization = WindowNormalization::L2);
FrameFamily make_affine_wavelet(const HilbertVector& psi, const QuadGrid& grid,
                                std::string window_name = "custom",
                                WindowNormalization normalization = WindowNormalization::Admissible);

/// Signal lattice matched to a plane grid: step s = dt / max(1, round(2 W dt))
/// so the frequency grid spans one full period of the sampled modulations,
/// half-width max(t_half - margin, t_half / 2).
SignalLattice matched_lattice(const QuadGrid& plane, double margin = 2.0);

/// c_j = <f, k_{x_j}> for every grid point, in grid order.
std::vector<cplx> analysis(const FrameFamily& F, const QuadGrid& grid, const HilbertVector& f);

/// sum_j coeffs_j w_j k_{x_j}.
HilbertVector synthesis(const FrameFamily& F, const QuadGrid& grid, std::span<const cplx> coeffs);

/// Trial vectors for residual checks. FiniteGabor draws Gaussian vectors on
/// Z_N. Real geometries synthesize random coefficients on grid points at
/// least `margin` inside the truncation boundary, so the trial class is the
/// part of the Hilbert space the truncated grid is meant to represent.
std::vector<HilbertVector> trial_vectors(const FrameFamily& F, const QuadGrid& grid, int trials,
                                         std::uint64_t seed, double margin = 3.0);

/// max over trial vectors f of ||synthesis(analysis(f)) - f||.
double frame_operator_residual(const FrameFamily& F, const QuadGrid& grid, int trials,
                               std::uint64_t seed);
double frame_operator_residual(const FrameFamily& F, const QuadGrid& grid,
                               std::span<const HilbertVector> trials);

/// <k_x, k_y> under the weighted inner product.
cplx kernel_gram(const FrameFamily& F, const PhasePoint& x, const PhasePoint& y);

void check_frame_grid(const FrameFamily& F, const QuadGrid& grid);

}  // namespace berezin
