// Copyright 2026 The berezin-lab Authors
// SPDX-License-Identifier: Apache-2.0

// Experiments built on the operator layer: uncertainty constants, the
// compactness proxy, L1 symbol bounds, translate independence and the strip
// counterexample.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "berezin/berezin.hpp"
#include "berezin/operators.hpp"

namespace berezin {

struct UncertaintyOptions {
  int trials = 100;
  std::uint64_t seed = 1;
  /// Frames whose measured residual exceeds this get the caveat path.
  double parseval_tolerance = 1e-6;
  double trial_margin = 3.0;
};

struct UncertaintyResult {
  double c_estimate = 0.0;
  double top_sigma_eigenvalue = 0.0;
  double verification = 0.0;  // min Rayleigh quotient of T_{1-sigma} over trials and witnesses
  std::optional<double> witness_value;  // smallest quotient among the witnesses, if any
  double frame_residual = 0.0;
  double frame_lower_bound = 1.0;
  bool frame_caveat = false;  // c uses the measured lower frame bound
  int trials = 0;
  std::uint64_t seed = 0;
  bool converged = true;
  // Filled by l1_symbol_bound.
  std::optional<double> l1_norm;
  std::optional<double> l1_bound;
};

/// c = lambda_min(T_{1 - sigma}) estimated as (lower frame bound) - lambda_max(T_sigma).
UncertaintyResult uncertainty_constant(const Symbol& sigma, const FrameFamily& F, const QuadGrid& grid,
                                       const UncertaintyOptions& options = {},
                                       std::span<const HilbertVector> witnesses = {});

/// Lower and upper frame bounds of the truncated family (extreme eigenvalues
/// of the frame operator).
struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
};
FrameBounds frame_bounds(const FrameFamily& F, const QuadGrid& grid);

struct CompactnessOptions {
  double eps = 0.1;
  double delta = 0.25;          // grid step in both coordinates
  double lattice_margin = 2.0;
  Eigen::Index cap = kDenseCap;
};

/// For each half-width T in the schedule: plane grid (T, T, delta, delta), the
/// window sampled on the matched lattice, T_{1_E}, eps_rank and lambda_max.
/// sub_verdicts["compactness"] is compact-consistent (last two increments
/// <= 1), non-compact-consistent (rank ratio >= 0.5 x extent ratio at each
/// step) or inconclusive.
DecayReport compactness_proxy(const SetSpec& E, const std::string& window, std::span<const double> extents,
                              const CompactnessOptions& options = {});

UncertaintyResult l1_symbol_bound(const Symbol& sigma, const FrameFamily& F, const QuadGrid& grid,
                                  const UncertaintyOptions& options = {});

struct TranslateGram {
  Eigen::MatrixXcd gram;
  double min_eigenvalue = 0.0;
  double determinant = 0.0;
  double max_truncated_fraction = 0.0;
};

/// Gram of f_k = S_{h_k} ... S_{h_1} f for k = 1..n.
TranslateGram translate_gram(const FrameFamily& F, const QuadGrid& grid, const HilbertVector& f,
                             std::span<const GroupElement> h_list);

struct StripCounterexample {
  double max_outside = 0.0;
  double strip_halfwidth = 0.0;
  HilbertVector window;   // 1_{[c - K1, c + K1)}, unit norm
  HilbertVector witness;  // 1_{[c - K2, c + K2)}, unit norm
  std::size_t points_outside = 0;
};

/// Box window and box signal sharing the centre c (default 1/2, so K1 = K2 =
/// 1/2 gives the built-in box 1_{[0,1)}). V_phi f vanishes off the strip
/// |t| < K1 + K2; max_outside is the largest |coefficient| at grid points
/// with |t| >= K1 + K2.
StripCounterexample strip_counterexample(double phi_halfwidth, double f_halfwidth, const QuadGrid& grid,
                                         double center = 0.5);

}  // namespace berezin
