// Copyright 2026 The berezin-lab Authors
// SPDX-License-Identifier: Apache-2.0

// Toeplitz (localization) operators T_sigma f = sum_j sigma_j w_j <f, k_j> k_j,
// their mixed-window variants, spectra, shift operators and the order facts.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "berezin/frames.hpp"
#include "berezin/symbols.hpp"

namespace berezin {

inline constexpr Eigen::Index kDenseCap = 4096;

/// Dense matrix of an operator on the signal lattice. Since the inner
/// product is a multiple of the Euclidean one, the matrix is Hermitian
/// exactly when the operator is self-adjoint and shares its spectrum.
struct ToeplitzOperator {
  Eigen::MatrixXcd matrix;
  bool is_mixed = false;
  SignalLattice lattice;
  std::uint64_t grid_fingerprint = 0;
  std::string symbol_provenance;

  Eigen::Index dimension() const { return matrix.rows(); }
};

ToeplitzOperator assemble_toeplitz(const Symbol& sigma, const FrameFamily& F, const QuadGrid& grid,
                                   Eigen::Index cap = kDenseCap);

/// T f = sum_j sigma_j w_j <f, phi_j> psi_j.
ToeplitzOperator assemble_mixed(const Symbol& sigma, const FrameFamily& F_phi, const FrameFamily& F_psi,
                                const QuadGrid& grid, Eigen::Index cap = kDenseCap);

/// Matrix-free synthesis(sigma * analysis(f)).
HilbertVector apply_toeplitz(const Symbol& sigma, const FrameFamily& F, const QuadGrid& grid, const HilbertVector& f);

struct SpectrumReport {
  std::string kind = "eigenvalues";  // or "singular_values"
  std::vector<double> values;        // descending
  bool full = false;
  double trace = 0.0;                // real part of the matrix trace
  double operator_norm = 0.0;
  bool converged = true;

  /// Number of values strictly above eps.
  std::size_t eps_rank(double eps) const;
};

/// Full (k = nullopt) or top-k spectrum of a Hermitian operator. Throws
/// InvalidArgument for mixed operators; use svd_report for those.
SpectrumReport spectrum(const ToeplitzOperator& T, std::optional<int> k = std::nullopt);

/// Top-k spectrum of T_sigma without materializing it.
SpectrumReport spectrum_matrix_free(const Symbol& sigma, const FrameFamily& F, const QuadGrid& grid, int k);

SpectrumReport svd_report(const ToeplitzOperator& T);

struct TraceCheck {
  double lhs = 0.0;  // tr T
  double rhs = 0.0;  // sum_j sigma_j w_j ||k_j||^2
};

TraceCheck trace_identity_check(const ToeplitzOperator& T, const Symbol& sigma, const FrameFamily& F,
                                const QuadGrid& grid);

struct ShiftResult {
  HilbertVector vector;
  double truncated_fraction = 0.0;  // coefficient mass whose image left the grid
  double max_snap_distance = 0.0;
  std::optional<std::string> warning;  // set when truncated_fraction > 10%
};

/// S_h f = sum_j <f, k_j> w_j k_{snap(h x_j)}.
ShiftResult shift_apply(const FrameFamily& F, const QuadGrid& grid, const GroupElement& h, const HilbertVector& f);

/// Dense S_h = sum_j w_j k_{snap(h x_j)} k_j^H (images off the grid dropped).
Eigen::MatrixXcd shift_matrix(const FrameFamily& F, const QuadGrid& grid, const GroupElement& h);

/// ||S_h T_sigma S_h^* - T_{sigma_h}|| (spectral norm). h must lie in the
/// frame's invariant subgroup. On line lattices a positive interior_margin
/// compresses the difference to samples with |x| <= half_width - margin, since
/// translation cannot be unitary next to the lattice edge.
double conjugation_residual(const Symbol& sigma, const FrameFamily& F, const QuadGrid& grid, const GroupElement& h,
                            double interior_margin = 0.0);

struct OrderingResult {
  double ordering = 0.0;        // max(0, -lambda_min(T_max - T_sigma), -lambda_min(T_max - T_rho))
  double subadditivity = 0.0;   // max(0, -lambda_min(T_sigma + T_rho - T_max))
};

OrderingResult ordering_residual(const Symbol& sigma, const Symbol& rho, const FrameFamily& F, const QuadGrid& grid);

/// Smallest eigenvalue of a Hermitian matrix.
double lambda_min(const Eigen::MatrixXcd& A);

/// Row-major complex binary dump: {uint64 magic, uint64 n} then n*n (re, im)
/// double pairs, little endian.
inline constexpr std::uint64_t kMatrixMagic = 0x31584d4c42524542ULL;  // "BERBLMX1"
void export_matrix(const Eigen::MatrixXcd& M, const std::string& path);
Eigen::MatrixXcd import_matrix(const std::string& path);

}  // namespace berezin
