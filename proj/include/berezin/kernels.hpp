// Copyright 2026 The berezin-lab Authors
// SPDX-License-Identifier: Apache-2.0

// Batch kernels over a block of frame atoms. Each kernel exists twice: a
// serial reference and an OpenMP version. Both compute every output element
// with the same canonical reduction, so their results are bitwise equal for
// any thread count.

#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "berezin/frames.hpp"

namespace berezin {

/// Frame atoms for a subset of grid points, stored back to back, plus the
/// transposed index (which atoms touch each lattice sample).
struct FrameBlock {
  SignalLattice lattice;
  std::vector<std::size_t> grid_index;  // grid point of each atom
  std::vector<std::size_t> lo;
  std::vector<std::size_t> len;
  std::vector<std::size_t> offset;
  std::vector<cplx> values;
  // Atoms covering sample i: row_atom[row_start[i] .. row_start[i+1]), ascending,
  // with row_pos the position of sample i inside that atom.
  std::vector<std::size_t> row_start;
  std::vector<std::uint32_t> row_atom;
  std::vector<std::uint32_t> row_pos;

  std::size_t size() const { return grid_index.size(); }
  cplx value(std::size_t atom, std::size_t pos) const { return values[offset[atom] + pos]; }
};

FrameBlock build_block(const FrameFamily& F, const QuadGrid& grid, std::span<const std::size_t> indices);
FrameBlock build_block(const FrameFamily& F, const QuadGrid& grid);
/// Atoms at arbitrary points (probe sets); grid_index holds 0..m-1.
FrameBlock build_block(const FrameFamily& F, std::span<const PhasePoint> points);

/// Indices j with coefficient[j] != 0.
std::vector<std::size_t> nonzero_indices(std::span<const double> coefficient);

namespace serial {
std::vector<cplx> analysis(const FrameBlock& B, std::span<const cplx> f);
std::vector<cplx> synthesis(const FrameBlock& B, std::span<const cplx> c);
/// s * sum_a c_a k_a k_a^H, exactly Hermitian.
Eigen::MatrixXcd toeplitz(const FrameBlock& B, std::span<const double> c);
/// s * sum_a c_a psi_a phi_a^H for blocks over the same grid points.
Eigen::MatrixXcd mixed(const FrameBlock& phi, const FrameBlock& psi, std::span<const double> c);
/// sum_a c_a |<k_a, k_y>|^2 for every probe atom y.
std::vector<double> berezin(const FrameBlock& B, std::span<const double> c, const FrameBlock& probes);
}  // namespace serial

namespace omp {
std::vector<cplx> analysis(const FrameBlock& B, std::span<const cplx> f);
std::vector<cplx> synthesis(const FrameBlock& B, std::span<const cplx> c);
Eigen::MatrixXcd toeplitz(const FrameBlock& B, std::span<const double> c);
Eigen::MatrixXcd mixed(const FrameBlock& phi, const FrameBlock& psi, std::span<const double> c);
std::vector<double> berezin(const FrameBlock& B, std::span<const double> c, const FrameBlock& probes);
}  // namespace omp

/// Sets the OpenMP thread count; 0 leaves the runtime default.
void set_thread_count(int threads);
int thread_count();

}  // namespace berezin
