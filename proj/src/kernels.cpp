// Copyright 2026 The berezin-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "berezin/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <limits>
#include <cstddef>
#include <numeric>

#include "berezin/errors.hpp"
#include "berezin/reduce.hpp"

namespace berezin {

namespace {

FrameBlock assemble_block(SignalLattice lattice, std::vector<FrameAtom> atoms, std::vector<std::size_t> index) {
  FrameBlock B;
  B.lattice = lattice;
  const std::size_t m = atoms.size();
  B.grid_index = std::move(index);
  B.lo.resize(m);
  B.len.resize(m);
  B.offset.resize(m);
  std::size_t total = 0;
  for (std::size_t a = 0; a < m; ++a) {
    B.lo[a] = atoms[a].lo;
    B.len[a] = atoms[a].values.size();
    B.offset[a] = total;
    total += B.len[a];
  }
  B.values.resize(total);
  for (std::size_t a = 0; a < m; ++a) {
    std::copy(atoms[a].values.begin(), atoms[a].values.end(), B.values.begin() + B.offset[a]);
  }
  const std::size_t n = B.lattice.n;
  std::vector<std::size_t> count(n + 1, 0);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t i = B.lo[a]; i < B.lo[a] + B.len[a]; ++i) ++count[i + 1];
  }
  std::partial_sum(count.begin(), count.end(), count.begin());
  B.row_start = count;
  B.row_atom.resize(total);
  B.row_pos.resize(total);
  std::vector<std::size_t> fill(B.row_start.begin(), B.row_start.end() - 1);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t p = 0; p < B.len[a]; ++p) {
      const std::size_t slot = fill[B.lo[a] + p]++;
      B.row_atom[slot] = static_cast<std::uint32_t>(a);
      B.row_pos[slot] = static_cast<std::uint32_t>(p);
    }
  }
  return B;
}

}  // namespace

FrameBlock build_block(const FrameFamily& F, const QuadGrid& grid, std::span<const std::size_t> indices) {
  check_frame_grid(F, grid);
  const std::size_t m = indices.size();
  if (m > std::numeric_limits<std::uint32_t>::max()) throw ResourceError("frame block too large");
  std::vector<FrameAtom> atoms(m);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t a = 0; a < static_cast<std::ptrdiff_t>(m); ++a) {
    atoms[a] = F.atom(grid.point(indices[a]));
  }
  return assemble_block(F.lattice(), std::move(atoms), std::vector<std::size_t>(indices.begin(), indices.end()));
}

FrameBlock build_block(const FrameFamily& F, std::span<const PhasePoint> points) {
  const std::size_t m = points.size();
  if (m > std::numeric_limits<std::uint32_t>::max()) throw ResourceError("frame block too large");
  for (const PhasePoint& x : points) validate_point(x, F.geometry());
  std::vector<FrameAtom> atoms(m);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t a = 0; a < static_cast<std::ptrdiff_t>(m); ++a) atoms[a] = F.atom(points[a]);
  std::vector<std::size_t> index(m);
  std::iota(index.begin(), index.end(), std::size_t{0});
  return assemble_block(F.lattice(), std::move(atoms), std::move(index));
}

FrameBlock build_block(const FrameFamily& F, const QuadGrid& grid) {
  std::vector<std::size_t> all(grid.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return build_block(F, grid, all);
}

std::vector<std::size_t> nonzero_indices(std::span<const double> coefficient) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < coefficient.size(); ++j) {
    if (coefficient[j] != 0.0) out.push_back(j);
  }
  return out;
}

namespace {

// Per-element bodies shared by both drivers.

cplx analysis_elem(const FrameBlock& B, std::span<const cplx> f, std::size_t a) {
  const std::size_t lo = B.lo[a];
  const cplx* v = B.values.data() + B.offset[a];
  return B.lattice.step *
         tree_sum_complex(0, B.len[a], [&](std::size_t p) { return f[lo + p] * std::conj(v[p]); });
}

cplx synthesis_elem(const FrameBlock& B, std::span<const cplx> c, std::size_t i) {
  const std::size_t r0 = B.row_start[i];
  return tree_sum_complex(r0, B.row_start[i + 1], [&](std::size_t r) {
    return c[B.row_atom[r]] * B.value(B.row_atom[r], B.row_pos[r]);
  });
}

void toeplitz_row(const FrameBlock& B, std::span<const double> c, std::size_t x, Eigen::MatrixXcd& M) {
  const std::size_t r0 = B.row_start[x];
  const std::size_t r1 = B.row_start[x + 1];
  if (r0 == r1) return;
  std::size_t hi = x + 1;
  for (std::size_t r = r0; r < r1; ++r) hi = std::max(hi, B.lo[B.row_atom[r]] + B.len[B.row_atom[r]]);
  const double s = B.lattice.step;
  for (std::size_t y = x; y < hi; ++y) {
    const cplx v = s * tree_sum_complex(r0, r1, [&](std::size_t r) -> cplx {
      const std::size_t a = B.row_atom[r];
      if (y < B.lo[a] || y >= B.lo[a] + B.len[a]) return {};
      return c[a] * B.value(a, B.row_pos[r]) * std::conj(B.value(a, y - B.lo[a]));
    });
    if (y == x) {
      M(x, x) = v.real();
    } else {
      M(x, y) = v;
      M(y, x) = std::conj(v);
    }
  }
}

void mixed_row(const FrameBlock& phi, const FrameBlock& psi, std::span<const double> c, std::size_t x,
               Eigen::MatrixXcd& M) {
  const std::size_t r0 = psi.row_start[x];
  const std::size_t r1 = psi.row_start[x + 1];
  if (r0 == r1) return;
  std::size_t lo = phi.lattice.n;
  std::size_t hi = 0;
  for (std::size_t r = r0; r < r1; ++r) {
    const std::size_t a = psi.row_atom[r];
    if (phi.len[a] == 0) continue;
    lo = std::min(lo, phi.lo[a]);
    hi = std::max(hi, phi.lo[a] + phi.len[a]);
  }
  const double s = phi.lattice.step;
  for (std::size_t y = lo; y < hi; ++y) {
    M(x, y) = s * tree_sum_complex(r0, r1, [&](std::size_t r) -> cplx {
      const std::size_t a = psi.row_atom[r];
      if (y < phi.lo[a] || y >= phi.lo[a] + phi.len[a]) return {};
      return c[a] * psi.value(a, psi.row_pos[r]) * std::conj(phi.value(a, y - phi.lo[a]));
    });
  }
}

double berezin_elem(const FrameBlock& B, std::span<const double> c, const FrameBlock& P, std::size_t y) {
  const std::size_t ylo = P.lo[y];
  const std::size_t yhi = P.lo[y] + P.len[y];
  const double s = B.lattice.step;
  return tree_sum(0, B.size(), [&](std::size_t a) {
    if (c[a] == 0.0) return 0.0;
    const std::size_t lo = std::max(ylo, B.lo[a]);
    const std::size_t hi = std::min(yhi, B.lo[a] + B.len[a]);
    if (lo >= hi) return 0.0;
    const cplx g = s * tree_sum_complex(lo, hi, [&](std::size_t i) {
      return B.value(a, i - B.lo[a]) * std::conj(P.value(y, i - ylo));
    });
    return c[a] * std::norm(g);
  });
}

void check_coeffs(const FrameBlock& B, std::size_t n) {
  if (n != B.size()) throw InvalidArgument("coefficient count does not match the frame block");
}

void check_signal(const FrameBlock& B, std::size_t n) {
  if (n != B.lattice.n) throw InvalidArgument("signal length does not match the frame lattice");
}

void check_pair(const FrameBlock& phi, const FrameBlock& psi) {
  if (phi.grid_index != psi.grid_index || !(phi.lattice == psi.lattice))
    throw InvalidArgument("mixed blocks must cover the same grid points on the same lattice");
}

}  // namespace

namespace serial {

std::vector<cplx> analysis(const FrameBlock& B, std::span<const cplx> f) {
  check_signal(B, f.size());
  std::vector<cplx> out(B.size());
  for (std::size_t a = 0; a < B.size(); ++a) out[a] = analysis_elem(B, f, a);
  return out;
}

std::vector<cplx> synthesis(const FrameBlock& B, std::span<const cplx> c) {
  check_coeffs(B, c.size());
  std::vector<cplx> out(B.lattice.n);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = synthesis_elem(B, c, i);
  return out;
}

Eigen::MatrixXcd toeplitz(const FrameBlock& B, std::span<const double> c) {
  check_coeffs(B, c.size());
  const auto n = static_cast<Eigen::Index>(B.lattice.n);
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t x = 0; x < B.lattice.n; ++x) toeplitz_row(B, c, x, M);
  return M;
}

Eigen::MatrixXcd mixed(const FrameBlock& phi, const FrameBlock& psi, std::span<const double> c) {
  check_pair(phi, psi);
  check_coeffs(phi, c.size());
  const auto n = static_cast<Eigen::Index>(phi.lattice.n);
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t x = 0; x < phi.lattice.n; ++x) mixed_row(phi, psi, c, x, M);
  return M;
}

std::vector<double> berezin(const FrameBlock& B, std::span<const double> c, const FrameBlock& probes) {
  check_coeffs(B, c.size());
  std::vector<double> out(probes.size());
  for (std::size_t y = 0; y < probes.size(); ++y) out[y] = berezin_elem(B, c, probes, y);
  return out;
}

}  // namespace serial

namespace omp {

std::vector<cplx> analysis(const FrameBlock& B, std::span<const cplx> f) {
  check_signal(B, f.size());
  std::vector<cplx> out(B.size());
  const auto m = static_cast<std::ptrdiff_t>(B.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t a = 0; a < m; ++a) out[a] = analysis_elem(B, f, a);
  return out;
}

std::vector<cplx> synthesis(const FrameBlock& B, std::span<const cplx> c) {
  check_coeffs(B, c.size());
  std::vector<cplx> out(B.lattice.n);
  const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = synthesis_elem(B, c, i);
  return out;
}

Eigen::MatrixXcd toeplitz(const FrameBlock& B, std::span<const double> c) {
  check_coeffs(B, c.size());
  const auto n = static_cast<Eigen::Index>(B.lattice.n);
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
  // Row x writes (x, y) and (y, x) for y >= x only, so rows never collide.
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t x = 0; x < static_cast<std::ptrdiff_t>(n); ++x) toeplitz_row(B, c, x, M);
  return M;
}

Eigen::MatrixXcd mixed(const FrameBlock& phi, const FrameBlock& psi, std::span<const double> c) {
  check_pair(phi, psi);
  check_coeffs(phi, c.size());
  const auto n = static_cast<Eigen::Index>(phi.lattice.n);
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t x = 0; x < static_cast<std::ptrdiff_t>(n); ++x) mixed_row(phi, psi, c, x, M);
  return M;
}

std::vector<double> berezin(const FrameBlock& B, std::span<const double> c, const FrameBlock& probes) {
  check_coeffs(B, c.size());
  std::vector<double> out(probes.size());
  const auto m = static_cast<std::ptrdiff_t>(probes.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t y = 0; y < m; ++y) out[y] = berezin_elem(B, c, probes, y);
  return out;
}

}  // namespace omp

void set_thread_count(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

int thread_count() { return omp_get_max_threads(); }

}  // namespace berezin
