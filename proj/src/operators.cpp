// Copyright 2026 The berezin-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "berezin/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "berezin/errors.hpp"
#include "berezin/kernels.hpp"
#include "berezin/krylov.hpp"
#include "berezin/reduce.hpp"

namespace berezin {

namespace {

void check_cap(const SignalLattice& lat, Eigen::Index cap) {
  if (static_cast<Eigen::Index>(lat.n) > cap) {
    throw ResourceError("dense operator of size " + std::to_string(lat.n) + " exceeds the cap " +
                        std::to_string(cap) + "; use apply_toeplitz / spectrum_matrix_free");
  }
}

std::vector<double> symbol_weights(const Symbol& sigma, const QuadGrid& grid, std::span<const std::size_t> idx) {
  std::vector<double> c(idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a) c[a] = sigma[idx[a]] * grid.weight(idx[a]);
  return c;
}

double matrix_trace(const Eigen::MatrixXcd& M) {
  return tree_sum(0, static_cast<std::size_t>(M.rows()),
                  [&](std::size_t i) { return M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real(); });
}

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
  return es.eigenvalues();
}

struct Snapped {
  std::vector<std::size_t> source;
  std::vector<std::size_t> target;
  std::vector<PhasePoint> image;  // unsnapped h x_j
  double max_snap = 0.0;
};

Snapped snap_images(const QuadGrid& grid, const GroupElement& h) {
  const Geometry& g = grid.geometry();
  Snapped out;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const PhasePoint hx = act(h, grid.point(j), g);
    const auto t = grid.nearest_index(hx);
    if (!t) continue;
    out.source.push_back(j);
    out.target.push_back(*t);
    out.image.push_back(hx);
    out.max_snap = std::max(out.max_snap, distance(hx, grid.point(*t), g));
  }
  return out;
}

// Atoms at the images. Wavelet atoms exist at every (a, b) (the window is
// interpolated anyway), so the affine case uses the exact images; the
// Heisenberg cases use the snapped grid points, which are exact there for
// lattice shifts.
FrameBlock image_block(const FrameFamily& F, const QuadGrid& grid, const Snapped& snap) {
  if (F.geometry().kind == GeometryKind::AffineHalfPlane) return build_block(F, std::span<const PhasePoint>(snap.image));
  return build_block(F, grid, snap.target);
}

}  // namespace

std::size_t SpectrumReport::eps_rank(double eps) const {
  return static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [&](double v) { return v > eps; }));
}

ToeplitzOperator assemble_toeplitz(const Symbol& sigma, const FrameFamily& F, const QuadGrid& grid,
                                   Eigen::Index cap) {
  sigma.check_grid(grid);
  check_frame_grid(F, grid);
  check_cap(F.lattice(), cap);
  const std::vector<std::size_t> idx = nonzero_indices(sigma.samples());
  const FrameBlock B = build_block(F, grid, idx);
  ToeplitzOperator T;
  T.matrix = omp::toeplitz(B, symbol_weights(sigma, grid, idx));
  T.lattice = F.lattice();
  T.grid_fingerprint = grid.fingerprint();
  T.symbol_provenance = sigma.provenance();
  return T;
}

ToeplitzOperator assemble_mixed(const Symbol& sigma, const FrameFamily& F_phi, const FrameFamily& F_psi,
                                const QuadGrid& grid, Eigen::Index cap) {
  sigma.check_grid(grid);
  check_frame_grid(F_phi, grid);
  check_frame_grid(F_psi, grid);
  if (!(F_phi.lattice() == F_psi.lattice())) throw InvalidArgument("mixed windows live on different lattices");
  check_cap(F_phi.lattice(), cap);
  const std::vector<std::size_t> idx = nonzero_indices(sigma.samples());
  const FrameBlock phi = build_block(F_phi, grid, idx);
  const FrameBlock psi = build_block(F_psi, grid, idx);
  ToeplitzOperator T;
  T.matrix = omp::mixed(phi, psi, symbol_weights(sigma, grid, idx));
  T.is_mixed = true;
  T.lattice = F_phi.lattice();
  T.grid_fingerprint = grid.fingerprint();
  T.symbol_provenance = sigma.provenance();
  return T;
}

HilbertVector apply_toeplitz(const Symbol& sigma, const FrameFamily& F, const QuadGrid& grid, const HilbertVector& f) {
  sigma.check_grid(grid);
  check_frame_grid(F, grid);
  if (!(f.lattice() == F.lattice())) throw InvalidArgument("signal lattice does not match the frame");
  const std::vector<std::size_t> idx = nonzero_indices(sigma.samples());
  const FrameBlock B = build_block(F, grid, idx);
  const std::vector<double> c = symbol_weights(sigma, grid, idx);
  std::vector<cplx> coeff = omp::analysis(B, f.entries());
  for (std::size_t a = 0; a < coeff.size(); ++a) coeff[a] *= c[a];
  return HilbertVector(F.lattice(), omp::synthesis(B, coeff));
}

SpectrumReport spectrum(const ToeplitzOperator& T, std::optional<int> k) {
  if (T.is_mixed) throw InvalidArgument("spectrum needs a Hermitian operator; mixed operators go through svd_report");
  SpectrumReport out;
  out.trace = matrix_trace(T.matrix);
  if (!k) {
    const Eigen::VectorXd ev = hermitian_eigenvalues(T.matrix);
    out.values.assign(ev.data(), ev.data() + ev.size());
    std::reverse(out.values.begin(), out.values.end());
    out.full = true;
    if (!out.values.empty()) out.operator_norm = std::max(std::fabs(out.values.front()), std::fabs(out.values.back()));
    return out;
  }
  const Eigen::MatrixXcd& M = T.matrix;
  const KrylovResult r = top_eigenpairs([&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd { return M * v; },
                                        M.rows(), *k);
  out.values = r.values;
  out.converged = r.converged;
  out.operator_norm = out.values.empty() ? 0.0 : std::fabs(out.values.front());
  return out;
}

SpectrumReport spectrum_matrix_free(const Symbol& sigma, const FrameFamily& F, const QuadGrid& grid, int k) {
  sigma.check_grid(grid);
  check_frame_grid(F, grid);
  const std::vector<std::size_t> idx = nonzero_indices(sigma.samples());
  const FrameBlock B = build_block(F, grid, idx);
  const std::vector<double> c = symbol_weights(sigma, grid, idx);
  const auto n = static_cast<Eigen::Index>(F.lattice().n);
  auto apply = [&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd {
    std::vector<cplx> coeff = omp::analysis(B, std::span<const cplx>(v.data(), static_cast<std::size_t>(n)));
    for (std::size_t a = 0; a < coeff.size(); ++a) coeff[a] *= c[a];
    const std::vector<cplx> out = omp::synthesis(B, coeff);
    return Eigen::Map<const Eigen::VectorXcd>(out.data(), n);
  };
  const KrylovResult r = top_eigenpairs(apply, n, k);
  SpectrumReport out;
  out.values = r.values;
  out.converged = r.converged;
  out.operator_norm = out.values.empty() ? 0.0 : std::fabs(out.values.front());
  // tr T_sigma = sum_j sigma_j w_j ||k_j||^2 without the matrix.
  const double s = F.lattice().step;
  out.trace = tree_sum(0, B.size(), [&](std::size_t a) {
    return c[a] * s * tree_sum(0, B.len[a], [&](std::size_t p) { return std::norm(B.value(a, p)); });
  });
  return out;
}

SpectrumReport svd_report(const ToeplitzOperator& T) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(T.matrix);
  const Eigen::VectorXd& sv = svd.singularValues();
  SpectrumReport out;
  out.kind = "singular_values";
  out.values.assign(sv.data(), sv.data() + sv.size());
  out.full = true;
  out.trace = matrix_trace(T.matrix);
  out.operator_norm = out.values.empty() ? 0.0 : out.values.front();
  return out;
}

TraceCheck trace_identity_check(const ToeplitzOperator& T, const Symbol& sigma, const FrameFamily& F,
                                const QuadGrid& grid) {
  sigma.check_grid(grid);
  if (T.grid_fingerprint != grid.fingerprint()) throw InvalidArgument("operator was assembled on a different grid");
  const std::vector<std::size_t> idx = nonzero_indices(sigma.samples());
  const FrameBlock B = build_block(F, grid, idx);
  const std::vector<double> c = symbol_weights(sigma, grid, idx);
  const double s = F.lattice().step;
  TraceCheck out;
  out.lhs = matrix_trace(T.matrix);
  out.rhs = tree_sum(0, B.size(), [&](std::size_t a) {
    return c[a] * s * tree_sum(0, B.len[a], [&](std::size_t p) { return std::norm(B.value(a, p)); });
  });
  return out;
}

ShiftResult shift_apply(const FrameFamily& F, const QuadGrid& grid, const GroupElement& h, const HilbertVector& f) {
  check_frame_grid(F, grid);
  if (!(f.lattice() == F.lattice())) throw InvalidArgument("signal lattice does not match the frame");
  const Snapped snap = snap_images(grid, h);
  const FrameBlock all = build_block(F, grid);
  const std::vector<cplx> coeff = omp::analysis(all, f.entries());
  const double mass = tree_sum(0, coeff.size(), [&](std::size_t j) { return std::norm(coeff[j]) * grid.weight(j); });
  std::vector<char> kept(grid.size(), 0);
  for (std::size_t j : snap.source) kept[j] = 1;
  const double lost = tree_sum(0, coeff.size(), [&](std::size_t j) {
    return kept[j] ? 0.0 : std::norm(coeff[j]) * grid.weight(j);
  });
  const FrameBlock targets = image_block(F, grid, snap);
  std::vector<cplx> cw(snap.source.size());
  for (std::size_t a = 0; a < cw.size(); ++a) cw[a] = coeff[snap.source[a]] * grid.weight(snap.source[a]);
  ShiftResult out;
  out.vector = HilbertVector(F.lattice(), omp::synthesis(targets, cw));
  out.truncated_fraction = mass > 0.0 ? lost / mass : 0.0;
  out.max_snap_distance = snap.max_snap;
  if (out.truncated_fraction > 0.1) {
    out.warning = "shift moved " + std::to_string(100.0 * out.truncated_fraction) +
                  "% of the coefficient mass off the grid";
  }
  return out;
}

Eigen::MatrixXcd shift_matrix(const FrameFamily& F, const QuadGrid& grid, const GroupElement& h) {
  check_frame_grid(F, grid);
  check_cap(F.lattice(), kDenseCap);
  const Snapped snap = snap_images(grid, h);
  const FrameBlock src = build_block(F, grid, snap.source);
  FrameBlock dst = image_block(F, grid, snap);
  dst.grid_index = src.grid_index;  // pair atoms by position, not by grid point
  std::vector<double> w(snap.source.size());
  for (std::size_t a = 0; a < w.size(); ++a) w[a] = grid.weight(snap.source[a]);
  return omp::mixed(src, dst, w);
}

double conjugation_residual(const Symbol& sigma, const FrameFamily& F, const QuadGrid& grid, const GroupElement& h,
                            double interior_margin) {
  if (!F.in_invariant_subgroup(h))
    throw InvalidArgument("conjugation_residual: h is not in the invariant subgroup of the frame");
  const Symbol moved = translate_symbol(sigma, h, grid);
  const ToeplitzOperator T = assemble_toeplitz(sigma, F, grid);
  const ToeplitzOperator Th = assemble_toeplitz(moved, F, grid);
  const Eigen::MatrixXcd S = shift_matrix(F, grid, h);
  Eigen::MatrixXcd D = S * T.matrix * S.adjoint() - Th.matrix;
  const SignalLattice& lat = F.lattice();
  if (interior_margin > 0.0 && lat.kind == SignalLattice::Kind::Line) {
    std::vector<Eigen::Index> keep;
    for (std::size_t i = 0; i < lat.n; ++i) {
      if (std::fabs(lat.x(i)) <= lat.half_width() - interior_margin + 1e-12) keep.push_back(static_cast<Eigen::Index>(i));
    }
    if (keep.empty()) throw InvalidArgument("conjugation_residual: interior margin leaves no samples");
    D = D(keep, keep).eval();
  }
  D = 0.5 * (D + D.adjoint()).eval();
  const Eigen::VectorXd ev = hermitian_eigenvalues(D);
  return ev.size() == 0 ? 0.0 : std::max(std::fabs(ev[0]), std::fabs(ev[ev.size() - 1]));
}

double lambda_min(const Eigen::MatrixXcd& A) {
  const Eigen::VectorXd ev = hermitian_eigenvalues(A);
  return ev.size() == 0 ? 0.0 : ev[0];
}

OrderingResult ordering_residual(const Symbol& sigma, const Symbol& rho, const FrameFamily& F, const QuadGrid& grid) {
  const Symbol both = pointwise_max(sigma, rho);
  const Eigen::MatrixXcd Ts = assemble_toeplitz(sigma, F, grid).matrix;
  const Eigen::MatrixXcd Tr = assemble_toeplitz(rho, F, grid).matrix;
  const Eigen::MatrixXcd Tm = assemble_toeplitz(both, F, grid).matrix;
  OrderingResult out;
  out.ordering = std::max({0.0, -lambda_min(Tm - Ts), -lambda_min(Tm - Tr)});
  out.subadditivity = std::max(0.0, -lambda_min(Ts + Tr - Tm));
  return out;
}

void export_matrix(const Eigen::MatrixXcd& M, const std::string& path) {
  if (M.rows() != M.cols()) throw InvalidArgument("export_matrix needs a square matrix");
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    const std::uint64_t header[2] = {kMatrixMagic, static_cast<std::uint64_t>(M.rows())};
    out.write(reinterpret_cast<const char*>(header), sizeof(header));
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
      for (Eigen::Index j = 0; j < M.cols(); ++j) {
        const double pair[2] = {M(i, j).real(), M(i, j).imag()};
        out.write(reinterpret_cast<const char*>(pair), sizeof(pair));
      }
    }
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw std::runtime_error("cannot rename " + tmp);
}

Eigen::MatrixXcd import_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::uint64_t header[2] = {0, 0};
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!in || header[0] != kMatrixMagic) throw InvalidArgument(path + " is not a matrix dump");
  const auto n = static_cast<Eigen::Index>(header[1]);
  Eigen::MatrixXcd M(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double pair[2];
      in.read(reinterpret_cast<char*>(pair), sizeof(pair));
      M(i, j) = {pair[0], pair[1]};
    }
  }
  if (!in) throw InvalidArgument(path + " is truncated");
  return M;
}

}  // namespace berezin
