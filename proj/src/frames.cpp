// Copyright 2026 The berezin-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "berezin/frames.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "berezin/berezin.hpp"
#include "berezin/errors.hpp"
#include "berezin/kernels.hpp"
#include "berezin/reduce.hpp"

namespace berezin {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Window samples below this fraction of the peak are dropped on real
// lattices so atoms have compact index support (a Gaussian falls under it
// beyond |x| ~ 3.8).
constexpr double kTailCut = 1e-20;

long long nearest_cell(double u) { return static_cast<long long>(std::ceil(u - 0.5)); }

std::complex<double> unit_phase(double theta) { return {std::cos(theta), std::sin(theta)}; }

}  // namespace

std::string to_string(WindowNormalization n) {
  switch (n) {
    case WindowNormalization::L2: return "l2";
    case WindowNormalization::Admissible: return "admissible";
    case WindowNormalization::None: return "none";
  }
  return "unknown";
}

FrameFamily::FrameFamily(Geometry geometry, HilbertVector window, WindowNormalization normalization,
                         std::string window_name)
    : geometry_(geometry), window_(std::move(window)), normalization_(normalization),
      window_name_(std::move(window_name)) {
  const SignalLattice& lat = window_.lattice();
  if (geometry_.kind == GeometryKind::FiniteGabor) {
    if (lat.kind != SignalLattice::Kind::Cyclic || static_cast<int>(lat.n) != geometry_.N)
      throw InvalidArgument("FiniteGabor window must live on Z_N");
  } else if (lat.kind != SignalLattice::Kind::Line) {
    throw InvalidArgument("real-geometry window must live on a line lattice");
  }
  double peak = 0.0;
  for (const cplx& v : window_.entries()) peak = std::max(peak, std::abs(v));
  if (!(peak > 0.0)) throw InvalidArgument("window is zero");
  if (lat.kind == SignalLattice::Kind::Line) {
    for (cplx& v : window_.entries()) {
      if (std::abs(v) < kTailCut * peak) v = 0.0;
    }
  }
  switch (normalization_) {
    case WindowNormalization::L2:
      pre_value_ = window_.norm();
      window_ = window_.scaled(1.0 / pre_value_);
      break;
    case WindowNormalization::Admissible: {
      const double plus = admissibility_constant(window_, +1);
      const double minus = admissibility_constant(window_, -1);
      pre_value_ = 0.5 * (plus + minus);
      window_ = normalize_admissible(window_);
      break;
    }
    case WindowNormalization::None: pre_value_ = window_.norm(); break;
  }
  const auto& e = window_.entries();
  support_lo_ = 0;
  while (support_lo_ < e.size() && e[support_lo_] == cplx{}) ++support_lo_;
  support_hi_ = e.size();
  while (support_hi_ > support_lo_ && e[support_hi_ - 1] == cplx{}) --support_hi_;
}

FrameAtom FrameFamily::atom(const PhasePoint& x) const {
  const SignalLattice& lat = lattice();
  const auto& phi = window_.entries();
  FrameAtom out;
  switch (geometry_.kind) {
    case GeometryKind::FiniteGabor: {
      validate_point(x, geometry_);
      const int N = geometry_.N;
      const auto p = static_cast<long long>(x.first);
      const auto q = static_cast<long long>(x.second);
      out.values.resize(N);
      for (long long i = 0; i < N; ++i) {
        const long long d = ((i - q) % N + N) % N;
        const double theta = kTwoPi * static_cast<double>((p * d) % N) / N;
        out.values[i] = unit_phase(theta) * phi[d];
      }
      return out;
    }
    case GeometryKind::PlaneTF: {
      const double s = lat.step;
      const long long m = nearest_cell(x.second / s);
      const long long n = static_cast<long long>(lat.n);
      const long long lo = std::max<long long>(0, static_cast<long long>(support_lo_) + m);
      const long long hi = std::min<long long>(n, static_cast<long long>(support_hi_) + m);
      if (lo >= hi) return out;
      out.lo = static_cast<std::size_t>(lo);
      out.values.resize(static_cast<std::size_t>(hi - lo));
      const auto c = static_cast<long long>(lat.center());
      for (long long i = lo; i < hi; ++i) {
        const long long k = i - m;
        out.values[i - lo] = unit_phase(kTwoPi * x.first * static_cast<double>(k - c) * s) * phi[k];
      }
      return out;
    }
    case GeometryKind::AffineHalfPlane: {
      validate_point(x, geometry_);
      const double a = x.first;
      const double b = x.second;
      const double s = lat.step;
      const auto n = static_cast<long long>(lat.n);
      const double c = static_cast<double>(lat.center());
      // psi_lin(u) is nonzero only for u in (x_{lo-1}, x_{hi}).
      const double u_lo = (static_cast<double>(support_lo_) - 1.0 - c) * s;
      const double u_hi = (static_cast<double>(support_hi_) - c) * s;
      const long long lo = std::max<long long>(0, static_cast<long long>(std::floor(c + a * (b + u_lo) / s)));
      const long long hi = std::min<long long>(n, static_cast<long long>(std::ceil(c + a * (b + u_hi) / s)) + 1);
      if (lo >= hi) return out;
      const double scale = 1.0 / std::sqrt(a);
      std::vector<cplx> v(static_cast<std::size_t>(hi - lo));
      for (long long i = lo; i < hi; ++i) {
        v[i - lo] = scale * sample_linear(window_, lat.x(static_cast<std::size_t>(i)) / a - b);
      }
      std::size_t first = 0;
      while (first < v.size() && v[first] == cplx{}) ++first;
      std::size_t last = v.size();
      while (last > first && v[last - 1] == cplx{}) --last;
      if (first == last) return out;
      out.lo = static_cast<std::size_t>(lo) + first;
      out.values.assign(v.begin() + static_cast<std::ptrdiff_t>(first),
                        v.begin() + static_cast<std::ptrdiff_t>(last));
      return out;
    }
  }
  return out;
}

HilbertVector FrameFamily::vector_at(const PhasePoint& x) const {
  FrameAtom a = atom(x);
  HilbertVector v(lattice());
  for (std::size_t p = 0; p < a.values.size(); ++p) v[a.lo + p] = a.values[p];
  return v;
}

bool FrameFamily::in_invariant_subgroup(const GroupElement& h) const {
  if (h.kind != geometry_.kind) return false;
  if (geometry_.kind == GeometryKind::AffineHalfPlane) return std::fabs(h.first - 1.0) <= 1e-12;
  return h.first == 0.0 && std::abs(h.phase - 1.0) <= 1e-12;
}

GroupElement FrameFamily::invariant_element(double shift) const {
  switch (geometry_.kind) {
    case GeometryKind::FiniteGabor: {
      const long long q = ((static_cast<long long>(std::llround(shift)) % geometry_.N) + geometry_.N) % geometry_.N;
      return GroupElement::finite(0.0, static_cast<double>(q));
    }
    case GeometryKind::PlaneTF: return GroupElement::heisenberg(0.0, shift);
    case GeometryKind::AffineHalfPlane: return GroupElement::affine(1.0, shift);
  }
  return identity_element(geometry_);
}

GroupElement FrameFamily::sample_invariant_subgroup(std::mt19937_64& rng) const {
  if (geometry_.kind == GeometryKind::FiniteGabor) {
    std::uniform_int_distribution<int> q(0, geometry_.N - 1);
    return invariant_element(q(rng));
  }
  std::uniform_real_distribution<double> shift(-4.0, 4.0);
  return invariant_element(shift(rng));
}

FrameFamily make_finite_gabor(const HilbertVector& phi, std::string window_name,
                              WindowNormalization normalization) {
  if (phi.lattice().kind != SignalLattice::Kind::Cyclic)
    throw InvalidArgument("finite Gabor window must live on Z_N");
  return FrameFamily(Geometry::finite_gabor(static_cast<int>(phi.size())), phi, normalization,
                     std::move(window_name));
}

FrameFamily make_plane_gabor(const HilbertVector& phi, const QuadGrid& grid, std::string window_name,
                             WindowNormalization normalization) {
  const auto* e = std::get_if<PlaneExtent>(&grid.extent());
  if (!e) throw InvalidArgument("plane Gabor frame needs a PlaneTF grid");
  const double ratio = e->dt / phi.sample_step();
  if (std::fabs(ratio - std::round(ratio)) > 1e-9 || std::round(ratio) < 1.0)
    throw InvalidArgument("step mismatch: grid dt must be an integer multiple of the signal step");
  return FrameFamily(Geometry::plane(), phi, normalization, std::move(window_name));
}

FrameFamily make_affine_wavelet(const HilbertVector& psi, const QuadGrid& grid, std::string window_name,
                                WindowNormalization normalization) {
  if (!std::holds_alternative<AffineExtent>(grid.extent()))
    throw InvalidArgument("affine wavelet frame needs an AffineHalfPlane grid");
  return FrameFamily(Geometry::affine(), psi, normalization, std::move(window_name));
}

SignalLattice matched_lattice(const QuadGrid& plane, double margin) {
  const auto* e = std::get_if<PlaneExtent>(&plane.extent());
  if (!e) throw InvalidArgument("matched lattice needs a PlaneTF grid");
  const double k = std::max(1.0, std::round(2.0 * e->w_half * e->dt));
  const double s = e->dt / k;
  const double L = std::max(e->t_half - margin, 0.5 * e->t_half);
  return SignalLattice::line(L, s);
}

void check_frame_grid(const FrameFamily& F, const QuadGrid& grid) {
  if (!(F.geometry() == grid.geometry()))
    throw InvalidArgument("frame geometry " + F.geometry().name() + " does not match grid geometry " +
                          grid.geometry().name());
}

std::vector<cplx> analysis(const FrameFamily& F, const QuadGrid& grid, const HilbertVector& f) {
  if (!(f.lattice() == F.lattice())) throw InvalidArgument("signal lattice does not match the frame");
  const FrameBlock B = build_block(F, grid);
  return omp::analysis(B, f.entries());
}

HilbertVector synthesis(const FrameFamily& F, const QuadGrid& grid, std::span<const cplx> coeffs) {
  if (coeffs.size() != grid.size()) throw InvalidArgument("coefficient count does not match the grid");
  const FrameBlock B = build_block(F, grid);
  std::vector<cplx> cw(coeffs.size());
  for (std::size_t j = 0; j < cw.size(); ++j) cw[j] = coeffs[j] * grid.weight(j);
  return HilbertVector(F.lattice(), omp::synthesis(B, cw));
}

std::vector<HilbertVector> trial_vectors(const FrameFamily& F, const QuadGrid& grid, int trials,
                                         std::uint64_t seed, double margin) {
  if (trials < 1) throw InvalidArgument("need at least one trial");
  check_frame_grid(F, grid);
  std::mt19937_64 rng(seed);
  std::vector<HilbertVector> out;
  out.reserve(trials);
  if (F.geometry().kind == GeometryKind::FiniteGabor) {
    for (int t = 0; t < trials; ++t) out.push_back(random_unit_vector(F.lattice(), rng));
    return out;
  }
  std::vector<std::size_t> interior = grid.interior_indices(margin);
  if (interior.empty()) {
    interior.resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) interior[j] = j;
  }
  const FrameBlock B = build_block(F, grid, interior);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int t = 0; t < trials; ++t) {
    std::vector<cplx> c(interior.size());
    for (auto& v : c) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      v = {re, im};
    }
    HilbertVector f(F.lattice(), omp::synthesis(B, c));
    const double nrm = f.norm();
    if (!(nrm > 0.0)) throw InvalidArgument("trial synthesis produced a zero vector");
    out.push_back(f.scaled(1.0 / nrm));
  }
  return out;
}

double frame_operator_residual(const FrameFamily& F, const QuadGrid& grid,
                               std::span<const HilbertVector> trials) {
  const FrameBlock B = build_block(F, grid);
  double worst = 0.0;
  for (const HilbertVector& f : trials) {
    if (!(f.lattice() == F.lattice())) throw InvalidArgument("trial vector lattice does not match the frame");
    std::vector<cplx> c = omp::analysis(B, f.entries());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] *= grid.weight(j);
    const HilbertVector g(F.lattice(), omp::synthesis(B, c));
    worst = std::max(worst, (g - f).norm());
  }
  return worst;
}

double frame_operator_residual(const FrameFamily& F, const QuadGrid& grid, int trials, std::uint64_t seed) {
  const auto t = trial_vectors(F, grid, trials, seed);
  return frame_operator_residual(F, grid, t);
}

cplx kernel_gram(const FrameFamily& F, const PhasePoint& x, const PhasePoint& y) {
  const FrameAtom a = F.atom(x);
  const FrameAtom b = F.atom(y);
  const std::size_t lo = std::max(a.lo, b.lo);
  const std::size_t hi = std::min(a.lo + a.values.size(), b.lo + b.values.size());
  if (lo >= hi) return {};
  return F.lattice().step * tree_sum_complex(lo, hi, [&](std::size_t i) {
           return a.values[i - a.lo] * std::conj(b.values[i - b.lo]);
         });
}

}  // namespace berezin
