// Copyright 2026 The berezin-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "berezin/phase_space.hpp"

#include <cmath>
#include <cstring>
#include <numbers>

#include "berezin/errors.hpp"
#include "berezin/reduce.hpp"

namespace berezin {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_element(const GroupElement& h, const Geometry& g) {
  if (h.kind != g.kind) throw InvalidArgument("group element does not belong to geometry " + g.name());
  if (g.kind == GeometryKind::AffineHalfPlane && !(h.first > 0.0))
    throw InvalidArgument("affine group element needs a > 0");
}

long long mod(long long v, long long n) {
  const long long r = v % n;
  return r < 0 ? r + n : r;
}

// e^{2 pi i k / N} with k reduced first so the phase is exact up to one rounding.
std::complex<double> root_of_unity(long long k, int N) {
  const double theta = kTwoPi * static_cast<double>(mod(k, N)) / N;
  return {std::cos(theta), std::sin(theta)};
}

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

template <class T>
std::uint64_t mix(std::uint64_t h, const T& v) {
  return fnv1a(&v, sizeof(T), h);
}

std::uint64_t extent_fingerprint(const Geometry& g, const GridExtent& e) {
  std::uint64_t h = 1469598103934665603ULL;
  h = mix(h, static_cast<int>(g.kind));
  h = mix(h, g.N);
  std::visit(
      [&](const auto& x) {
        using X = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<X, FiniteExtent>) {
          h = mix(h, x.N);
        } else if constexpr (std::is_same_v<X, PlaneExtent>) {
          h = mix(mix(mix(mix(h, x.t_half), x.w_half), x.dt), x.dw);
        } else {
          h = mix(mix(mix(mix(mix(h, x.a_min), x.a_max), x.n_scales), x.b_half), x.n_shifts);
        }
      },
      e);
  return h;
}

// Index of the cell nearest to u (in cell units), ties toward the smaller index.
long long nearest_cell(double u) { return static_cast<long long>(std::ceil(u - 0.5)); }

std::size_t endpoint_count(double half, double step) {
  return static_cast<std::size_t>(std::floor(2.0 * half / step + 1e-9)) + 1;
}

}  // namespace

Geometry Geometry::finite_gabor(int N) {
  if (N < 2) throw InvalidArgument("FiniteGabor needs N >= 2");
  return {GeometryKind::FiniteGabor, N};
}

std::string Geometry::name() const {
  switch (kind) {
    case GeometryKind::FiniteGabor: return "finite_gabor(" + std::to_string(N) + ")";
    case GeometryKind::PlaneTF: return "plane_tf";
    case GeometryKind::AffineHalfPlane: return "affine_half_plane";
  }
  return "unknown";
}

void validate_point(const PhasePoint& x, const Geometry& g) {
  if (!std::isfinite(x.first) || !std::isfinite(x.second))
    throw InvalidArgument("phase point has non-finite coordinates");
  switch (g.kind) {
    case GeometryKind::FiniteGabor:
      for (double c : {x.first, x.second}) {
        if (c != std::floor(c) || c < 0 || c >= g.N)
          throw InvalidArgument("FiniteGabor point needs integer coordinates in [0, N)");
      }
      break;
    case GeometryKind::AffineHalfPlane:
      if (!(x.first > 0.0)) throw InvalidArgument("affine point needs a > 0");
      break;
    case GeometryKind::PlaneTF: break;
  }
}

GroupElement identity_element(const Geometry& g) {
  if (g.kind == GeometryKind::AffineHalfPlane) return GroupElement::affine(1.0, 0.0);
  return {g.kind, 0.0, 0.0, 1.0};
}

GroupElement compose(const GroupElement& lhs, const GroupElement& rhs, const Geometry& g) {
  check_element(lhs, g);
  check_element(rhs, g);
  if (g.kind == GeometryKind::AffineHalfPlane)
    return GroupElement::affine(lhs.first * rhs.first, lhs.second / rhs.first + rhs.second);
  if (g.kind == GeometryKind::FiniteGabor) {
    const auto p = static_cast<long long>(rhs.first);
    const auto qp = static_cast<long long>(lhs.second);
    return {g.kind, static_cast<double>(mod(p + static_cast<long long>(lhs.first), g.N)),
            static_cast<double>(mod(static_cast<long long>(rhs.second) + qp, g.N)),
            rhs.phase * lhs.phase * root_of_unity(p * qp, g.N)};
  }
  const double theta = kTwoPi * rhs.first * lhs.second;
  return {g.kind, rhs.first + lhs.first, rhs.second + lhs.second,
          rhs.phase * lhs.phase * std::complex<double>(std::cos(theta), std::sin(theta))};
}

GroupElement inverse(const GroupElement& h, const Geometry& g) {
  check_element(h, g);
  if (g.kind == GeometryKind::AffineHalfPlane)
    return GroupElement::affine(1.0 / h.first, -h.first * h.second);
  if (g.kind == GeometryKind::FiniteGabor) {
    const auto p = static_cast<long long>(h.first);
    const auto q = static_cast<long long>(h.second);
    return {g.kind, static_cast<double>(mod(-p, g.N)), static_cast<double>(mod(-q, g.N)),
            std::conj(h.phase) * root_of_unity(p * q, g.N)};
  }
  const double theta = kTwoPi * h.first * h.second;
  return {g.kind, -h.first, -h.second,
          std::conj(h.phase) * std::complex<double>(std::cos(theta), std::sin(theta))};
}

PhasePoint act(const GroupElement& h, const PhasePoint& x, const Geometry& g) {
  check_element(h, g);
  switch (g.kind) {
    case GeometryKind::FiniteGabor:
      return {static_cast<double>(mod(static_cast<long long>(h.first + x.first), g.N)),
              static_cast<double>(mod(static_cast<long long>(h.second + x.second), g.N))};
    case GeometryKind::PlaneTF: return {h.first + x.first, h.second + x.second};
    case GeometryKind::AffineHalfPlane:
      if (!(x.first > 0.0)) throw InvalidArgument("affine point needs a > 0");
      return {h.first * x.first, h.second / x.first + x.second};
  }
  return x;
}

double distance(const PhasePoint& x, const PhasePoint& y, const Geometry& g) {
  switch (g.kind) {
    case GeometryKind::FiniteGabor: {
      auto wrap = [&](double u, double v) {
        const double d = std::fabs(u - v);
        return std::min(d, g.N - d);
      };
      return wrap(x.first, y.first) + wrap(x.second, y.second);
    }
    case GeometryKind::PlaneTF: return std::hypot(x.first - y.first, x.second - y.second);
    case GeometryKind::AffineHalfPlane: {
      if (!(x.first > 0.0) || !(y.first > 0.0)) throw InvalidArgument("affine point needs a > 0");
      const double dre = x.first * x.second - y.first * y.second;
      const double dim = x.first - y.first;
      return 2.0 * std::asinh(std::hypot(dre, dim) / (2.0 * std::sqrt(x.first * y.first)));
    }
  }
  return 0.0;
}

PhasePoint origin(const Geometry& g) {
  if (g.kind == GeometryKind::AffineHalfPlane) return {1.0, 0.0};
  return {0.0, 0.0};
}

GroupElement random_element(const Geometry& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  if (g.kind == GeometryKind::FiniteGabor) {
    std::uniform_int_distribution<int> idx(0, g.N - 1);
    const int p = idx(rng);
    const int q = idx(rng);
    return GroupElement::finite(p, q, std::polar(1.0, angle(rng)));
  }
  std::uniform_real_distribution<double> shift(-4.0, 4.0);
  if (g.kind == GeometryKind::PlaneTF) {
    const double p = shift(rng);
    const double q = shift(rng);
    return GroupElement::heisenberg(p, q, std::polar(1.0, angle(rng)));
  }
  std::uniform_real_distribution<double> loga(-2.0, 2.0);
  const double a = std::exp(loga(rng));
  return GroupElement::affine(a, shift(rng));
}

QuadGrid::QuadGrid(Geometry geometry, GridExtent extent, std::vector<PhasePoint> points,
                   std::vector<double> weights)
    : geometry_(geometry), extent_(extent), points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.size() != weights_.size()) throw InvalidArgument("grid points and weights differ in length");
  for (double w : weights_) {
    if (!(w > 0.0)) throw InvalidArgument("grid weights must be positive");
  }
  fingerprint_ = extent_fingerprint(geometry_, extent_);
}

double QuadGrid::total_weight() const { return tree_sum(weights_); }

std::optional<std::size_t> QuadGrid::nearest_index(const PhasePoint& x) const {
  return std::visit(
      [&](const auto& e) -> std::optional<std::size_t> {
        using E = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<E, FiniteExtent>) {
          const long long p = mod(nearest_cell(x.first), e.N);
          const long long q = mod(nearest_cell(x.second), e.N);
          return static_cast<std::size_t>(p * e.N + q);
        } else if constexpr (std::is_same_v<E, PlaneExtent>) {
          const auto nw = static_cast<long long>(endpoint_count(e.w_half, e.dw));
          const auto nt = static_cast<long long>(endpoint_count(e.t_half, e.dt));
          const long long iw = nearest_cell((x.first + e.w_half) / e.dw);
          const long long it = nearest_cell((x.second + e.t_half) / e.dt);
          if (iw < 0 || iw >= nw || it < 0 || it >= nt) return std::nullopt;
          return static_cast<std::size_t>(iw * nt + it);
        } else {
          if (!(x.first > 0.0)) return std::nullopt;
          const double dloga = std::log(e.a_max / e.a_min) / e.n_scales;
          const double db = 2.0 * e.b_half / e.n_shifts;
          const long long ia = nearest_cell(std::log(x.first / e.a_min) / dloga - 0.5);
          const long long ib = nearest_cell((x.second + e.b_half) / db - 0.5);
          if (ia < 0 || ia >= e.n_scales || ib < 0 || ib >= e.n_shifts) return std::nullopt;
          return static_cast<std::size_t>(ia * e.n_shifts + ib);
        }
      },
      extent_);
}

std::size_t QuadGrid::origin_index() const {
  const auto j = nearest_index(origin());
  if (!j) throw InvalidArgument("grid does not contain the origin");
  return *j;
}

std::vector<std::size_t> QuadGrid::interior_indices(double margin) const {
  std::vector<std::size_t> out;
  const double slack = 1e-9;
  for (std::size_t j = 0; j < points_.size(); ++j) {
    const PhasePoint& x = points_[j];
    bool inside = true;
    if (const auto* e = std::get_if<PlaneExtent>(&extent_)) {
      inside = std::fabs(x.first) <= e->w_half - margin + slack &&
               std::fabs(x.second) <= e->t_half - margin + slack;
    } else if (const auto* e = std::get_if<AffineExtent>(&extent_)) {
      const double f = std::exp2(margin);
      inside = x.first >= e->a_min * f * (1 - slack) && x.first <= e->a_max / f * (1 + slack) &&
               std::fabs(x.second) <= e->b_half - margin + slack;
    }
    if (inside) out.push_back(j);
  }
  return out;
}

QuadGrid finite_gabor_grid(int N) {
  const Geometry g = Geometry::finite_gabor(N);
  std::vector<PhasePoint> pts;
  pts.reserve(static_cast<std::size_t>(N) * N);
  for (int p = 0; p < N; ++p) {
    for (int q = 0; q < N; ++q) pts.push_back({static_cast<double>(p), static_cast<double>(q)});
  }
  std::vector<double> w(pts.size(), 1.0 / N);
  return QuadGrid(g, FiniteExtent{N}, std::move(pts), std::move(w));
}

QuadGrid plane_grid(double t_half, double w_half, double dt, double dw) {
  if (!(t_half > 0 && w_half > 0 && dt > 0 && dw > 0))
    throw InvalidArgument("plane_grid arguments must be positive");
  if (dt > t_half || dw > w_half) throw InvalidArgument("plane_grid step exceeds half-width");
  const std::size_t nt = endpoint_count(t_half, dt);
  const std::size_t nw = endpoint_count(w_half, dw);
  std::vector<PhasePoint> pts;
  pts.reserve(nt * nw);
  for (std::size_t i = 0; i < nw; ++i) {
    for (std::size_t k = 0; k < nt; ++k) pts.push_back({-w_half + i * dw, -t_half + k * dt});
  }
  std::vector<double> w(pts.size(), dt * dw);
  return QuadGrid(Geometry::plane(), PlaneExtent{t_half, w_half, dt, dw}, std::move(pts), std::move(w));
}

QuadGrid affine_grid(double a_min, double a_max, int n_scales, double b_half, int n_shifts) {
  if (!(a_min > 0.0)) throw InvalidArgument("affine_grid needs a_min > 0");
  if (!(a_max > a_min)) throw InvalidArgument("affine_grid needs a_max > a_min");
  if (n_scales < 1 || n_shifts < 1) throw InvalidArgument("affine_grid needs n_scales, n_shifts >= 1");
  if (!(b_half > 0.0)) throw InvalidArgument("affine_grid needs b_half > 0");
  const double dloga = std::log(a_max / a_min) / n_scales;
  const double db = 2.0 * b_half / n_shifts;
  std::vector<PhasePoint> pts;
  pts.reserve(static_cast<std::size_t>(n_scales) * n_shifts);
  for (int i = 0; i < n_scales; ++i) {
    const double a = a_min * std::exp((i + 0.5) * dloga);
    for (int k = 0; k < n_shifts; ++k) pts.push_back({a, -b_half + (k + 0.5) * db});
  }
  std::vector<double> w(pts.size(), dloga * db);
  return QuadGrid(Geometry::affine(), AffineExtent{a_min, a_max, n_scales, b_half, n_shifts},
                  std::move(pts), std::move(w));
}

QuadGrid grid_from_extent(const GridExtent& extent) {
  return std::visit(
      [](const auto& e) -> QuadGrid {
        using E = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<E, FiniteExtent>) {
          return finite_gabor_grid(e.N);
        } else if constexpr (std::is_same_v<E, PlaneExtent>) {
          return plane_grid(e.t_half, e.w_half, e.dt, e.dw);
        } else {
          return affine_grid(e.a_min, e.a_max, e.n_scales, e.b_half, e.n_shifts);
        }
      },
      extent);
}

double ball_integral(std::span<const double> samples, const QuadGrid& grid, const PhasePoint& center,
                     double R) {
  if (samples.size() != grid.size()) throw InvalidArgument("symbol samples do not match grid");
  const Geometry& g = grid.geometry();
  return tree_sum(0, samples.size(), [&](std::size_t j) {
    return distance(grid.point(j), center, g) <= R ? samples[j] * grid.weight(j) : 0.0;
  });
}

}  // namespace berezin
