// Copyright 2026 The berezin-lab Authors
// SPDX-License-Identifier: Apache-2.0

// Phase-space geometries, their quadrature grids, invariant metrics and group
// actions.
//
//  * FiniteGabor(N): X = Z_N x Z_N (frequency p, time q), counting measure / N,
//    l1 torus metric, Heisenberg group acting by translation.
//  * PlaneTF: X = R x R (frequency omega, time t), Lebesgue measure, Euclidean
//    metric, Heisenberg group acting by translation.
//  * AffineHalfPlane: X = G = (0, inf) x R with (a1,b1)(a2,b2) =
//    (a1 a2, b1 / a2 + b2), Haar measure da db / a, and the hyperbolic metric
//    pulled back through z = a b + i a (left translations act as z -> a1 z + a1 b1).

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace berezin {

enum class GeometryKind { FiniteGabor, PlaneTF, AffineHalfPlane };

struct Geometry {
  GeometryKind kind = GeometryKind::PlaneTF;
  int N = 0;  // FiniteGabor only

  static Geometry finite_gabor(int N);
  static Geometry plane() { return {GeometryKind::PlaneTF, 0}; }
  static Geometry affine() { return {GeometryKind::AffineHalfPlane, 0}; }

  std::string name() const;
  bool operator==(const Geometry&) const = default;
};

/// A point of phase space. Coordinates are (p, q) for FiniteGabor (integers
/// stored exactly), (omega, t) for PlaneTF and (a, b) for AffineHalfPlane.
struct PhasePoint {
  double first = 0.0;
  double second = 0.0;

  bool operator==(const PhasePoint&) const = default;
};

/// Throws InvalidArgument when x is not a point of g.
void validate_point(const PhasePoint& x, const Geometry& g);

/// Heisenberg element (p, q, z) with |z| = 1, or affine element (a, b).
struct GroupElement {
  GeometryKind kind = GeometryKind::PlaneTF;
  double first = 0.0;
  double second = 0.0;
  std::complex<double> phase{1.0, 0.0};  // Heisenberg centre; 1 for affine

  static GroupElement heisenberg(double p, double q, std::complex<double> z = 1.0) {
    return {GeometryKind::PlaneTF, p, q, z};
  }
  static GroupElement finite(double p, double q, std::complex<double> z = 1.0) {
    return {GeometryKind::FiniteGabor, p, q, z};
  }
  static GroupElement affine(double a, double b) {
    return {GeometryKind::AffineHalfPlane, a, b, 1.0};
  }
};

GroupElement identity_element(const Geometry& g);
GroupElement compose(const GroupElement& lhs, const GroupElement& rhs, const Geometry& g);
GroupElement inverse(const GroupElement& h, const Geometry& g);

/// Left action h . x.
PhasePoint act(const GroupElement& h, const PhasePoint& x, const Geometry& g);

/// Invariant metric of the geometry.
double distance(const PhasePoint& x, const PhasePoint& y, const Geometry& g);

/// The distinguished origin e.
PhasePoint origin(const Geometry& g);

/// Random group element for property tests: uniform on Z_N for FiniteGabor,
/// bounded boxes on the real geometries.
GroupElement random_element(const Geometry& g, std::mt19937_64& rng);

struct FiniteExtent {
  int N = 0;
  bool operator==(const FiniteExtent&) const = default;
};

struct PlaneExtent {
  double t_half = 0.0;
  double w_half = 0.0;
  double dt = 0.0;
  double dw = 0.0;
  bool operator==(const PlaneExtent&) const = default;
};

struct AffineExtent {
  double a_min = 0.0;
  double a_max = 0.0;
  int n_scales = 0;
  double b_half = 0.0;
  int n_shifts = 0;
  bool operator==(const AffineExtent&) const = default;
};

using GridExtent = std::variant<FiniteExtent, PlaneExtent, AffineExtent>;

/// Discretized phase space: points in a fixed order and positive weights
/// (the quadrature for mu). Immutable after construction.
class QuadGrid {
 public:
  QuadGrid(Geometry geometry, GridExtent extent, std::vector<PhasePoint> points,
           std::vector<double> weights);

  const Geometry& geometry() const { return geometry_; }
  const GridExtent& extent() const { return extent_; }
  std::span<const PhasePoint> points() const { return points_; }
  std::span<const double> weights() const { return weights_; }
  std::size_t size() const { return points_.size(); }
  const PhasePoint& point(std::size_t j) const { return points_[j]; }
  double weight(std::size_t j) const { return weights_[j]; }
  PhasePoint origin() const { return berezin::origin(geometry_); }

  double total_weight() const;

  /// Stable identifier of (geometry, extent); symbols remember it.
  std::uint64_t fingerprint() const { return fingerprint_; }

  /// Index of the grid point nearest to x in coordinate space, ties broken
  /// toward the lexicographically smaller coordinates. nullopt when x lies
  /// outside the grid extent by more than half a cell.
  std::optional<std::size_t> nearest_index(const PhasePoint& x) const;

  /// Index of the grid point nearest to the origin.
  std::size_t origin_index() const;

  /// Points that sit at least `margin` away from the truncation boundary
  /// (coordinate units for PlaneTF, octaves in a plus `margin` in b for
  /// AffineHalfPlane; every point for FiniteGabor).
  std::vector<std::size_t> interior_indices(double margin) const;

 private:
  Geometry geometry_;
  GridExtent extent_;
  std::vector<PhasePoint> points_;
  std::vector<double> weights_;
  std::uint64_t fingerprint_ = 0;
};

QuadGrid finite_gabor_grid(int N);
QuadGrid plane_grid(double t_half, double w_half, double dt, double dw);
QuadGrid affine_grid(double a_min, double a_max, int n_scales, double b_half, int n_shifts);

/// Rebuilds a grid from its extent descriptor.
QuadGrid grid_from_extent(const GridExtent& extent);

/// Sum of samples[j] * w_j over grid points with distance(x_j, center) <= R.
double ball_integral(std::span<const double> samples, const QuadGrid& grid,
                     const PhasePoint& center, double R);

}  // namespace berezin
