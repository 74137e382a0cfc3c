// Copyright 2026 The berezin-lab Authors
// SPDX-License-Identifier: Apache-2.0

// Bounded nonnegative symbols on a quadrature grid: set indicators, group
// translates, pointwise maxima, and the translate-supremum construction.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "berezin/expr.hpp"
#include "berezin/frames.hpp"
#include "berezin/phase_space.hpp"

namespace berezin {

/// Coordinate axis: First is p / omega / a, Second is q / t / b.
enum class Axis { First, Second };

/// Union of open balls d(x, center_i) < radius_i.
struct BallUnion {
  std::vector<PhasePoint> centers;
  std::vector<double> radii;
};

/// |coord - center| <= half_width along `axis` (torus distance on Z_N), the
/// other coordinate unrestricted.
struct Strip {
  Axis axis = Axis::Second;
  double center = 0.0;
  double half_width = 0.0;
};

/// lo <= coord <= hi along `axis`, the other coordinate unrestricted.
struct Band {
  Axis axis = Axis::First;
  double lo = 0.0;
  double hi = 0.0;
};

/// Expression in the geometry's coordinate names (p, q | w, t | a, b).
struct Predicate {
  std::string expression;
};

class SetSpec {
 public:
  using Shape = std::variant<BallUnion, Strip, Band, Predicate>;

  SetSpec(Shape shape, Geometry geometry);

  const Shape& shape() const { return shape_; }
  const Geometry& geometry() const { return geometry_; }
  /// Group element P with x in E iff P x lies in the base shape.
  const GroupElement& pullback() const { return pullback_; }

  bool contains(const PhasePoint& x) const;
  /// The set h E.
  SetSpec translated(const GroupElement& h) const;

 private:
  Shape shape_;
  Geometry geometry_;
  GroupElement pullback_;
  std::optional<Expression> expr_;
};

/// Coordinate names for predicates.
std::vector<std::string> coordinate_names(const Geometry& g);

class Symbol {
 public:
  Symbol(const QuadGrid& grid, std::vector<double> samples, std::string provenance);

  std::span<const double> samples() const { return samples_; }
  double operator[](std::size_t j) const { return samples_[j]; }
  std::size_t size() const { return samples_.size(); }
  double sup_bound() const { return sup_bound_; }
  const std::string& provenance() const { return provenance_; }
  std::uint64_t grid_fingerprint() const { return grid_fingerprint_; }
  /// For indicators: the union of sets whose indicator this is.
  const std::vector<SetSpec>& sets() const { return sets_; }
  bool is_indicator() const { return !sets_.empty() || sup_bound_ == 0.0; }

  void check_grid(const QuadGrid& grid) const;

  static Symbol indicator(const QuadGrid& grid, std::vector<SetSpec> sets);
  static Symbol constant(const QuadGrid& grid, double value);
  /// Symbol on the same grid as `like` with new samples and set list.
  static Symbol derived(const Symbol& like, std::vector<double> samples, std::string provenance,
                        std::vector<SetSpec> sets = {});

 private:
  Symbol() = default;

  std::vector<double> samples_;
  double sup_bound_ = 0.0;
  std::string provenance_;
  std::uint64_t grid_fingerprint_ = 0;
  std::vector<SetSpec> sets_;
};

Symbol indicator(const QuadGrid& grid, const SetSpec& spec);

/// sigma_h(x) = sigma(h^{-1} x). Indicators re-evaluate the translated set;
/// other symbols are resampled at the grid point nearest h^{-1} x (0 when
/// that point is off the grid).
Symbol translate_symbol(const Symbol& sigma, const GroupElement& h, const QuadGrid& grid);

Symbol pointwise_max(const Symbol& sigma, const Symbol& rho);

/// 1 - sigma, for sigma with values in [0, 1].
Symbol complement(const Symbol& sigma);

/// sum_j sigma_j w_j.
double l1_norm(const Symbol& sigma, const QuadGrid& grid);

struct SupStage {
  int k = 0;
  double R = 0.0;
  std::size_t m = 0;
  double bound = 0.0;
  double threshold = 0.0;
  std::size_t rejected_by_budget = 0;
};

struct SupOptions {
  int stages = 6;
  /// Products of selected candidates must stay in B(e, budget_radius);
  /// +inf disables the check.
  double budget_radius = 1.0;
};

struct SupResult {
  std::vector<std::size_t> selected;
  Symbol rho;
  std::vector<SupStage> stages;
  /// h_{m_k} ... h_{m_1} restricted to each subset of the selected indices,
  /// keyed by bitmask over stage order.
  std::vector<GroupElement> products;
};

/// Stage k: R_k is the largest probe distance where the Berezin transform of
/// rho_{k-1} exceeds 2^{-(k-1)}; the first candidate after m_{k-1} whose
/// translate changes rho_{k-1}~ by at most 3 * 2^{-k} on probes in
/// B(e, R_k + 1) is taken, and rho_k = max(rho_{k-1}, translate(rho_{k-1}, h)).
/// Throws StageFailure when no candidate qualifies.
SupResult sup_translates_select(const Symbol& sigma, const FrameFamily& F, const QuadGrid& grid,
                                std::span<const GroupElement> candidates,
                                std::span<const PhasePoint> probes, const SupOptions& options = {});

/// Every 4th grid point, the default probe set.
std::vector<PhasePoint> default_probes(const QuadGrid& grid, std::size_t stride = 4);

}  // namespace berezin
