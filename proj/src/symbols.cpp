// Copyright 2026 The berezin-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "berezin/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "berezin/berezin.hpp"
#include "berezin/errors.hpp"
#include "berezin/reduce.hpp"

namespace berezin {

namespace {

constexpr double kSlack = 1e-12;

double coord(const PhasePoint& x, Axis axis) { return axis == Axis::First ? x.first : x.second; }

bool is_identity(const GroupElement& h) {
  if (h.kind == GeometryKind::AffineHalfPlane) return h.first == 1.0 && h.second == 0.0;
  return h.first == 0.0 && h.second == 0.0;
}

}  // namespace

std::vector<std::string> coordinate_names(const Geometry& g) {
  switch (g.kind) {
    case GeometryKind::FiniteGabor: return {"p", "q"};
    case GeometryKind::PlaneTF: return {"w", "t", "omega"};
    case GeometryKind::AffineHalfPlane: return {"a", "b"};
  }
  return {};
}

SetSpec::SetSpec(Shape shape, Geometry geometry)
    : shape_(std::move(shape)), geometry_(geometry), pullback_(identity_element(geometry)) {
  if (const auto* b = std::get_if<BallUnion>(&shape_)) {
    if (b->centers.size() != b->radii.size()) throw InvalidArgument("ball union: centers and radii differ in length");
    for (double r : b->radii) {
      if (!(r > 0.0)) throw InvalidArgument("ball union: radii must be positive");
    }
    for (const PhasePoint& c : b->centers) {
      if (geometry_.kind == GeometryKind::AffineHalfPlane && !(c.first > 0.0))
        throw InvalidArgument("ball union: affine centers need a > 0");
    }
  } else if (const auto* s = std::get_if<Strip>(&shape_)) {
    if (!(s->half_width >= 0.0)) throw InvalidArgument("strip: half_width must be nonnegative");
  } else if (const auto* b = std::get_if<Band>(&shape_)) {
    if (!(b->lo <= b->hi)) throw InvalidArgument("band: lo must not exceed hi");
  } else if (const auto* p = std::get_if<Predicate>(&shape_)) {
    expr_ = Expression::parse(p->expression, coordinate_names(geometry_));
  }
}

bool SetSpec::contains(const PhasePoint& x) const {
  const PhasePoint y = is_identity(pullback_) ? x : act(pullback_, x, geometry_);
  return std::visit(
      [&](const auto& s) -> bool {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, BallUnion>) {
          for (std::size_t i = 0; i < s.centers.size(); ++i) {
            if (distance(y, s.centers[i], geometry_) < s.radii[i] - kSlack) return true;
          }
          return false;
        } else if constexpr (std::is_same_v<S, Strip>) {
          double d = std::fabs(coord(y, s.axis) - s.center);
          if (geometry_.kind == GeometryKind::FiniteGabor) {
            d = std::fmod(d, static_cast<double>(geometry_.N));
            d = std::min(d, geometry_.N - d);
          }
          return d <= s.half_width + kSlack;
        } else if constexpr (std::is_same_v<S, Band>) {
          const double c = coord(y, s.axis);
          return c >= s.lo - kSlack && c <= s.hi + kSlack;
        } else {
          const double v[3] = {y.first, y.second, y.first};
          return expr_->eval(v) != 0.0;
        }
      },
      shape_);
}

SetSpec SetSpec::translated(const GroupElement& h) const {
  SetSpec out(*this);
  out.pullback_ = compose(pullback_, inverse(h, geometry_), geometry_);
  return out;
}

Symbol::Symbol(const QuadGrid& grid, std::vector<double> samples, std::string provenance)
    : samples_(std::move(samples)), provenance_(std::move(provenance)), grid_fingerprint_(grid.fingerprint()) {
  if (samples_.size() != grid.size()) throw InvalidArgument("symbol samples do not match grid size");
  for (double v : samples_) {
    if (!std::isfinite(v) || v < 0.0) throw InvalidArgument("symbol values must be finite and nonnegative");
    sup_bound_ = std::max(sup_bound_, v);
  }
}

void Symbol::check_grid(const QuadGrid& grid) const {
  if (grid.fingerprint() != grid_fingerprint_ || grid.size() != samples_.size())
    throw InvalidArgument("symbol is not defined on this grid");
}

Symbol Symbol::indicator(const QuadGrid& grid, std::vector<SetSpec> sets) {
  std::vector<double> s(grid.size(), 0.0);
  for (const SetSpec& e : sets) {
    if (!(e.geometry() == grid.geometry()))
      throw InvalidArgument("set geometry " + e.geometry().name() + " does not match grid");
  }
  for (std::size_t j = 0; j < grid.size(); ++j) {
    for (const SetSpec& e : sets) {
      if (e.contains(grid.point(j))) {
        s[j] = 1.0;
        break;
      }
    }
  }
  Symbol out(grid, std::move(s), "indicator");
  out.sets_ = std::move(sets);
  return out;
}

Symbol Symbol::constant(const QuadGrid& grid, double value) {
  return Symbol(grid, std::vector<double>(grid.size(), value), "constant");
}

Symbol indicator(const QuadGrid& grid, const SetSpec& spec) { return Symbol::indicator(grid, {spec}); }

Symbol Symbol::derived(const Symbol& like, std::vector<double> samples, std::string provenance,
                       std::vector<SetSpec> sets) {
  if (samples.size() != like.size()) throw InvalidArgument("derived symbol has the wrong length");
  Symbol out;
  out.samples_ = std::move(samples);
  for (double v : out.samples_) {
    if (!std::isfinite(v) || v < 0.0) throw InvalidArgument("symbol values must be finite and nonnegative");
    out.sup_bound_ = std::max(out.sup_bound_, v);
  }
  out.provenance_ = std::move(provenance);
  out.grid_fingerprint_ = like.grid_fingerprint_;
  out.sets_ = std::move(sets);
  return out;
}

Symbol translate_symbol(const Symbol& sigma, const GroupElement& h, const QuadGrid& grid) {
  sigma.check_grid(grid);
  const Geometry& g = grid.geometry();
  if (!sigma.sets().empty()) {
    std::vector<SetSpec> moved;
    moved.reserve(sigma.sets().size());
    for (const SetSpec& e : sigma.sets()) moved.push_back(e.translated(h));
    Symbol ind = Symbol::indicator(grid, moved);
    return Symbol::derived(sigma, std::vector<double>(ind.samples().begin(), ind.samples().end()),
                           "translate", std::move(moved));
  }
  const GroupElement hinv = inverse(h, g);
  std::vector<double> s(grid.size(), 0.0);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const auto idx = grid.nearest_index(act(hinv, grid.point(j), g));
    if (idx) s[j] = sigma[*idx];
  }
  return Symbol::derived(sigma, std::move(s), "translate");
}

Symbol pointwise_max(const Symbol& sigma, const Symbol& rho) {
  if (sigma.grid_fingerprint() != rho.grid_fingerprint() || sigma.size() != rho.size())
    throw InvalidArgument("pointwise_max: symbols live on different grids");
  std::vector<double> s(sigma.size());
  for (std::size_t j = 0; j < s.size(); ++j) s[j] = std::max(sigma[j], rho[j]);
  std::vector<SetSpec> sets;
  const bool zero_sigma = sigma.sup_bound() == 0.0 && sigma.sets().empty();
  const bool zero_rho = rho.sup_bound() == 0.0 && rho.sets().empty();
  if (!sigma.sets().empty() && !rho.sets().empty()) {
    sets = sigma.sets();
    sets.insert(sets.end(), rho.sets().begin(), rho.sets().end());
  } else if (zero_sigma) {
    sets = rho.sets();
  } else if (zero_rho) {
    sets = sigma.sets();
  }
  return Symbol::derived(sigma, std::move(s), "max", std::move(sets));
}

Symbol complement(const Symbol& sigma) {
  if (sigma.sup_bound() > 1.0) throw InvalidArgument("complement needs a symbol with values in [0, 1]");
  std::vector<double> s(sigma.size());
  for (std::size_t j = 0; j < s.size(); ++j) s[j] = 1.0 - sigma[j];
  return Symbol::derived(sigma, std::move(s), "complement");
}

double l1_norm(const Symbol& sigma, const QuadGrid& grid) {
  sigma.check_grid(grid);
  return tree_sum(0, sigma.size(), [&](std::size_t j) { return sigma[j] * grid.weight(j); });
}

std::vector<PhasePoint> default_probes(const QuadGrid& grid, std::size_t stride) {
  if (stride == 0) throw InvalidArgument("probe stride must be positive");
  std::vector<PhasePoint> out;
  for (std::size_t j = 0; j < grid.size(); j += stride) out.push_back(grid.point(j));
  return out;
}

SupResult sup_translates_select(const Symbol& sigma, const FrameFamily& F, const QuadGrid& grid,
                                std::span<const GroupElement> candidates, std::span<const PhasePoint> probes,
                                const SupOptions& options) {
  sigma.check_grid(grid);
  check_frame_grid(F, grid);
  if (options.stages < 1) throw InvalidArgument("sup_translates_select needs at least one stage");
  if (probes.empty()) throw InvalidArgument("sup_translates_select needs probes");
  if (options.stages > 20) throw InvalidArgument("sup_translates_select supports at most 20 stages");
  const Geometry& g = grid.geometry();
  const PhasePoint e = grid.origin();
  std::vector<double> probe_dist(probes.size());
  for (std::size_t y = 0; y < probes.size(); ++y) probe_dist[y] = distance(e, probes[y], g);

  SupResult result{{}, sigma, {}, {identity_element(g)}};
  std::vector<double> tilde = berezin_values(sigma, F, grid, probes);
  std::size_t start = 0;
  for (int k = 1; k <= options.stages; ++k) {
    const double tail = std::ldexp(1.0, -(k - 1));
    const double target = 3.0 * std::ldexp(1.0, -k);
    double R = 0.0;
    for (std::size_t y = 0; y < probes.size(); ++y) {
      if (tilde[y] > tail) R = std::max(R, probe_dist[y]);
    }
    std::vector<PhasePoint> near;
    std::vector<double> near_tilde;
    for (std::size_t y = 0; y < probes.size(); ++y) {
      if (probe_dist[y] <= R + 1.0) {
        near.push_back(probes[y]);
        near_tilde.push_back(tilde[y]);
      }
    }
    SupStage stage{k, R, 0, 0.0, target, 0};
    double best = std::numeric_limits<double>::infinity();
    std::optional<std::size_t> chosen;
    std::optional<Symbol> moved;
    for (std::size_t m = start; m < candidates.size(); ++m) {
      const GroupElement& h = candidates[m];
      if (std::isfinite(options.budget_radius)) {
        bool inside = true;
        for (const GroupElement& p : result.products) {
          if (distance(e, act(compose(h, p, g), e, g), g) > options.budget_radius) {
            inside = false;
            break;
          }
        }
        if (!inside) {
          ++stage.rejected_by_budget;
          continue;
        }
      }
      Symbol candidate = translate_symbol(result.rho, h, grid);
      const std::vector<double> cand_tilde = berezin_values(candidate, F, grid, near);
      double bound = 0.0;
      for (std::size_t y = 0; y < near.size(); ++y) bound = std::max(bound, std::fabs(near_tilde[y] - cand_tilde[y]));
      best = std::min(best, bound);
      if (bound <= target) {
        chosen = m;
        stage.bound = bound;
        moved = std::move(candidate);
        break;
      }
    }
    if (!chosen) {
      throw StageFailure("sup_translates_select: no candidate reaches the stage-" + std::to_string(k) +
                             " bound " + std::to_string(target),
                         k, best);
    }
    stage.m = *chosen;
    result.stages.push_back(stage);
    result.selected.push_back(*chosen);
    const std::size_t prev = result.products.size();
    for (std::size_t mask = 0; mask < prev; ++mask)
      result.products.push_back(compose(candidates[*chosen], result.products[mask], g));
    Symbol next = pointwise_max(result.rho, *moved);
    result.rho = Symbol::derived(next, std::vector<double>(next.samples().begin(), next.samples().end()),
                                 "sup-construction", next.sets());
    start = *chosen + 1;
    if (k < options.stages) tilde = berezin_values(result.rho, F, grid, probes);
  }
  return result;
}

}  // namespace berezin
