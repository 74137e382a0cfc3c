// Copyright 2026 The berezin-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "berezin/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "berezin/errors.hpp"
#include "berezin/kernels.hpp"
#include "berezin/krylov.hpp"
#include "berezin/reduce.hpp"

namespace berezin {

namespace {

// Rayleigh quotient of T_{1 - sigma}: sum_j (1 - sigma_j) w_j |<f, k_j>|^2 / ||f||^2.
double complement_quotient(const FrameBlock& all, const Symbol& sigma, const QuadGrid& grid, const HilbertVector& f) {
  const std::vector<cplx> c = omp::analysis(all, f.entries());
  const double num = tree_sum(0, c.size(), [&](std::size_t j) {
    return (1.0 - sigma[j]) * grid.weight(j) * std::norm(c[j]);
  });
  const double nf = f.norm();
  if (!(nf > 0.0)) throw InvalidArgument("trial vector is zero");
  return num / (nf * nf);
}

MatVec frame_operator(const FrameBlock& B, const QuadGrid& grid) {
  return [&B, &grid](const Eigen::VectorXcd& v) -> Eigen::VectorXcd {
    std::vector<cplx> c = omp::analysis(B, std::span<const cplx>(v.data(), static_cast<std::size_t>(v.size())));
    for (std::size_t a = 0; a < c.size(); ++a) c[a] *= grid.weight(B.grid_index[a]);
    const std::vector<cplx> out = omp::synthesis(B, c);
    return Eigen::Map<const Eigen::VectorXcd>(out.data(), v.size());
  };
}

}  // namespace

FrameBounds frame_bounds(const FrameFamily& F, const QuadGrid& grid) {
  const auto n = static_cast<Eigen::Index>(F.lattice().n);
  FrameBounds out;
  if (n <= kDenseCap) {
    // The frame operator is T_1; its spectrum clusters at 1, which stalls
    // Krylov iterations for the bottom eigenvalue, so solve densely.
    const SpectrumReport spec = spectrum(assemble_toeplitz(Symbol::constant(grid, 1.0), F, grid));
    out.upper = spec.values.front();
    out.lower = spec.values.back();
    return out;
  }
  const FrameBlock B = build_block(F, grid);
  const MatVec S = frame_operator(B, grid);
  out.upper = top_eigenpairs(S, n, 1).values.front();
  KrylovOptions opts;
  opts.absolute_tolerance = 1e-10 * out.upper;
  const double beta = out.upper;
  const MatVec shifted = [&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd { return beta * v - S(v); };
  out.lower = beta - top_eigenpairs(shifted, n, 1, opts).values.front();
  return out;
}

UncertaintyResult uncertainty_constant(const Symbol& sigma, const FrameFamily& F, const QuadGrid& grid,
                                       const UncertaintyOptions& options, std::span<const HilbertVector> witnesses) {
  sigma.check_grid(grid);
  check_frame_grid(F, grid);
  if (sigma.sup_bound() > 1.0 + 1e-12) throw InvalidArgument("uncertainty_constant needs sigma with values in [0, 1]");
  UncertaintyResult out;
  out.trials = options.trials;
  out.seed = options.seed;
  const std::vector<HilbertVector> trials = trial_vectors(F, grid, options.trials, options.seed, options.trial_margin);
  out.frame_residual = frame_operator_residual(F, grid, trials);

  if (sigma.sup_bound() > 0.0) {
    const SpectrumReport top = spectrum_matrix_free(sigma, F, grid, 1);
    out.top_sigma_eigenvalue = top.values.front();
    out.converged = top.converged;
  }
  if (out.frame_residual > options.parseval_tolerance) {
    out.frame_caveat = true;
    out.frame_lower_bound = frame_bounds(F, grid).lower;
  }
  out.c_estimate = out.frame_lower_bound - out.top_sigma_eigenvalue;

  const FrameBlock all = build_block(F, grid);
  double verification = std::numeric_limits<double>::infinity();
  for (const HilbertVector& f : trials) verification = std::min(verification, complement_quotient(all, sigma, grid, f));
  for (const HilbertVector& f : witnesses) {
    if (!(f.lattice() == F.lattice())) throw InvalidArgument("witness lattice does not match the frame");
    const double q = complement_quotient(all, sigma, grid, f);
    out.witness_value = std::min(out.witness_value.value_or(q), q);
    verification = std::min(verification, q);
  }
  out.verification = verification;
  return out;
}

DecayReport compactness_proxy(const SetSpec& E, const std::string& window, std::span<const double> extents,
                              const CompactnessOptions& options) {
  if (E.geometry().kind != GeometryKind::PlaneTF) throw InvalidArgument("compactness_proxy runs on the plane geometry");
  if (extents.empty()) throw InvalidArgument("compactness_proxy needs a nonempty extent schedule");
  for (std::size_t i = 1; i < extents.size(); ++i) {
    if (!(extents[i] > extents[i - 1])) throw InvalidArgument("compactness_proxy extents must increase");
  }
  DecayReport report;
  report.quantity = "eps_rank";
  report.parameter = "extent";
  report.thresholds = {{"eps", options.eps}, {"delta", options.delta}, {"lattice_margin", options.lattice_margin}};
  Series lmax{"lambda_max", {}}, trace{"trace", {}}, dim{"dimension", {}};
  for (double T : extents) {
    const QuadGrid grid = plane_grid(T, T, options.delta, options.delta);
    const SignalLattice lat = matched_lattice(grid, options.lattice_margin);
    const FrameFamily F = make_plane_gabor(builtin_window(window, lat), grid, window);
    const Symbol sigma = indicator(grid, E);
    try {
      const ToeplitzOperator op = assemble_toeplitz(sigma, F, grid, options.cap);
      const SpectrumReport spec = spectrum(op);
      report.schedule.emplace_back(T, static_cast<double>(spec.eps_rank(options.eps)));
      lmax.values.push_back(spec.values.empty() ? 0.0 : spec.values.front());
      trace.values.push_back(spec.trace);
      dim.values.push_back(static_cast<double>(lat.n));
    } catch (const ResourceError&) {
      report.sub_verdicts.emplace_back("truncated_at_extent", std::to_string(T));
      break;
    }
  }
  report.series = {lmax, trace, dim};
  std::string verdict = "inconclusive";
  const auto& s = report.schedule;
  if (s.size() >= 3) {
    const double d1 = s[s.size() - 2].second - s[s.size() - 3].second;
    const double d2 = s.back().second - s[s.size() - 2].second;
    bool growth = true;
    for (std::size_t i = 1; i < s.size(); ++i) {
      const double extent_ratio = s[i].first / s[i - 1].first;
      growth = growth && s[i - 1].second > 0.0 && s[i].second / s[i - 1].second >= 0.5 * extent_ratio;
    }
    if (d1 <= 1.0 && d2 <= 1.0) {
      verdict = "compact-consistent";
      report.verdict = Verdict::Decaying;
    } else if (growth) {
      verdict = "non-compact-consistent";
      report.verdict = Verdict::Stagnant;
    }
  }
  report.sub_verdicts.emplace_back("compactness", verdict);
  return report;
}

UncertaintyResult l1_symbol_bound(const Symbol& sigma, const FrameFamily& F, const QuadGrid& grid,
                                  const UncertaintyOptions& options) {
  UncertaintyResult out = uncertainty_constant(sigma, F, grid, options);
  out.l1_norm = l1_norm(sigma, grid);
  const std::vector<std::size_t> idx = nonzero_indices(sigma.samples());
  const FrameBlock B = build_block(F, grid, idx);
  const double s = F.lattice().step;
  double sup_k = 0.0;
  for (std::size_t a = 0; a < B.size(); ++a) {
    sup_k = std::max(sup_k, s * tree_sum(0, B.len[a], [&](std::size_t p) { return std::norm(B.value(a, p)); }));
  }
  out.l1_bound = std::min(sigma.sup_bound(), *out.l1_norm * sup_k);
  return out;
}

TranslateGram translate_gram(const FrameFamily& F, const QuadGrid& grid, const HilbertVector& f,
                             std::span<const GroupElement> h_list) {
  if (h_list.empty()) throw InvalidArgument("translate_gram needs at least one group element");
  if (!(f.norm() > 0.0)) throw InvalidArgument("translate_gram needs a nonzero vector");
  for (const GroupElement& h : h_list) {
    if (!F.in_invariant_subgroup(h)) throw InvalidArgument("translate_gram: element outside the invariant subgroup");
  }
  std::vector<HilbertVector> fs;
  TranslateGram out;
  HilbertVector cur = f;
  for (const GroupElement& h : h_list) {
    ShiftResult r = shift_apply(F, grid, h, cur);
    out.max_truncated_fraction = std::max(out.max_truncated_fraction, r.truncated_fraction);
    cur = std::move(r.vector);
    fs.push_back(cur);
  }
  const auto n = static_cast<Eigen::Index>(fs.size());
  out.gram.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) out.gram(i, j) = inner(fs[i], fs[j]);
  }
  out.min_eigenvalue = lambda_min(0.5 * (out.gram + out.gram.adjoint()));
  out.determinant = out.gram.determinant().real();
  return out;
}

StripCounterexample strip_counterexample(double phi_halfwidth, double f_halfwidth, const QuadGrid& grid,
                                         double center) {
  if (!(phi_halfwidth > 0.0) || !(f_halfwidth > 0.0)) throw InvalidArgument("strip_counterexample needs positive half-widths");
  const auto* e = std::get_if<PlaneExtent>(&grid.extent());
  if (!e) throw InvalidArgument("strip_counterexample runs on a plane grid");
  const SignalLattice lat = matched_lattice(grid);
  const double reach = std::fabs(center) + std::max(phi_halfwidth, f_halfwidth);
  if (reach > lat.half_width()) throw InvalidArgument("strip_counterexample: boxes do not fit on the signal lattice");
  auto box = [&](double K) {
    HilbertVector v(lat);
    for (std::size_t i = 0; i < lat.n; ++i) {
      const double x = lat.x(i);
      // Half-open [c - K, c + K) with a little slack for lattice rounding.
      if (x >= center - K - 1e-12 && x < center + K - 1e-12) v[i] = 1.0;
    }
    const double nv = v.norm();
    if (!(nv > 0.0)) throw InvalidArgument("strip_counterexample: box has no samples");
    return v.scaled(1.0 / nv);
  };
  StripCounterexample out;
  out.window = box(phi_halfwidth);
  out.witness = box(f_halfwidth);
  out.strip_halfwidth = phi_halfwidth + f_halfwidth;
  const FrameFamily F = make_plane_gabor(out.window, grid, "box");
  const std::vector<cplx> c = analysis(F, grid, out.witness);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (std::fabs(grid.point(j).second) >= out.strip_halfwidth - 1e-12) {
      ++out.points_outside;
      out.max_outside = std::max(out.max_outside, std::abs(c[j]));
    }
  }
  return out;
}

}  // namespace berezin
