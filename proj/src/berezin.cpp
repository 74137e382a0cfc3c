// Copyright 2026 The berezin-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "berezin/berezin.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <numeric>

#include "berezin/errors.hpp"
#include "berezin/kernels.hpp"
#include "berezin/reduce.hpp"

namespace berezin {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// sup_{d >= r} of values, for each r; nullopt when no probe is that far out.
std::optional<double> envelope_at(std::span<const double> dist, std::span<const double> values, double r) {
  std::optional<double> best;
  for (std::size_t y = 0; y < dist.size(); ++y) {
    if (dist[y] >= r) best = std::max(best.value_or(0.0), values[y]);
  }
  return best;
}

// Composite Simpson rule on equally spaced values (odd count).
double simpson(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 3 || n % 2 == 0) throw InvalidArgument("simpson needs an odd number of nodes >= 3");
  const double inner = tree_sum(1, n - 1, [&](std::size_t i) { return (i % 2 == 1 ? 4.0 : 2.0) * f[i]; });
  return h / 3.0 * (f[0] + inner + f[n - 1]);
}

double fit_slope(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

void require_line(const HilbertVector& v, const char* what) {
  if (v.lattice().kind != SignalLattice::Kind::Line)
    throw InvalidArgument(std::string(what) + " needs a window on a line lattice");
}

// Signed position of sample i: x_i on a line, the centred residue on Z_N.
double position(const SignalLattice& lat, std::size_t i) {
  if (lat.kind == SignalLattice::Kind::Line) return lat.x(i);
  const auto n = static_cast<double>(lat.n);
  const auto x = static_cast<double>(i);
  return x >= n / 2 ? x - n : x;
}

std::pair<std::size_t, std::size_t> support(const HilbertVector& v) {
  std::size_t lo = 0;
  while (lo < v.size() && v[lo] == cplx{}) ++lo;
  std::size_t hi = v.size();
  while (hi > lo && v[hi - 1] == cplx{}) --hi;
  return {lo, hi};
}

cplx dtft(const HilbertVector& psi, std::size_t lo, std::size_t hi, double xi) {
  const SignalLattice& lat = psi.lattice();
  return lat.step * tree_sum_complex(lo, hi, [&](std::size_t i) {
           const double theta = -kTwoPi * xi * lat.x(i);
           return psi[i] * cplx(std::cos(theta), std::sin(theta));
         });
}

Verdict ratio_verdict(double final_value, double initial_value, double theta) {
  if (initial_value == 0.0) return Verdict::Decaying;
  return final_value <= theta * initial_value ? Verdict::Decaying : Verdict::Stagnant;
}

std::vector<PhasePoint> default_interior_probes(const QuadGrid& grid, double margin, std::size_t stride) {
  std::vector<std::size_t> idx;
  if (grid.geometry().kind == GeometryKind::FiniteGabor) {
    idx.resize(grid.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    stride = 1;
  } else {
    idx = grid.interior_indices(margin);
  }
  std::vector<PhasePoint> out;
  for (std::size_t k = 0; k < idx.size(); k += stride) out.push_back(grid.point(idx[k]));
  return out;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Decaying: return "decaying";
    case Verdict::Stagnant: return "stagnant";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::vector<double> berezin_values(const Symbol& sigma, const FrameFamily& F, const QuadGrid& grid,
                                   std::span<const PhasePoint> probes) {
  sigma.check_grid(grid);
  check_frame_grid(F, grid);
  const std::vector<std::size_t> idx = nonzero_indices(sigma.samples());
  if (idx.empty()) return std::vector<double>(probes.size(), 0.0);
  const FrameBlock B = build_block(F, grid, idx);
  std::vector<double> c(idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a) c[a] = sigma[idx[a]] * grid.weight(idx[a]);
  const FrameBlock P = build_block(F, probes);
  return omp::berezin(B, c, P);
}

BerezinProfile berezin_transform(const Symbol& sigma, const FrameFamily& F, const QuadGrid& grid,
                                 std::span<const PhasePoint> probes) {
  BerezinProfile out;
  out.probes.assign(probes.begin(), probes.end());
  out.values = berezin_values(sigma, F, grid, probes);
  out.grid_fingerprint = grid.fingerprint();
  out.window_name = F.window_name();
  const Geometry& g = grid.geometry();
  const PhasePoint e = grid.origin();
  std::vector<std::pair<double, double>> by_dist(probes.size());
  for (std::size_t y = 0; y < probes.size(); ++y) by_dist[y] = {distance(e, probes[y], g), out.values[y]};
  std::sort(by_dist.begin(), by_dist.end());
  // Sweep from the far end so each entry holds the sup over d >= r.
  double running = 0.0;
  for (std::size_t k = by_dist.size(); k-- > 0;) {
    running = std::max(running, by_dist[k].second);
    if (k + 1 < by_dist.size() && by_dist[k + 1].first == by_dist[k].first) {
      out.radial_envelope.back().second = running;
      continue;
    }
    out.radial_envelope.emplace_back(by_dist[k].first, running);
  }
  std::reverse(out.radial_envelope.begin(), out.radial_envelope.end());
  return out;
}

DecayReport thinness_report(const Symbol& sigma, const FrameFamily& F, const QuadGrid& grid,
                            std::span<const double> R_list, const ThinnessOptions& options) {
  if (R_list.empty()) throw InvalidArgument("thinness_report needs a nonempty R list");
  for (std::size_t i = 0; i < R_list.size(); ++i) {
    if (!(R_list[i] > 0.0) || (i > 0 && !(R_list[i] > R_list[i - 1])))
      throw InvalidArgument("thinness_report R list must be positive and increasing");
  }
  if (options.steps < 2 || options.stride == 0) throw InvalidArgument("thinness_report needs steps >= 2, stride >= 1");
  sigma.check_grid(grid);
  const Geometry& g = grid.geometry();
  const PhasePoint e = grid.origin();

  std::vector<PhasePoint> probes = default_interior_probes(grid, options.margin, options.stride);
  double radius = 0.0;
  if (const auto* pe = std::get_if<PlaneExtent>(&grid.extent())) {
    radius = std::min(pe->t_half, pe->w_half) - options.margin;
    std::erase_if(probes, [&](const PhasePoint& y) { return distance(e, y, g) > radius + 1e-12; });
  } else {
    for (const PhasePoint& y : probes) radius = std::max(radius, distance(e, y, g));
  }

  DecayReport report;
  report.quantity = "berezin_envelope";
  report.parameter = "r";
  report.thresholds = {{"theta", options.theta}, {"probe_margin", options.margin},
                       {"probe_radius", radius}, {"probe_count", static_cast<double>(probes.size())}};
  if (probes.empty() || !(radius > 0.0)) {
    report.verdict = Verdict::Inconclusive;
    return report;
  }

  const std::vector<double> tilde = berezin_values(sigma, F, grid, probes);
  std::vector<double> dist(probes.size());
  for (std::size_t y = 0; y < probes.size(); ++y) dist[y] = distance(e, probes[y], g);

  // Ball integrals only need the support of sigma.
  const std::vector<std::size_t> supp = nonzero_indices(sigma.samples());
  std::vector<std::vector<double>> balls(R_list.size(), std::vector<double>(probes.size()));
  for (std::size_t r = 0; r < R_list.size(); ++r) {
    const double R = R_list[r];
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t y = 0; y < static_cast<std::ptrdiff_t>(probes.size()); ++y) {
      balls[r][y] = tree_sum(0, supp.size(), [&](std::size_t k) {
        const std::size_t j = supp[k];
        return distance(grid.point(j), probes[y], g) <= R ? sigma[j] * grid.weight(j) : 0.0;
      });
    }
  }

  bool complete = true;
  std::vector<Series> ball_series(R_list.size());
  for (std::size_t r = 0; r < R_list.size(); ++r) ball_series[r].name = "ball_integral_R=" + std::to_string(R_list[r]);
  for (int i = 0; i < options.steps; ++i) {
    const double r = radius * i / options.steps;
    const auto env = envelope_at(dist, tilde, r);
    if (!env) {
      complete = false;
      break;
    }
    report.schedule.emplace_back(r, *env);
    for (std::size_t k = 0; k < R_list.size(); ++k) ball_series[k].values.push_back(*envelope_at(dist, balls[k], r));
  }
  report.series = std::move(ball_series);
  if (!complete || report.schedule.size() < 2) {
    report.verdict = Verdict::Inconclusive;
    return report;
  }
  report.verdict = ratio_verdict(report.schedule.back().second, report.schedule.front().second, options.theta);
  for (const Series& s : report.series) {
    report.sub_verdicts.emplace_back(s.name, to_string(ratio_verdict(s.values.back(), s.values.front(), options.theta)));
  }
  return report;
}

SchurResult schur_condition(const FrameFamily& F, const QuadGrid& grid,
                            const std::function<double(const PhasePoint&)>& w, double R,
                            std::optional<std::vector<PhasePoint>> probes) {
  if (!(R >= 0.0)) throw InvalidArgument("schur_condition needs R >= 0");
  check_frame_grid(F, grid);
  const Geometry& g = grid.geometry();
  const std::vector<PhasePoint> P = probes ? std::move(*probes) : default_interior_probes(grid, 3.0, 4);
  if (P.empty()) throw InvalidArgument("schur_condition has no probes");
  std::vector<double> wx(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    wx[j] = w(grid.point(j));
    if (!(wx[j] > 0.0)) throw InvalidArgument("schur_condition weight must be positive on the grid");
  }
  const FrameBlock B = build_block(F, grid);
  const FrameBlock Q = build_block(F, P);
  const double s = B.lattice.step;
  std::vector<double> full(P.size()), tail(P.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t y = 0; y < static_cast<std::ptrdiff_t>(P.size()); ++y) {
    const double wy = w(P[y]);
    const std::size_t ylo = Q.lo[y];
    const std::size_t yhi = Q.lo[y] + Q.len[y];
    std::vector<double> term(B.size(), 0.0);
    std::vector<char> far(B.size(), 0);
    for (std::size_t a = 0; a < B.size(); ++a) {
      const std::size_t j = B.grid_index[a];
      far[a] = distance(grid.point(j), P[y], g) >= R;
      const std::size_t lo = std::max(ylo, B.lo[a]);
      const std::size_t hi = std::min(yhi, B.lo[a] + B.len[a]);
      if (lo >= hi) continue;
      const cplx gram = s * tree_sum_complex(lo, hi, [&](std::size_t i) {
                          return B.value(a, i - B.lo[a]) * std::conj(Q.value(y, i - ylo));
                        });
      term[a] = std::abs(gram) * wx[j] * grid.weight(j);
    }
    full[y] = tree_sum(term) / wy;
    tail[y] = tree_sum(0, term.size(), [&](std::size_t a) { return far[a] ? term[a] : 0.0; }) / wy;
  }
  return {*std::max_element(full.begin(), full.end()), *std::min_element(full.begin(), full.end()),
          *std::max_element(tail.begin(), tail.end())};
}

DecayReport kernel_decay_profile(const FrameFamily& F, const QuadGrid& grid,
                                 std::optional<std::vector<PhasePoint>> probes, const KernelDecayOptions& options) {
  if (!(options.bin_width > 0.0)) throw InvalidArgument("kernel_decay_profile needs a positive bin width");
  check_frame_grid(F, grid);
  const Geometry& g = grid.geometry();
  const PhasePoint e = grid.origin();
  std::vector<PhasePoint> P;
  if (probes) {
    P = std::move(*probes);
  } else {
    P.assign(grid.points().begin(), grid.points().end());
  }
  std::vector<double> modulus(P.size()), dist(P.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t y = 0; y < static_cast<std::ptrdiff_t>(P.size()); ++y) {
    modulus[y] = std::abs(kernel_gram(F, P[y], e));
    dist[y] = distance(P[y], e, g);
  }
  std::vector<double> bin_max;
  std::vector<char> seen;
  for (std::size_t y = 0; y < P.size(); ++y) {
    const auto b = static_cast<std::size_t>(std::floor(dist[y] / options.bin_width));
    if (b >= bin_max.size()) {
      bin_max.resize(b + 1, 0.0);
      seen.resize(b + 1, 0);
    }
    bin_max[b] = std::max(bin_max[b], modulus[y]);
    seen[b] = 1;
  }
  DecayReport report;
  report.quantity = "kernel_modulus";
  report.parameter = "d";
  report.thresholds = {{"bin_width", options.bin_width}, {"relative_threshold", options.threshold}};
  std::vector<double> lx, ly;
  for (std::size_t b = 0; b < bin_max.size(); ++b) {
    if (!seen[b]) continue;
    const double edge = static_cast<double>(b) * options.bin_width;
    report.schedule.emplace_back(edge, bin_max[b]);
    if (b > 0 && bin_max[b] > 0.0) {
      lx.push_back(std::log(edge + 0.5 * options.bin_width));
      ly.push_back(std::log(bin_max[b]));
    }
  }
  if (lx.size() >= 2) report.rate = fit_slope(lx, ly);
  if (report.schedule.size() < 2) {
    report.verdict = Verdict::Inconclusive;
  } else {
    report.verdict = ratio_verdict(report.schedule.back().second, report.schedule.front().second, options.threshold);
  }
  return report;
}

double admissibility_constant(const HilbertVector& psi, int direction, const AdmissibilityOptions& options) {
  require_line(psi, "admissibility_constant");
  if (direction != 1 && direction != -1) throw InvalidArgument("direction must be +1 or -1");
  const cplx mean = psi.sample_step() * tree_sum(psi.entries());
  if (std::abs(mean) > options.mean_tolerance) {
    throw NotAdmissible("wavelet mean " + std::to_string(std::abs(mean)) + " exceeds tolerance " +
                        std::to_string(options.mean_tolerance) + "; the admissibility integral diverges");
  }
  const double xi_hi = std::min(options.xi_max, 0.5 / psi.sample_step());
  if (!(xi_hi > options.xi_min)) throw InvalidArgument("admissibility frequency range is empty");
  const double span = std::log(xi_hi / options.xi_min);
  auto intervals = static_cast<std::size_t>(std::ceil(span / std::numbers::ln2 * options.nodes_per_octave));
  intervals += intervals % 2;
  const double h = span / static_cast<double>(intervals);
  const auto [lo, hi] = support(psi);
  std::vector<double> f(intervals + 1);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(f.size()); ++k) {
    const double xi = options.xi_min * std::exp(h * static_cast<double>(k));
    // d xi / xi = d log xi.
    f[k] = std::norm(dtft(psi, lo, hi, direction * xi));
  }
  return simpson(f, h);
}

HilbertVector normalize_admissible(const HilbertVector& psi, const AdmissibilityOptions& options) {
  const double plus = admissibility_constant(psi, +1, options);
  const double minus = admissibility_constant(psi, -1, options);
  if (!(plus > 0.0) || !(minus > 0.0)) throw NotNormalizable("admissibility constant vanishes");
  if (std::fabs(plus - minus) > 0.05 * std::max(plus, minus)) {
    throw NotNormalizable("admissibility constants differ between directions (" + std::to_string(plus) + " vs " +
                          std::to_string(minus) + "); scaling cannot balance them");
  }
  return psi.scaled(1.0 / std::sqrt(0.5 * (plus + minus)));
}

double b1w_slice(const HilbertVector& psi, double a) {
  require_line(psi, "b1w_slice");
  if (!(a > 0.0)) throw InvalidArgument("b1w_slice needs a > 0");
  if (a < 1.0) return b1w_slice(psi, 1.0 / a) / a;
  const SignalLattice& lat = psi.lattice();
  const double s = lat.step;
  const auto [lo, hi] = support(psi);
  if (lo == hi) return 0.0;
  const double x_lo = lat.x(lo);
  const double x_last = lat.x(hi - 1);
  // psi_lin(u) vanishes outside (x_lo - s, x_last + s).
  const double b_lo = x_lo / a - (x_last + s);
  const double b_hi = x_last / a - (x_lo - s);
  const double db = std::min(s, 1.0 / a) / 16.0;
  const auto nb = static_cast<std::size_t>(std::ceil((b_hi - b_lo) / db));
  const double step = (b_hi - b_lo) / static_cast<double>(nb);
  const double scale = 1.0 / std::sqrt(a);
  std::vector<double> mod(nb + 1);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k <= static_cast<std::ptrdiff_t>(nb); ++k) {
    const double b = b_lo + step * static_cast<double>(k);
    const cplx W = s * tree_sum_complex(lo, hi, [&](std::size_t i) {
                     return psi[i] * std::conj(scale * sample_linear(psi, lat.x(i) / a - b));
                   });
    mod[k] = std::abs(W);
  }
  // Trapezoid rule; the end values are zero.
  return step * (tree_sum(mod) - 0.5 * (mod.front() + mod.back()));
}

double b1w_slope(const HilbertVector& psi, double a_lo, double a_hi, int nodes) {
  if (!(a_lo > 0.0) || !(a_hi > a_lo) || nodes < 2) throw InvalidArgument("b1w_slope needs 0 < a_lo < a_hi, nodes >= 2");
  std::vector<double> lx(nodes), ly(nodes);
  for (int k = 0; k < nodes; ++k) {
    const double a = a_lo * std::pow(a_hi / a_lo, static_cast<double>(k) / (nodes - 1));
    lx[k] = std::log(a);
    ly[k] = std::log(b1w_slice(psi, a));
  }
  return fit_slope(lx, ly);
}

DecayReport b1w_integral(const HilbertVector& psi, std::span<const double> A_schedule, double epsilon) {
  if (A_schedule.empty()) throw InvalidArgument("b1w_integral needs a nonempty schedule");
  if (!(epsilon > 0.0)) throw InvalidArgument("b1w_integral needs epsilon > 0");
  for (std::size_t i = 0; i < A_schedule.size(); ++i) {
    if (!(A_schedule[i] > 1.0) || (i > 0 && !(A_schedule[i] > A_schedule[i - 1])))
      throw InvalidArgument("b1w_integral schedule must be increasing and > 1");
  }
  // With v = log a and slice(1/a) = a slice(a) the integral over [1/A, A]
  // folds onto [0, log A] with weight e^{v(1/2 + eps)} + e^{v(1/2 - eps)}.
  constexpr int kNodesPerOctave = 32;
  const double hmax = std::numbers::ln2 / kNodesPerOctave;
  auto integrand = [&](double v) {
    return b1w_slice(psi, std::exp(v)) * (std::exp(v * (0.5 + epsilon)) + std::exp(v * (0.5 - epsilon)));
  };
  DecayReport report;
  report.quantity = "b1w_truncated_integral";
  report.parameter = "A";
  report.thresholds = {{"epsilon", epsilon}, {"nodes_per_octave", kNodesPerOctave}};
  Series increments{"increment", {}};
  double total = 0.0;
  double v0 = 0.0;
  for (double A : A_schedule) {
    const double v1 = std::log(A);
    auto n = static_cast<std::size_t>(std::ceil((v1 - v0) / hmax));
    n = std::max<std::size_t>(2, n + n % 2);
    const double h = (v1 - v0) / static_cast<double>(n);
    std::vector<double> f(n + 1);
    for (std::size_t k = 0; k <= n; ++k) f[k] = integrand(v0 + h * static_cast<double>(k));
    const double piece = simpson(f, h);
    total += piece;
    report.schedule.emplace_back(A, total);
    increments.values.push_back(piece);
    v0 = v1;
  }
  report.series.push_back(increments);
  // The first increment covers [1, A_0]; convergence is judged on the rest.
  const auto& d = increments.values;
  if (d.size() >= 3) {
    std::vector<double> lx, ly;
    for (std::size_t k = 1; k < d.size(); ++k) {
      if (d[k] > 0.0) {
        lx.push_back(std::log(A_schedule[k]));
        ly.push_back(std::log(d[k]));
      }
    }
    if (lx.size() >= 2) report.rate = fit_slope(lx, ly);
    bool shrinking = true;
    for (std::size_t k = 2; k < d.size(); ++k) shrinking = shrinking && d[k] < d[k - 1];
    if (shrinking) {
      report.verdict = Verdict::Decaying;
    } else if (d.back() >= d[d.size() - 2]) {
      report.verdict = Verdict::Stagnant;
    } else {
      report.verdict = Verdict::Inconclusive;
    }
  }
  return report;
}

double holder_modulus(const HilbertVector& phi, double alpha, std::span<const double> h_list) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("holder_modulus needs 0 < alpha <= 1");
  if (h_list.empty()) throw InvalidArgument("holder_modulus needs at least one h");
  const SignalLattice& lat = phi.lattice();
  const double s = lat.step;
  const auto n = static_cast<long long>(lat.n);
  const bool cyclic = lat.kind == SignalLattice::Kind::Cyclic;
  double C = 0.0;
  for (double h : h_list) {
    if (!(h > 0.0)) throw InvalidArgument("holder_modulus needs positive h");
    const long long m = std::llround(h / s);
    if (m == 0) throw InvalidArgument("holder_modulus: h is below half a sample step");
    const double h_eff = static_cast<double>(m) * s;
    auto at = [&](long long i) -> cplx {
      if (cyclic) return phi[static_cast<std::size_t>(((i % n) + n) % n)];
      return (i >= 0 && i < n) ? phi[static_cast<std::size_t>(i)] : cplx{};
    };
    const long long end = cyclic ? n : n + m;
    const double l1 = s * tree_sum(0, static_cast<std::size_t>(end), [&](std::size_t i) {
                        const auto k = static_cast<long long>(i);
                        return std::abs(at(k - m) - at(k));
                      });
    C = std::max(C, l1 / std::pow(h_eff, alpha));
  }
  return C;
}

MomentResult moment_check(const HilbertVector& phi, double alpha) {
  if (!(alpha > 0.0)) throw InvalidArgument("moment_check needs alpha > 0");
  const SignalLattice& lat = phi.lattice();
  const double s = lat.step;
  const cplx mean = s * tree_sum(phi.entries());
  const double moment = s * tree_sum(0, phi.size(), [&](std::size_t i) {
                          return std::abs(phi[i]) * std::pow(std::fabs(position(lat, i)), alpha);
                        });
  return {mean, moment};
}

}  // namespace berezin
