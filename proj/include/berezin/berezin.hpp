// Copyright 2026 The berezin-lab Authors
// SPDX-License-Identifier: Apache-2.0

// Berezin transforms, thinness diagnostics, Schur-test quantities and the
// wavelet diagnostics (admissibility, B^1_w integrals, Holder modulus,
// moments). Every "-> infinity" statement is reported as a finite-schedule
// verdict with explicit thresholds.

#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "berezin/frames.hpp"
#include "berezin/symbols.hpp"

namespace berezin {

enum class Verdict { Decaying, Stagnant, Inconclusive };
std::string to_string(Verdict v);

/// A named column sampled on the report's schedule.
struct Series {
  std::string name;
  std::vector<double> values;
};

struct DecayReport {
  std::string quantity;
  std::string parameter = "r";
  std::vector<std::pair<double, double>> schedule;  // (parameter, value), parameter increasing
  std::vector<Series> series;                        // extra columns on the same parameters
  Verdict verdict = Verdict::Inconclusive;
  std::optional<double> rate;
  std::vector<std::pair<std::string, double>> thresholds;
  std::vector<std::pair<std::string, std::string>> sub_verdicts;
};

struct BerezinProfile {
  std::vector<PhasePoint> probes;
  std::vector<double> values;
  std::vector<std::pair<double, double>> radial_envelope;  // (r, sup_{d(e,y) >= r} values)
  std::uint64_t grid_fingerprint = 0;
  std::string window_name;
};

/// sigma~(y) = sum_i sigma_i |<k_{x_i}, k_y>|^2 w_i at each probe.
std::vector<double> berezin_values(const Symbol& sigma, const FrameFamily& F, const QuadGrid& grid,
                                   std::span<const PhasePoint> probes);

BerezinProfile berezin_transform(const Symbol& sigma, const FrameFamily& F, const QuadGrid& grid,
                                 std::span<const PhasePoint> probes);

struct ThinnessOptions {
  double theta = 0.05;   // decaying when envelope(final r) <= theta * envelope(0)
  double margin = 1.0;   // probes stay this far inside the grid
  std::size_t stride = 4;
  int steps = 16;
};

/// Probes: every `stride`-th interior grid point (inside the disk of radius
/// min(t_half, w_half) - margin on the plane). Radii r_i = i / steps * radius,
/// i < steps. Records sup_{d(e,y) >= r} of sigma~ and of ball integrals for
/// each R in R_list.
DecayReport thinness_report(const Symbol& sigma, const FrameFamily& F, const QuadGrid& grid,
                            std::span<const double> R_list, const ThinnessOptions& options = {});

struct SchurResult {
  double M_estimate = 0.0;
  double M_min = 0.0;  // smallest per-probe value, for invariance checks
  double tail_sup = 0.0;
};

/// max over probes y of w(y)^{-1} sum_x |<k_x, k_y>| w(x) w_x, and the same
/// restricted to d(x, y) >= R. Probes default to every point on FiniteGabor
/// and interior points (stride 4, margin 3) otherwise.
SchurResult schur_condition(const FrameFamily& F, const QuadGrid& grid,
                            const std::function<double(const PhasePoint&)>& w, double R,
                            std::optional<std::vector<PhasePoint>> probes = std::nullopt);

struct KernelDecayOptions {
  double bin_width = 1.0;
  double threshold = 1e-3;  // relative to the first bin
};

/// |<k_x, k_e>| for grid points x, binned by d(x, e); schedule holds
/// (bin lower edge, max in bin).
DecayReport kernel_decay_profile(const FrameFamily& F, const QuadGrid& grid,
                                 std::optional<std::vector<PhasePoint>> probes = std::nullopt,
                                 const KernelDecayOptions& options = {});

struct AdmissibilityOptions {
  double xi_min = 0x1p-20;
  double xi_max = 0x1p10;  // capped at the lattice Nyquist frequency
  int nodes_per_octave = 32;
  double mean_tolerance = 1e-6;
};

/// int_0^inf |psi^(direction * xi)|^2 / xi dxi with psi^ the discrete-time
/// Fourier transform of the samples, Simpson's rule in log xi.
double admissibility_constant(const HilbertVector& psi, int direction, const AdmissibilityOptions& options = {});

/// psi scaled so the direction-averaged constant is 1. Throws NotNormalizable
/// when the two directions differ by more than 5%.
HilbertVector normalize_admissible(const HilbertVector& psi, const AdmissibilityOptions& options = {});

/// int |W_psi psi(a, b)| db with W(a, b) = <psi, psi_{a,b}>.
double b1w_slice(const HilbertVector& psi, double a);

/// Least-squares slope of log b1w_slice(a) against log a at `nodes`
/// log-uniform points of [a_lo, a_hi].
double b1w_slope(const HilbertVector& psi, double a_lo, double a_hi, int nodes = 17);

/// Truncated int_{1/A}^{A} int |W_psi psi(a, b)| a^{1/2 + eps} db da / a for
/// each A in the schedule.
DecayReport b1w_integral(const HilbertVector& psi, std::span<const double> A_schedule, double epsilon);

/// max over h of ||tau_h phi - phi||_{L1} / h^alpha, with h snapped to the lattice.
double holder_modulus(const HilbertVector& phi, double alpha, std::span<const double> h_list);

struct MomentResult {
  cplx mean;
  double moment = 0.0;
};

/// (sum phi step, sum |phi| |x|^alpha step).
MomentResult moment_check(const HilbertVector& phi, double alpha);

}  // namespace berezin
