// Copyright 2026 The berezin-lab Authors
// SPDX-License-Identifier: Apache-2.0

// Sampled signals: the lattice they live on, the weighted inner product, and
// the built-in windows.

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace berezin {

using cplx = std::complex<double>;

/// Sample positions of a signal. Cyclic(N) is Z_N with unit step; Line(L, s)
/// is the symmetric lattice x_i = (i - m) s, i = 0..2m, m = round(L / s).
struct SignalLattice {
  enum class Kind { Cyclic, Line };
  Kind kind = Kind::Line;
  std::size_t n = 0;
  double step = 1.0;

  static SignalLattice cyclic(int N);
  static SignalLattice line(double half_width, double step);
  static SignalLattice line_default() { return line(16.0, 1.0 / 32.0); }

  /// Index of the sample at x = 0.
  std::size_t center() const { return kind == Kind::Cyclic ? 0 : n / 2; }
  double x(std::size_t i) const;
  double half_width() const { return kind == Kind::Cyclic ? 0.0 : center() * step; }

  bool operator==(const SignalLattice&) const = default;
};

/// A vector of the Hilbert space: samples plus the lattice they sit on.
/// <f, g> = step * sum f_i conj(g_i).
class HilbertVector {
 public:
  HilbertVector() = default;
  explicit HilbertVector(SignalLattice lattice);
  HilbertVector(SignalLattice lattice, std::vector<cplx> entries);

  const SignalLattice& lattice() const { return lattice_; }
  double sample_step() const { return lattice_.step; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<cplx>& entries() const { return entries_; }
  std::vector<cplx>& entries() { return entries_; }
  cplx operator[](std::size_t i) const { return entries_[i]; }
  cplx& operator[](std::size_t i) { return entries_[i]; }

  double norm() const;
  HilbertVector scaled(cplx c) const;

 private:
  SignalLattice lattice_;
  std::vector<cplx> entries_;
};

cplx inner(const HilbertVector& f, const HilbertVector& g);
HilbertVector operator-(const HilbertVector& f, const HilbertVector& g);
HilbertVector operator+(const HilbertVector& f, const HilbertVector& g);

/// Value at position x by linear interpolation between lattice samples
/// (zero outside the lattice). Exact at lattice points.
cplx sample_linear(const HilbertVector& v, double x);

/// Unit vector with i.i.d. complex Gaussian entries.
HilbertVector random_unit_vector(const SignalLattice& lattice, std::mt19937_64& rng);

/// Built-in windows, returned unnormalized. On a Line lattice the samples are
/// the functions below at x_i; on Cyclic(N) they are taken at u = x / sqrt(N)
/// with x the centred residue in [-N/2, N/2).
///   gaussian     2^{1/4} e^{-pi u^2}
///   haar         1 on [0, 1/2), -1 on [1/2, 1)
///   mexican_hat  (1 - 2 pi u^2) e^{-pi u^2}
///   box          1 on [0, 1)
///   dirac        1 at the sample u = 0
HilbertVector builtin_window(const std::string& name, const SignalLattice& lattice);
const std::vector<std::string>& builtin_window_names();
std::string builtin_window_description(const std::string& name);

/// One complex sample per row ("re,im" or a bare "re"). The row count must
/// equal lattice.n.
HilbertVector load_window_csv(const std::string& path, const SignalLattice& lattice);

/// FNV-1a over the sample bytes, used in provenance records.
std::uint64_t vector_hash(const HilbertVector& v);

}  // namespace berezin
