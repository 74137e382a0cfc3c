// Copyright 2026 The berezin-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "berezin/signal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <sstream>

#include "berezin/errors.hpp"
#include "berezin/reduce.hpp"

namespace berezin {

namespace {

double window_value(const std::string& name, double u) {
  constexpr double pi = std::numbers::pi;
  if (name == "gaussian") return std::pow(2.0, 0.25) * std::exp(-pi * u * u);
  if (name == "haar") return (u >= 0.0 && u < 0.5) ? 1.0 : (u >= 0.5 && u < 1.0) ? -1.0 : 0.0;
  if (name == "mexican_hat") return (1.0 - 2.0 * pi * u * u) * std::exp(-pi * u * u);
  if (name == "box") return (u >= 0.0 && u < 1.0) ? 1.0 : 0.0;
  if (name == "dirac") return u == 0.0 ? 1.0 : 0.0;
  throw InvalidArgument("unknown window '" + name + "'");
}

void require_same_lattice(const HilbertVector& f, const HilbertVector& g) {
  if (!(f.lattice() == g.lattice())) throw InvalidArgument("vectors live on different signal lattices");
}

}  // namespace

SignalLattice SignalLattice::cyclic(int N) {
  if (N < 2) throw InvalidArgument("cyclic lattice needs N >= 2");
  return {Kind::Cyclic, static_cast<std::size_t>(N), 1.0};
}

SignalLattice SignalLattice::line(double half_width, double step) {
  if (!(half_width > 0.0) || !(step > 0.0)) throw InvalidArgument("line lattice needs positive L and s");
  const auto m = static_cast<std::size_t>(std::llround(half_width / step));
  if (m == 0) throw InvalidArgument("line lattice step exceeds half-width");
  return {Kind::Line, 2 * m + 1, step};
}

double SignalLattice::x(std::size_t i) const {
  if (kind == Kind::Cyclic) return static_cast<double>(i);
  return (static_cast<double>(i) - static_cast<double>(center())) * step;
}

HilbertVector::HilbertVector(SignalLattice lattice) : lattice_(lattice), entries_(lattice.n, cplx{}) {}

HilbertVector::HilbertVector(SignalLattice lattice, std::vector<cplx> entries)
    : lattice_(lattice), entries_(std::move(entries)) {
  if (entries_.size() != lattice_.n) throw InvalidArgument("vector length does not match its lattice");
}

double HilbertVector::norm() const {
  const double s = tree_sum(0, entries_.size(), [&](std::size_t i) { return std::norm(entries_[i]); });
  return std::sqrt(lattice_.step * s);
}

HilbertVector HilbertVector::scaled(cplx c) const {
  HilbertVector out(*this);
  for (auto& e : out.entries_) e *= c;
  return out;
}

cplx inner(const HilbertVector& f, const HilbertVector& g) {
  require_same_lattice(f, g);
  return f.sample_step() *
         tree_sum_complex(0, f.size(), [&](std::size_t i) { return f[i] * std::conj(g[i]); });
}

HilbertVector operator-(const HilbertVector& f, const HilbertVector& g) {
  require_same_lattice(f, g);
  HilbertVector out(f);
  for (std::size_t i = 0; i < f.size(); ++i) out[i] -= g[i];
  return out;
}

HilbertVector operator+(const HilbertVector& f, const HilbertVector& g) {
  require_same_lattice(f, g);
  HilbertVector out(f);
  for (std::size_t i = 0; i < f.size(); ++i) out[i] += g[i];
  return out;
}

cplx sample_linear(const HilbertVector& v, double x) {
  const SignalLattice& lat = v.lattice();
  const auto n = static_cast<long long>(lat.n);
  const double r = x / lat.step + static_cast<double>(lat.center());
  double k = std::floor(r);
  double frac = r - k;
  if (frac > 1.0 - 1e-12) {
    k += 1.0;
    frac = 0.0;
  } else if (frac < 1e-12) {
    frac = 0.0;
  }
  if (k < -1.0 || k >= static_cast<double>(n)) return {};
  const auto ki = static_cast<long long>(k);
  const cplx left = ki >= 0 ? v[static_cast<std::size_t>(ki)] : cplx{};
  if (frac == 0.0) return left;
  const cplx right = ki + 1 < n ? v[static_cast<std::size_t>(ki + 1)] : cplx{};
  return (1.0 - frac) * left + frac * right;
}

HilbertVector random_unit_vector(const SignalLattice& lattice, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  HilbertVector f(lattice);
  for (auto& e : f.entries()) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    e = {re, im};
  }
  return f.scaled(1.0 / f.norm());
}

HilbertVector builtin_window(const std::string& name, const SignalLattice& lattice) {
  HilbertVector w(lattice);
  for (std::size_t i = 0; i < lattice.n; ++i) {
    double u = lattice.x(i);
    if (lattice.kind == SignalLattice::Kind::Cyclic) {
      const double N = static_cast<double>(lattice.n);
      if (u >= N / 2) u -= N;
      u /= std::sqrt(N);
    }
    w[i] = window_value(name, u);
  }
  return w;
}

const std::vector<std::string>& builtin_window_names() {
  static const std::vector<std::string> names = {"box", "dirac", "gaussian", "haar", "mexican_hat"};
  return names;
}

std::string builtin_window_description(const std::string& name) {
  if (name == "box") return "indicator of [0, 1)";
  if (name == "dirac") return "unit sample at the origin";
  if (name == "gaussian") return "2^{1/4} exp(-pi x^2), unit L2 norm";
  if (name == "haar") return "Haar wavelet on [0, 1)";
  if (name == "mexican_hat") return "(1 - 2 pi x^2) exp(-pi x^2)";
  throw InvalidArgument("unknown window '" + name + "'");
}

HilbertVector load_window_csv(const std::string& path, const SignalLattice& lattice) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open window file " + path);
  std::vector<cplx> samples;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double re = 0.0, im = 0.0;
    if (!(ss >> re)) throw InvalidArgument(path + ":" + std::to_string(row) + ": expected a number");
    ss >> im;
    samples.emplace_back(re, im);
  }
  if (samples.size() != lattice.n) {
    throw InvalidArgument(path + " has " + std::to_string(samples.size()) + " samples, lattice needs " +
                          std::to_string(lattice.n));
  }
  return HilbertVector(lattice, std::move(samples));
}

std::uint64_t vector_hash(const HilbertVector& v) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const cplx& c : v.entries()) {
    const double parts[2] = {c.real(), c.imag()};
    const auto* p = reinterpret_cast<const unsigned char*>(parts);
    for (std::size_t i = 0; i < sizeof(parts); ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  }
  return h;
}

}  // namespace berezin
