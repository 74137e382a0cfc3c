// Copyright 2026 The berezin-lab Authors
// SPDX-License-Identifier: Apache-2.0

// Canonical reduction order. Every sum whose result is reported goes through
// tree_sum so that serial and OpenMP kernels agree bit for bit: leaves of at
// most kLeaf terms are accumulated in four interleaved lanes, combined as
// (l0 + l1) + (l2 + l3), and leaves are merged pairwise by halving.

#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace berezin {

inline constexpr std::size_t kLeaf = 64;

/// Sum of term(i) for i in [begin, end) in the canonical order.
template <class Term>
double tree_sum(std::size_t begin, std::size_t end, const Term& term) {
  const std::size_t n = end - begin;
  if (n <= kLeaf) {
    double lane[4] = {0.0, 0.0, 0.0, 0.0};
    std::size_t i = begin;
    for (; i + 4 <= end; i += 4) {
      lane[0] += term(i);
      lane[1] += term(i + 1);
      lane[2] += term(i + 2);
      lane[3] += term(i + 3);
    }
    for (std::size_t k = 0; i < end; ++i, ++k) lane[k] += term(i);
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
  }
  const std::size_t mid = begin + n / 2;
  return tree_sum(begin, mid, term) + tree_sum(mid, end, term);
}

/// Complex variant: real and imaginary parts follow the same tree.
template <class Term>
std::complex<double> tree_sum_complex(std::size_t begin, std::size_t end, const Term& term) {
  const std::size_t n = end - begin;
  if (n <= kLeaf) {
    double re[4] = {0.0, 0.0, 0.0, 0.0};
    double im[4] = {0.0, 0.0, 0.0, 0.0};
    std::size_t i = begin;
    for (; i + 4 <= end; i += 4) {
      for (std::size_t k = 0; k < 4; ++k) {
        const std::complex<double> t = term(i + k);
        re[k] += t.real();
        im[k] += t.imag();
      }
    }
    for (std::size_t k = 0; i < end; ++i, ++k) {
      const std::complex<double> t = term(i);
      re[k] += t.real();
      im[k] += t.imag();
    }
    return {(re[0] + re[1]) + (re[2] + re[3]), (im[0] + im[1]) + (im[2] + im[3])};
  }
  const std::size_t mid = begin + n / 2;
  return tree_sum_complex(begin, mid, term) + tree_sum_complex(mid, end, term);
}

inline double tree_sum(std::span<const double> values) {
  return tree_sum(0, values.size(), [&](std::size_t i) { return values[i]; });
}

inline std::complex<double> tree_sum(std::span<const std::complex<double>> values) {
  return tree_sum_complex(0, values.size(), [&](std::size_t i) { return values[i]; });
}

}  // namespace berezin
