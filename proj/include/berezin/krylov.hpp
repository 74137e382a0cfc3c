// Copyright 2026 The berezin-lab Authors
// SPDX-License-Identifier: Apache-2.0

// Thick-restart Hermitian Krylov eigensolver for the largest eigenvalues of
// an operator given only through its action.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

namespace berezin {

using MatVec = std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>;

struct KrylovOptions {
  double tolerance = 1e-8;   // ||A v - lambda v|| <= tolerance * ||A||
  double absolute_tolerance = 0.0;  // or below this, for operators with ||A|| near 0
  int basis_size = 0;        // 0: max(2k + 20, 40), capped at n
  int max_restarts = 500;
  std::uint64_t seed = 0x5eed;
  int dense_cutoff = 64;     // n at or below this is solved densely
};

struct KrylovResult {
  std::vector<double> values;  // descending
  Eigen::MatrixXcd vectors;    // matching columns, orthonormal
  std::vector<double> residuals;
  int restarts = 0;
  bool converged = false;
};

/// Top-k eigenpairs of a Hermitian operator on C^n.
KrylovResult top_eigenpairs(const MatVec& apply, Eigen::Index n, int k, const KrylovOptions& options = {});

}  // namespace berezin
