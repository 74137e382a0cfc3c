// Copyright 2026 The berezin-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "berezin/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "berezin/errors.hpp"

namespace berezin {

namespace {

// Orthogonalizes v against the first m columns of V twice (classical
// Gram-Schmidt with reorthogonalization) and returns its remaining norm.
double orthogonalize(const Eigen::MatrixXcd& V, Eigen::Index m, Eigen::VectorXcd& v) {
  for (int pass = 0; pass < 2; ++pass) {
    if (m == 0) break;
    const Eigen::VectorXcd c = V.leftCols(m).adjoint() * v;
    v -= V.leftCols(m) * c;
  }
  return v.norm();
}

Eigen::VectorXcd random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    v[i] = {re, im};
  }
  return v;
}

KrylovResult dense_solve(const MatVec& apply, Eigen::Index n, int k) {
  Eigen::MatrixXcd A(n, n);
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    A.col(j) = apply(e);
    e[j] = 0.0;
  }
  A = 0.5 * (A + A.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
  KrylovResult out;
  out.vectors.resize(n, k);
  for (int i = 0; i < k; ++i) {
    const Eigen::Index c = n - 1 - i;
    out.values.push_back(es.eigenvalues()[c]);
    out.vectors.col(i) = es.eigenvectors().col(c);
    out.residuals.push_back((A * out.vectors.col(i) - out.values.back() * out.vectors.col(i)).norm());
  }
  out.converged = true;
  return out;
}

}  // namespace

KrylovResult top_eigenpairs(const MatVec& apply, Eigen::Index n, int k, const KrylovOptions& options) {
  if (k < 1 || k > n) throw InvalidArgument("top_eigenpairs needs 1 <= k <= n");
  if (n <= options.dense_cutoff) return dense_solve(apply, n, k);
  Eigen::Index m = options.basis_size > 0 ? options.basis_size : std::max<Eigen::Index>(2 * k + 20, 40);
  m = std::min(m, n);
  if (m <= k) return dense_solve(apply, n, k);
  const Eigen::Index keep = std::min<Eigen::Index>(m - 1, k + std::max<Eigen::Index>(k / 2, 5));

  std::mt19937_64 rng(options.seed);
  Eigen::MatrixXcd V(n, m);
  Eigen::MatrixXcd AV(n, m);
  Eigen::VectorXcd v = random_vector(n, rng);
  V.col(0) = v / v.norm();
  Eigen::Index filled = 0;  // columns of V with A-images computed
  Eigen::Index basis = 1;   // columns of V filled
  double norm_estimate = 0.0;
  KrylovResult out;

  for (int restart = 0; restart <= options.max_restarts; ++restart) {
    // Extend the basis to m columns.
    while (basis < m || filled < basis) {
      AV.col(filled) = apply(V.col(filled));
      ++filled;
      if (basis == m) continue;
      Eigen::VectorXcd w = AV.col(filled - 1);
      double nw = orthogonalize(V, basis, w);
      if (nw <= 1e-12 * std::max(1.0, AV.col(filled - 1).norm())) {
        // Invariant subspace reached; restart the chain from a random direction.
        w = random_vector(n, rng);
        nw = orthogonalize(V, basis, w);
      }
      V.col(basis) = w / nw;
      ++basis;
    }
    // Rayleigh-Ritz on span(V).
    Eigen::MatrixXcd H = V.adjoint() * AV;
    H = 0.5 * (H + H.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    const Eigen::VectorXd& theta = es.eigenvalues();
    norm_estimate = std::max({norm_estimate, std::fabs(theta[0]), std::fabs(theta[m - 1])});
    const double tol = std::max(options.tolerance * norm_estimate, options.absolute_tolerance);

    Eigen::MatrixXcd Y(m, keep);
    for (Eigen::Index i = 0; i < keep; ++i) Y.col(i) = es.eigenvectors().col(m - 1 - i);
    const Eigen::MatrixXcd X = V * Y;
    const Eigen::MatrixXcd AX = AV * Y;
    out.values.assign(k, 0.0);
    out.residuals.assign(k, 0.0);
    Eigen::Index first_bad = -1;
    for (Eigen::Index i = 0; i < k; ++i) {
      out.values[i] = theta[m - 1 - i];
      out.residuals[i] = (AX.col(i) - out.values[i] * X.col(i)).norm();
      if (first_bad < 0 && out.residuals[i] > tol) first_bad = i;
    }
    out.restarts = restart;
    if (first_bad < 0) {
      out.vectors = X.leftCols(k);
      out.converged = true;
      return out;
    }
    // Thick restart: keep the leading Ritz vectors and extend from the
    // residual of the first unconverged pair.
    Eigen::VectorXcd r = AX.col(first_bad) - out.values[first_bad] * X.col(first_bad);
    V.leftCols(keep) = X;
    AV.leftCols(keep) = AX;
    double nr = orthogonalize(V, keep, r);
    if (nr <= 1e-14 * std::max(1.0, norm_estimate)) {
      r = random_vector(n, rng);
      nr = orthogonalize(V, keep, r);
    }
    V.col(keep) = r / nr;
    basis = keep + 1;
    filled = keep;
  }
  out.vectors = V.leftCols(k);
  out.converged = false;
  return out;
}

}  // namespace berezin
