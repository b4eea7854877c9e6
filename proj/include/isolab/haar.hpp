/*
 *   Copyright 2026 The isolab Authors
 *
 *   Licensed under the Apache License, Version 2.0 (the "License");
 *   you may not use this file except in compliance with the License.
 *   You may obtain a copy of the License at
 *
 *       http://www.apache.org/licenses/LICENSE-2.0
 *
 *   Unless required by applicable law or agreed to in writing, software
 *   distributed under the License is distributed on an "AS IS" BASIS,
 *   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *   See the License for the specific language governing permissions and
 *   limitations under the License.
 */

/**
 * @file haar.hpp
 * @brief Haar-random unitaries and the random-projection and random-basis
 * experiments built on them.
 */
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "isolab/circuit.hpp"
#include "isolab/qoperator.hpp"
#include "isolab/random.hpp"
#include "isolab/stats.hpp"

namespace isolab {

/// N x cols matrix of independent standard complex Gaussians, filled column
/// by column.
inline CMatrix ginibre(std::ptrdiff_t rows, std::ptrdiff_t cols, Rng& rng) {
  constexpr double scale = 0.70710678118654752440;
  CMatrix g(rows, cols);
  for (std::ptrdiff_t c = 0; c < cols; ++c)
    for (std::ptrdiff_t r = 0; r < rows; ++r) {
      const double re = standard_normal(rng);
      const double im = standard_normal(rng);
      g(r, c) = Complex(scale * re, scale * im);
    }
  return g;
}

/// Haar-distributed N x N unitary: QR of a Ginibre matrix with the phases of
/// diag(R) moved into Q.
inline CMatrix haar_unitary(std::ptrdiff_t n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("haar_unitary: N must be at least 1");
  const CMatrix g = ginibre(n, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix& r = qr.matrixQR();
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    const double mag = std::abs(d);
    q.col(i) *= mag == 0.0 ? Complex(1.0) : d / mag;
  }
  return q;
}

/// First `cols` columns of a Haar unitary, by Gram-Schmidt on `cols` Ginibre
/// columns. Given the same stream this reproduces the leading columns of
/// haar_unitary(n, rng) up to rounding.
inline CMatrix haar_frame(std::ptrdiff_t n, std::ptrdiff_t cols, Rng& rng) {
  if (cols < 1 || cols > n) throw std::invalid_argument("haar_frame: need 1 <= cols <= N");
  CMatrix f = ginibre(n, cols, rng);
  for (std::ptrdiff_t c = 0; c < cols; ++c) {
    for (int pass = 0; pass < 2; ++pass)
      for (std::ptrdiff_t p = 0; p < c; ++p) f.col(c) -= f.col(p).dot(f.col(c)) * f.col(p);
    f.col(c) /= f.col(c).norm();
  }
  return f;
}

inline double unitarity_defect(const CMatrix& u) {
  return (u.adjoint() * u - CMatrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

/// Random traceless Hermitian matrix (GUE sample with its trace removed).
inline CMatrix random_traceless_hermitian(std::ptrdiff_t n, Rng& rng) {
  const CMatrix g = ginibre(n, n, rng);
  CMatrix x = 0.5 * (g + g.adjoint());
  x -= (x.trace() / static_cast<double>(n)) * CMatrix::Identity(n, n);
  return x;
}

/// Operator with Haar eigenbasis and eigenvalues uniform in [0, 1].
inline QOperator random_q_operator(unsigned bits, Rng& rng) {
  const std::ptrdiff_t dim = std::ptrdiff_t{1} << bits;
  std::vector<double> eigenvalues(static_cast<std::size_t>(dim));
  for (auto& e : eigenvalues) e = uniform01(rng);
  return QOperator::from_spectrum(eigenvalues, haar_unitary(dim, rng));
}

// ---------------------------------------------------------------------------
// Second moment of tr(U P_k U† X)

/// E |tr(U P_k U† X)|^2 = tr(X†X) (k(k+1)/(N(N+1)) - k(k-1)/(N(N-1))).
inline double second_moment_formula(std::ptrdiff_t n, std::ptrdiff_t k, const CMatrix& x) {
  if (n < 1 || k < 0 || k > n) throw std::invalid_argument("second_moment_formula: need 0 <= k <= N");
  if (x.rows() != n || x.cols() != n) throw std::invalid_argument("second_moment_formula: X must be N x N");
  if (std::abs(x.trace()) > 1e-10) throw std::invalid_argument("second_moment_formula: X must be traceless");
  const double N = static_cast<double>(n);
  const double K = static_cast<double>(k);
  const double sym = K * (K + 1.0) / (N * (N + 1.0));
  const double anti = n == 1 ? 0.0 : K * (K - 1.0) / (N * (N - 1.0));
  return (x.adjoint() * x).trace().real() * (sym - anti);
}

/// Haar average of |tr(U P_k U† X)|^2 from the projectors (I ± SWAP)/2 onto
/// the symmetric and antisymmetric subspaces: tr(X†X) k(N-k) / (N(N^2-1)).
/// This is half of second_moment_formula.
inline double second_moment_weingarten(std::ptrdiff_t n, std::ptrdiff_t k, const CMatrix& x) {
  second_moment_formula(n, k, x);
  if (n == 1) return 0.0;
  const double N = static_cast<double>(n);
  const double K = static_cast<double>(k);
  return (x.adjoint() * x).trace().real() * K * (N - K) / (N * (N * N - 1.0));
}

/// |tr(U P_k U† X)|^2 for one unitary: the sum of the first k diagonal
/// entries of U† X U.
inline double projected_trace_sq(const CMatrix& u, std::ptrdiff_t k, const CMatrix& x) {
  if (k == u.cols()) return std::norm(x.trace());  // P_N = I
  Complex acc = 0.0;
  for (std::ptrdiff_t c = 0; c < k; ++c) acc += u.col(c).dot(x * u.col(c));
  return std::norm(acc);
}

/// Monte-Carlo estimate of E |tr(U P_k U† X)|^2; trial t uses substream t.
inline RunningStats mc_second_moment(std::ptrdiff_t n, std::ptrdiff_t k, const CMatrix& x,
                                     std::uint64_t trials, std::uint64_t seed) {
  second_moment_formula(n, k, x);  // validates the arguments
  RunningStats stats;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng = substream(seed, t);
    stats.add(projected_trace_sq(haar_unitary(n, rng), k, x));
  }
  return stats;
}

// ---------------------------------------------------------------------------
// Random projections restricted to a two-dimensional subspace

/// How the unitary of each projection trial is drawn.
enum class ProjectionSampling {
  FullUnitary,  // Haar U on all N dimensions, then U† v_i
  Frame,        // (U† v_0, U† v_1) drawn directly as a Haar 2-frame
};

struct ProjectionTrial {
  double gap = 0.0;         // λmax - λmin of the 2x2 compression
  double gersgorin = 0.0;   // |V00 - V11| + 2 |V01|
};

/// Gap and Gersgorin bound of the 2x2 matrix V_ij = <v_i| U P_d U† |v_j>,
/// given w_i = U† v_i.
inline ProjectionTrial projection_trial(const CVector& w0, const CVector& w1, std::ptrdiff_t d) {
  const Complex v00 = w0.head(d).squaredNorm();
  const Complex v11 = w1.head(d).squaredNorm();
  const Complex v01 = w0.head(d).dot(w1.head(d));
  const double diff = (v00 - v11).real();
  ProjectionTrial t;
  t.gap = std::sqrt(diff * diff + 4.0 * std::norm(v01));
  t.gersgorin = std::abs(diff) + 2.0 * std::abs(v01);
  return t;
}

struct ProjectionExperimentResult {
  unsigned l = 0;
  std::ptrdiff_t n = 0;
  std::ptrdiff_t d = 0;
  std::vector<double> gaps;
  std::vector<double> gersgorin;
  RunningStats stats;
  std::size_t gersgorin_violations = 0;

  /// 2^{-l/2 + 2}.
  double bound() const { return std::ldexp(1.0, 2) / std::sqrt(static_cast<double>(n)); }

  /// Fraction of trials whose gap is at least `threshold`.
  double tail_fraction(double threshold) const {
    const auto hits = std::count_if(gaps.begin(), gaps.end(), [&](double g) { return g >= threshold; });
    return gaps.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(gaps.size());
  }
};

/// Gap created on span{v0, v1} by Haar-random rank-d projectors.
inline ProjectionExperimentResult projection_gap_experiment(
    unsigned l, std::ptrdiff_t d, std::uint64_t trials, std::uint64_t seed, const CVector& v0,
    const CVector& v1, ProjectionSampling sampling = ProjectionSampling::Frame) {
  const std::ptrdiff_t n = std::ptrdiff_t{1} << l;
  if (d < 1 || d > n) throw std::invalid_argument("projection_gap_experiment: need 1 <= d <= 2^l");
  if (v0.size() != n || v1.size() != n)
    throw std::invalid_argument("projection_gap_experiment: subspace vectors must have dimension 2^l");
  if (std::abs(v0.norm() - 1.0) > 1e-10 || std::abs(v1.norm() - 1.0) > 1e-10 ||
      std::abs(v0.dot(v1)) > 1e-10)
    throw std::invalid_argument("projection_gap_experiment: subspace basis is not orthonormal");
  ProjectionExperimentResult result;
  result.l = l;
  result.n = n;
  result.d = d;
  result.gaps.reserve(trials);
  result.gersgorin.reserve(trials);
  for (std::uint64_t t = 0; t < trials; ++t) {
    ProjectionTrial trial;
    if (d == n) {
      // P_N = I, so the compression is the Gram matrix of {v0, v1}: the identity.
      trial = {0.0, 0.0};
    } else {
      Rng rng = substream(seed, t);
      CVector w0, w1;
      if (sampling == ProjectionSampling::FullUnitary) {
        const CMatrix u = haar_unitary(n, rng);
        w0 = u.adjoint() * v0;
        w1 = u.adjoint() * v1;
      } else {
        const CMatrix frame = haar_frame(n, 2, rng);
        w0 = frame.col(0);
        w1 = frame.col(1);
      }
      trial = projection_trial(w0, w1, d);
    }
    result.gaps.push_back(trial.gap);
    result.gersgorin.push_back(trial.gersgorin);
    result.stats.add(trial.gap);
    if (trial.gap > trial.gersgorin + 1e-10) ++result.gersgorin_violations;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Measurement in a Haar-random basis

/// Outcome distribution of measuring `psi` in the columns of `basis`.
inline Eigen::VectorXd basis_distribution(const CMatrix& basis, const CVector& psi) {
  return (basis.adjoint() * psi).cwiseAbs2();
}

/// Total variation distance: half the 1-norm difference.
inline double total_variation(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  return 0.5 * (p - q).cwiseAbs().sum();
}

struct TvdResult {
  std::vector<double> tvds;
  RunningStats stats;
  double floor = 0.0;

  double fraction_below(double threshold) const {
    const auto hits = std::count_if(tvds.begin(), tvds.end(), [&](double v) { return v < threshold; });
    return tvds.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(tvds.size());
  }
};

inline constexpr double kTvdFloor = 0.2;

inline TvdResult random_basis_tvd(const CVector& psi1, const CVector& psi2, std::uint64_t trials,
                                  std::uint64_t seed, double floor = kTvdFloor) {
  if (psi1.size() != psi2.size()) throw std::invalid_argument("random_basis_tvd: dimension mismatch");
  if (std::abs(psi1.norm() - 1.0) > kNormTolerance || std::abs(psi2.norm() - 1.0) > kNormTolerance)
    throw std::invalid_argument("random_basis_tvd: states must be normalized");
  TvdResult result;
  result.floor = floor;
  result.tvds.reserve(trials);
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng = substream(seed, t);
    const CMatrix basis = haar_unitary(psi1.size(), rng);
    const double tvd = total_variation(basis_distribution(basis, psi1), basis_distribution(basis, psi2));
    result.tvds.push_back(tvd);
    result.stats.add(tvd);
  }
  return result;
}

}  // namespace isolab
