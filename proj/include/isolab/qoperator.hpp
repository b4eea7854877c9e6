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
 * @file qoperator.hpp
 * @brief The acceptance operator Q = (I ⊗ <0^m|) U† Π1 U (I ⊗ |0^m>) and the
 * promise classes defined through its spectrum.
 */
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "isolab/circuit.hpp"
#include "isolab/random.hpp"
#include "isolab/verifier.hpp"

namespace isolab {

inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kSpectrumSlack = 1e-9;

/// Eigenvalues of a Hermitian matrix, largest first.
inline std::vector<double> descending_eigenvalues(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalue solver failed");
  std::vector<double> out(solver.eigenvalues().data(),
                          solver.eigenvalues().data() + solver.eigenvalues().size());
  std::reverse(out.begin(), out.end());
  return out;
}

/// Hermitian operator on 2^l dimensions with spectrum inside [0, 1].
class QOperator {
 public:
  explicit QOperator(CMatrix matrix) : matrix_(std::move(matrix)) {
    const auto dim = matrix_.rows();
    if (dim != matrix_.cols() || dim < 2 || (dim & (dim - 1)) != 0)
      throw std::invalid_argument("QOperator: dimension must be a power of two, at least 2");
    if ((matrix_ - matrix_.adjoint()).norm() > kHermitianTolerance)
      throw std::invalid_argument("QOperator: matrix is not Hermitian");
    matrix_ = (0.5 * (matrix_ + matrix_.adjoint())).eval();
    spectrum_ = descending_eigenvalues(matrix_);
    if (spectrum_.front() > 1.0 + kSpectrumSlack || spectrum_.back() < -kSpectrumSlack)
      throw std::invalid_argument("QOperator: spectrum leaves [0, 1]");
    while ((std::ptrdiff_t{1} << bits_) < dim) ++bits_;
  }

  /// V diag(eigenvalues) V† for a unitary V.
  static QOperator from_spectrum(const std::vector<double>& eigenvalues, const CMatrix& basis) {
    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(eigenvalues.data(),
                                                              static_cast<std::ptrdiff_t>(eigenvalues.size()));
    return QOperator(basis * diag.cast<Complex>().asDiagonal() * basis.adjoint());
  }

  unsigned witness_bits() const noexcept { return bits_; }
  std::ptrdiff_t dim() const noexcept { return matrix_.rows(); }
  const CMatrix& matrix() const noexcept { return matrix_; }

  /// λ1 >= λ2 >= ...
  const std::vector<double>& spectrum() const noexcept { return spectrum_; }
  double lambda1() const { return spectrum_[0]; }
  double lambda2() const { return spectrum_[1]; }

  /// <psi|Q|psi>.
  double expectation(const CVector& psi) const { return psi.dot(matrix_ * psi).real(); }

 private:
  CMatrix matrix_;
  std::vector<double> spectrum_;
  unsigned bits_ = 0;
};

inline QOperator build_q_operator(const Circuit& circuit) {
  const std::size_t witness_dim = std::size_t{1} << circuit.witness_qubits();
  const std::ptrdiff_t half = std::ptrdiff_t{1} << (circuit.qubits() - 1);
  // Accepting half of U|y, 0^m> for every basis witness y.
  CMatrix accepted(half, static_cast<std::ptrdiff_t>(witness_dim));
  for (std::size_t y = 0; y < witness_dim; ++y) {
    const CVector out = run_circuit(circuit, basis_state(circuit.witness_qubits(), y));
    accepted.col(static_cast<std::ptrdiff_t>(y)) = out.tail(half);
  }
  return QOperator(accepted.adjoint() * accepted);
}

/// Table of acceptance probabilities on computational basis witnesses:
/// entry y is Q[y, y].
inline PromiseInstance basis_witness_table(const Circuit& circuit, double p1, double p2) {
  const std::size_t witness_dim = std::size_t{1} << circuit.witness_qubits();
  std::vector<double> probs(witness_dim);
  for (std::size_t y = 0; y < witness_dim; ++y)
    probs[y] = std::clamp(accept_weight(run_circuit(circuit, basis_state(circuit.witness_qubits(), y))),
                          0.0, 1.0);
  return {WitnessTable(circuit.witness_qubits(), std::move(probs)), p1, p2};
}

/// Every promise label consistent with the sorted spectrum, for no-threshold
/// a, yes-threshold b and gap δ.
struct QLabels {
  bool qma_yes = false;    // λ1 >= b
  bool qma_no = false;     // λ1 <= a
  bool uqma_yes = false;   // λ1 >= b and λ2 <= a
  bool uqma_no = false;    // λ1 <= a
  bool pgqma_yes = false;  // λ1 >= b and λ1 - λ2 >= δ
  bool pgqma_no = false;   // λ1 <= a and λ1 - λ2 >= δ

  bool none_of_promise() const {
    return !(qma_yes || qma_no || uqma_yes || uqma_no || pgqma_yes || pgqma_no);
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    if (qma_yes) out.emplace_back("QmaYes");
    if (qma_no) out.emplace_back("QmaNo");
    if (uqma_yes) out.emplace_back("UqmaYes");
    if (uqma_no) out.emplace_back("UqmaNo");
    if (pgqma_yes) out.emplace_back("PgqmaYes");
    if (pgqma_no) out.emplace_back("PgqmaNo");
    if (out.empty()) out.emplace_back("NoneOfPromise");
    return out;
  }
};

inline QLabels classify_spectrum(double lambda1, double lambda2, double a, double b, double delta) {
  QLabels labels;
  labels.qma_yes = lambda1 >= b;
  labels.qma_no = lambda1 <= a;
  labels.uqma_yes = labels.qma_yes && lambda2 <= a;
  labels.uqma_no = labels.qma_no;
  labels.pgqma_yes = labels.qma_yes && lambda1 - lambda2 >= delta;
  labels.pgqma_no = labels.qma_no && lambda1 - lambda2 >= delta;
  return labels;
}

inline QLabels classify_q(const QOperator& q, double a, double b, double delta) {
  if (!(a < b)) throw std::invalid_argument("classify_q: need a < b");
  return classify_spectrum(q.lambda1(), q.lambda2(), a, b, delta);
}

/// Q ⊕ D on one extra (most significant) qubit, where D is diagonal with 1/3
/// on |1...1> and 0 elsewhere: a fresh qubit set to 1 routes the input to a
/// branch accepting all-ones with probability 1/3.
inline QOperator add_third_eigenvalue(const QOperator& q, unsigned max_qubits = kDefaultMaxQubits) {
  if (q.witness_bits() + 1 > max_qubits)
    throw std::invalid_argument("add_third_eigenvalue: doubled operator exceeds the qubit cap");
  const std::ptrdiff_t dim = q.dim();
  CMatrix out = CMatrix::Zero(2 * dim, 2 * dim);
  out.topLeftCorner(dim, dim) = q.matrix();
  out(2 * dim - 1, 2 * dim - 1) = 1.0 / 3.0;
  return QOperator(std::move(out));
}

struct PgqmaInstance {
  QOperator q;
  double a;      // no threshold
  double b;      // yes threshold
  double delta;  // promised gap
};

/// Turn a UQMA operator amplified to no-probability 1/3 - δ into a PGQMA
/// operator with thresholds (1/3, 2/3) and gap δ.
inline PgqmaInstance uqma_to_pgqma(const QOperator& q, double delta) {
  constexpr double third = 1.0 / 3.0;
  constexpr double eps = 1e-12;
  if (!(delta > 0.0 && delta <= third)) throw std::invalid_argument("uqma_to_pgqma: need 0 < δ <= 1/3");
  const bool no_case = q.lambda1() <= third - delta + eps;
  const bool yes_case = q.lambda1() >= 2.0 * third - eps && q.lambda2() <= third - delta + eps;
  if (!no_case && !yes_case)
    throw std::domain_error(
        "uqma_to_pgqma: operator is neither a no-instance with λ1 <= 1/3-δ nor a yes-instance "
        "with λ1 >= 2/3, λ2 <= 1/3-δ");
  return {add_third_eigenvalue(q), third, 2.0 * third, delta};
}

struct ThresholdSweep {
  int j_min = 0;
  int j_max = 0;
  int chosen = 0;
  double lower = 0.0;  // 2/3 + chosen δ/2
  double upper = 0.0;  // 2/3 + (chosen+1) δ/2
  QLabels chosen_labels;
  std::vector<int> successful;  // every j whose interval yields UqmaYes
};

/// Interval j of the sweep: (2/3 + jδ/2, 2/3 + (j+1)δ/2).
inline std::pair<double, double> sweep_interval(int j, double delta) {
  constexpr double two_thirds = 2.0 / 3.0;
  return {two_thirds + j * delta / 2, two_thirds + (j + 1) * delta / 2};
}

/// Re-pose a PGQMA operator as a UQMA question on a randomly chosen interval.
///
/// Admissible j keep the interval inside [1/3, 1], so no-instances (λ1 <= 1/3)
/// stay UQMA no-instances for every j, while a yes-instance with λ1 - λ2 >= δ
/// has at least one interval between λ2 and λ1.
inline ThresholdSweep pgqma_threshold_sweep(const QOperator& q, double delta, Rng& rng) {
  constexpr double eps = 1e-12;
  if (!(delta > 0.0 && delta <= 1.0 / 3.0))
    throw std::invalid_argument("pgqma_threshold_sweep: need 0 < δ <= 1/3");
  ThresholdSweep sweep;
  int j = 0;
  while (sweep_interval(j - 1, delta).first >= 1.0 / 3.0 - eps) --j;
  sweep.j_min = j;
  j = 0;
  while (sweep_interval(j + 1, delta).second <= 1.0 + eps) ++j;
  sweep.j_max = j;
  for (int i = sweep.j_min; i <= sweep.j_max; ++i) {
    const auto [lo, hi] = sweep_interval(i, delta);
    if (classify_spectrum(q.lambda1(), q.lambda2(), lo, hi, delta).uqma_yes)
      sweep.successful.push_back(i);
  }
  const auto span = static_cast<std::uint64_t>(sweep.j_max - sweep.j_min + 1);
  sweep.chosen = sweep.j_min + static_cast<int>(uniform_below(rng, span));
  std::tie(sweep.lower, sweep.upper) = sweep_interval(sweep.chosen, delta);
  sweep.chosen_labels = classify_spectrum(q.lambda1(), q.lambda2(), sweep.lower, sweep.upper, delta);
  return sweep;
}

/// Largest acceptance probability over states orthogonal to `psi`, which is
/// the largest eigenvalue of Q compressed to the orthogonal complement.
inline double max_orthogonal_acceptance(const QOperator& q, const CVector& psi) {
  const std::ptrdiff_t dim = q.dim();
  const CVector unit = psi / psi.norm();
  const CMatrix proj = CMatrix::Identity(dim, dim) - unit * unit.adjoint();
  return descending_eigenvalues(proj * q.matrix() * proj).front();
}

}  // namespace isolab
