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


#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "isolab/haar.hpp"
#include "isolab/qoperator.hpp"

using namespace isolab;
using Catch::Approx;

namespace {

QOperator diag_q(std::vector<double> values) {
  Eigen::VectorXd d = Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<std::ptrdiff_t>(values.size()));
  return QOperator(d.cast<Complex>().asDiagonal().toDenseMatrix());
}

std::vector<double> sorted_desc(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

void check_spectrum(const QOperator& q, std::vector<double> expected) {
  expected = sorted_desc(expected);
  REQUIRE(q.spectrum().size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(q.spectrum()[i] == Approx(expected[i]).margin(1e-12));
}

}  // namespace

TEST_CASE("identity circuit operator is the first-qubit projector") {
  const Circuit c(2, 0);
  const QOperator q = build_q_operator(c);
  CHECK((q.matrix() - diag_q({0, 0, 1, 1}).matrix()).norm() < 1e-15);
  const PromiseInstance t = basis_witness_table(c, 0.25, 0.75);
  CHECK(t.table()[0] == 0.0);
  CHECK(t.table()[1] == 0.0);
  CHECK(t.table()[2] == 1.0);
  CHECK(t.table()[3] == 1.0);

  Circuit had(1, 0);
  had.h(0);
  const PromiseInstance h = basis_witness_table(had, 0.25, 0.75);
  CHECK(h.table()[0] == Approx(0.5).margin(1e-15));
  CHECK(h.table()[1] == Approx(0.5).margin(1e-15));
}

TEST_CASE("expectation of the operator equals simulated acceptance") {
  Rng rng(6);
  for (int t = 0; t < 20; ++t) {
    const unsigned l = 1 + static_cast<unsigned>(t % 4), m = static_cast<unsigned>(t % 3);
    const Circuit c = random_circuit(l, m, 30, rng);
    const QOperator q = build_q_operator(c);
    CHECK((q.matrix() - q.matrix().adjoint()).norm() < 1e-12);
    CHECK(q.spectrum().front() <= 1 + 1e-12);
    CHECK(q.spectrum().back() >= -1e-12);
    const CVector a = random_state(q.dim(), rng), b = random_state(q.dim(), rng);
    CHECK(q.expectation(a) == Approx(simulate(c, a)).margin(1e-12));
    // Acceptance is linear in the density matrix: a mixture of |a>, |b> with weights w, 1-w.
    const double w = uniform01(rng);
    const CMatrix rho = w * a * a.adjoint() + (1 - w) * b * b.adjoint();
    CHECK((q.matrix() * rho).trace().real() ==
          Approx(w * simulate(c, a) + (1 - w) * simulate(c, b)).margin(1e-12));
    const PromiseInstance table = basis_witness_table(c, 0.25, 0.75);
    for (std::size_t y = 0; y < table.table().size(); ++y)
      CHECK(table.table()[y] == Approx(q.matrix()(y, y).real()).margin(1e-12));
  }
}

TEST_CASE("single rotation operator") {
  Circuit c(1, 0);
  c.ry(0, 1.1);
  const QOperator q = build_q_operator(c);
  CHECK(q.matrix()(0, 0).real() == Approx(std::pow(std::sin(0.55), 2)).margin(1e-14));
  check_spectrum(q, {1.0, 0.0});
}

TEST_CASE("promise labels from the spectrum") {
  const QLabels yes = classify_q(diag_q({0.9, 0.1, 0.1, 0.05}), 1.0 / 3, 2.0 / 3, 0.05);
  CHECK(yes.uqma_yes);
  CHECK(yes.qma_yes);
  CHECK(yes.pgqma_yes);
  const QLabels low = classify_q(diag_q({0.2, 0.1}), 1.0 / 3, 2.0 / 3, 0.05);
  CHECK(low.qma_no);
  CHECK(low.uqma_no);
  CHECK_FALSE(low.qma_yes);
  const QLabels two = classify_q(diag_q({0.9, 0.8, 0, 0}), 1.0 / 3, 2.0 / 3, 0.05);
  CHECK(two.qma_yes);
  CHECK(two.pgqma_yes);
  CHECK_FALSE(two.uqma_yes);
  const QLabels mid = classify_q(diag_q({0.5, 0.1}), 1.0 / 3, 2.0 / 3, 0.05);
  CHECK(mid.none_of_promise());
  CHECK(mid.names() == std::vector<std::string>{"NoneOfPromise"});
  CHECK_THROWS(classify_q(diag_q({0.5, 0.1}), 0.5, 0.5, 0.1));
}

TEST_CASE("padding adds an eigenvalue of one third") {
  check_spectrum(add_third_eigenvalue(diag_q({0.9, 0.1})), {0.9, 1.0 / 3, 0.1, 0});
  check_spectrum(add_third_eigenvalue(diag_q({0, 0})), {1.0 / 3, 0, 0, 0});
  const QOperator twice = add_third_eigenvalue(add_third_eigenvalue(diag_q({0.9, 0.1})));
  CHECK(twice.dim() == 8);
  check_spectrum(twice, {0.9, 1.0 / 3, 1.0 / 3, 0.1, 0, 0, 0, 0});
  Rng rng(2);
  const QOperator r = random_q_operator(3, rng);
  std::vector<double> expected = r.spectrum();
  expected.push_back(1.0 / 3);
  expected.resize(16, 0.0);
  check_spectrum(add_third_eigenvalue(r), expected);
}

TEST_CASE("unique to gapped promise conversion") {
  const PgqmaInstance no = uqma_to_pgqma(diag_q({0.2, 0.1}), 0.1);
  CHECK(no.q.lambda1() == Approx(1.0 / 3).margin(1e-12));
  CHECK(no.q.lambda2() == Approx(0.2).margin(1e-12));
  CHECK(no.q.lambda1() - no.q.lambda2() == Approx(2.0 / 15).margin(1e-12));
  CHECK(no.a == Approx(1.0 / 3));
  CHECK(no.b == Approx(2.0 / 3));
  const PgqmaInstance yes = uqma_to_pgqma(diag_q({0.9, 0.1}), 0.1);
  CHECK(yes.q.lambda1() == Approx(0.9).margin(1e-12));
  CHECK(yes.q.lambda2() == Approx(1.0 / 3).margin(1e-12));
  CHECK(yes.q.lambda1() - yes.q.lambda2() == Approx(0.9 - 1.0 / 3).margin(1e-12));
  const PgqmaInstance zero = uqma_to_pgqma(diag_q({0, 0}), 0.1);
  CHECK(zero.q.lambda1() == Approx(1.0 / 3).margin(1e-12));
  CHECK(zero.q.lambda2() == Approx(0.0).margin(1e-12));
  CHECK_THROWS_AS(uqma_to_pgqma(diag_q({0.5, 0.1}), 0.1), std::domain_error);
  CHECK_THROWS_AS(uqma_to_pgqma(diag_q({0.2, 0.1}), 0.0), std::invalid_argument);
}

TEST_CASE("converted instances satisfy the gapped promise") {
  Rng rng(41);
  for (int t = 0; t < 30; ++t) {
    const double delta = 0.05 + 0.2 * uniform01(rng);
    std::vector<double> values(4);
    for (auto& v : values) v = (1.0 / 3 - delta) * uniform01(rng);
    if (t % 2) values[0] = 2.0 / 3 + uniform01(rng) / 3;
    const PgqmaInstance p = uqma_to_pgqma(diag_q(values), delta);
    const QLabels labels = classify_q(p.q, p.a, p.b, p.delta);
    CHECK((t % 2 ? labels.pgqma_yes : labels.pgqma_no));
  }
}

TEST_CASE("threshold sweep on a two-level spectrum") {
  Rng rng(3);
  const double delta = 0.2;
  const ThresholdSweep s = pgqma_threshold_sweep(diag_q({0.95, 0.60}), delta, rng);
  std::vector<int> expected;
  for (int j = s.j_min; j <= s.j_max; ++j) {
    const double lo = 2.0 / 3 + j * delta / 2, hi = 2.0 / 3 + (j + 1) * delta / 2;
    CHECK(lo >= 1.0 / 3 - 1e-12);
    CHECK(hi <= 1.0 + 1e-12);
    if (0.60 <= lo && 0.95 >= hi) expected.push_back(j);
  }
  CHECK(s.successful == expected);
  CHECK(!expected.empty());
  CHECK(s.chosen >= s.j_min);
  CHECK(s.chosen <= s.j_max);
}

TEST_CASE("threshold sweep boundary case") {
  Rng rng(5);
  const double delta = 0.02;
  const ThresholdSweep s = pgqma_threshold_sweep(diag_q({2.0 / 3 + delta, 2.0 / 3}), delta, rng);
  for (int j : s.successful) {
    const auto [lo, hi] = sweep_interval(j, delta);
    CHECK(lo >= 2.0 / 3 - 1e-12);
    CHECK(hi <= 2.0 / 3 + delta + 1e-12);
  }
  CHECK(s.successful == std::vector<int>{0, 1});
}

TEST_CASE("threshold sweep never accepts a no-instance") {
  Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    const QOperator q = diag_q({uniform01(rng) / 3, uniform01(rng) / 3});
    const ThresholdSweep s = pgqma_threshold_sweep(q, 0.1, rng);
    CHECK(s.successful.empty());
    CHECK(s.chosen_labels.qma_no);
  }
}

TEST_CASE("orthogonal acceptance equals the second eigenvalue") {
  Rng rng(10);
  for (int t = 0; t < 20; ++t) {
    const QOperator q = random_q_operator(3, rng);
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(q.matrix());
    const CVector top = solver.eigenvectors().col(q.dim() - 1);
    CHECK(max_orthogonal_acceptance(q, top) == Approx(q.lambda2()).margin(1e-10));
    // Any other direction leaves at least lambda2 available.
    CHECK(max_orthogonal_acceptance(q, random_state(q.dim(), rng)) >= q.lambda2() - 1e-10);
  }
}

TEST_CASE("operator validation") {
  CHECK_THROWS(QOperator(CMatrix::Identity(3, 3)));
  CHECK_THROWS(QOperator(2.0 * CMatrix::Identity(2, 2)));
  CMatrix skew = CMatrix::Zero(2, 2);
  skew(0, 1) = 0.5;
  CHECK_THROWS(QOperator(skew));
}
