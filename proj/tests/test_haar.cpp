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

#include <cmath>

#include "isolab/haar.hpp"

using namespace isolab;
using Catch::Approx;

namespace {

CMatrix diag_matrix(std::vector<double> v) {
  CMatrix m = CMatrix::Zero(static_cast<std::ptrdiff_t>(v.size()), static_cast<std::ptrdiff_t>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) m(static_cast<std::ptrdiff_t>(i), static_cast<std::ptrdiff_t>(i)) = v[i];
  return m;
}

bool within_sigma(const RunningStats& s, double target, double sigmas = 3.0) {
  return std::abs(s.mean - target) <= sigmas * s.standard_error();
}

}  // namespace

TEST_CASE("sampled unitaries are unitary") {
  Rng rng(1);
  for (std::ptrdiff_t n : {1, 2, 3, 8, 33}) CHECK(unitarity_defect(haar_unitary(n, rng)) < 1e-12);
  CHECK_THROWS(haar_unitary(0, rng));
}

TEST_CASE("one-dimensional Haar unitary is a uniform phase") {
  RunningStats re, im;
  for (std::uint64_t t = 0; t < 20000; ++t) {
    Rng rng = substream(3, t);
    const Complex z = haar_unitary(1, rng)(0, 0);
    REQUIRE(std::abs(std::abs(z) - 1.0) < 1e-14);
    re.add(z.real());
    im.add(z.imag());
  }
  CHECK(within_sigma(re, 0.0));
  CHECK(within_sigma(im, 0.0));
  // cos of a uniform angle has variance 1/2.
  CHECK(re.variance() == Approx(0.5).margin(0.02));
}

TEST_CASE("Haar matrix elements have mean square modulus 1/N") {
  RunningStats s;
  for (std::uint64_t t = 0; t < 20000; ++t) {
    Rng rng = substream(4, t);
    s.add(std::norm(haar_unitary(4, rng)(0, 0)));
  }
  CHECK(within_sigma(s, 0.25));
}

TEST_CASE("frame sampling reproduces leading unitary columns") {
  for (std::uint64_t t = 0; t < 10; ++t) {
    Rng a = substream(5, t), b = substream(5, t);
    const CMatrix u = haar_unitary(16, a);
    const CMatrix f = haar_frame(16, 2, b);
    CHECK((u.leftCols(2) - f).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("closed-form second moment values") {
  CHECK(second_moment_formula(2, 1, diag_matrix({1, -1})) == Approx(2.0 / 3).margin(1e-15));
  CHECK(second_moment_formula(4, 0, diag_matrix({1, -1, 2, -2})) == 0.0);
  CHECK(second_moment_formula(4, 4, diag_matrix({1, -1, 2, -2})) == Approx(0.0).margin(1e-15));
  CHECK(second_moment_weingarten(2, 1, diag_matrix({1, -1})) == Approx(1.0 / 3).margin(1e-15));
  CHECK_THROWS(second_moment_formula(2, 1, diag_matrix({1, 1})));
  CHECK_THROWS(second_moment_formula(2, 3, diag_matrix({1, -1})));
}

TEST_CASE("two-dimensional second moment by quadrature") {
  // For N = 2, k = 1, X = diag(1, -1): tr(U P U† X) = 2t - 1 with t = |U00|^2
  // uniform on [0, 1].
  const int steps = 100000;
  double integral = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double t = (i + 0.5) / steps;
    integral += (2 * t - 1) * (2 * t - 1) / steps;
  }
  CHECK(second_moment_weingarten(2, 1, diag_matrix({1, -1})) == Approx(integral).margin(1e-8));
  const RunningStats mc = mc_second_moment(2, 1, diag_matrix({1, -1}), 40000, 6);
  CHECK(within_sigma(mc, integral));
}

TEST_CASE("Monte Carlo second moment matches the Haar average") {
  Rng xrng(7);
  for (auto [n, k] : {std::pair<std::ptrdiff_t, std::ptrdiff_t>{3, 1}, {4, 2}, {6, 5}}) {
    const CMatrix x = random_traceless_hermitian(n, xrng);
    const RunningStats mc = mc_second_moment(n, k, x, 30000, 8 + static_cast<std::uint64_t>(n));
    CHECK(within_sigma(mc, second_moment_weingarten(n, k, x)));
  }
}

TEST_CASE("projection gap vanishes for the full projector") {
  const CVector v0 = CVector::Unit(8, 0), v1 = CVector::Unit(8, 5);
  const auto r = projection_gap_experiment(3, 8, 100, 1, v0, v1);
  CHECK(r.stats.max == 0.0);
  CHECK(r.gersgorin_violations == 0);
}

TEST_CASE("projection gap never exceeds the Gersgorin bound") {
  Rng rng(11);
  for (int t = 0; t < 2000; ++t) {
    const CMatrix f = haar_frame(16, 2, rng);
    const auto trial = projection_trial(f.col(0), f.col(1), 1 + t % 15);
    CHECK(trial.gap <= trial.gersgorin + 1e-12);
    // Independent oracle: eigenvalue spread of the 2x2 compression.
    Eigen::Matrix2cd v;
    const std::ptrdiff_t d = 1 + t % 15;
    v(0, 0) = f.col(0).head(d).squaredNorm();
    v(1, 1) = f.col(1).head(d).squaredNorm();
    v(0, 1) = f.col(0).head(d).dot(f.col(1).head(d));
    v(1, 0) = std::conj(v(0, 1));
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(v);
    CHECK(trial.gap == Approx(es.eigenvalues()(1) - es.eigenvalues()(0)).margin(1e-12));
  }
}

TEST_CASE("projection gap law does not depend on the subspace or sampling mode") {
  const std::ptrdiff_t n = 16;
  Rng rng(12);
  const CMatrix w = haar_unitary(n, rng);
  const CVector e0 = CVector::Unit(n, 0), e1 = CVector::Unit(n, 1);
  const CVector r0 = w.col(0), r1 = w.col(1);
  const auto a = projection_gap_experiment(4, 8, 4000, 13, e0, e1, ProjectionSampling::FullUnitary);
  const auto b = projection_gap_experiment(4, 8, 4000, 14, r0, r1, ProjectionSampling::FullUnitary);
  const auto c = projection_gap_experiment(4, 8, 4000, 15, e0, e1, ProjectionSampling::Frame);
  const double se_ab = std::hypot(a.stats.standard_error(), b.stats.standard_error());
  const double se_ac = std::hypot(a.stats.standard_error(), c.stats.standard_error());
  CHECK(std::abs(a.stats.mean - b.stats.mean) <= 3 * se_ab);
  CHECK(std::abs(a.stats.mean - c.stats.mean) <= 3 * se_ac);
  CHECK(a.stats.mean <= a.bound());
}

TEST_CASE("projection experiment validation") {
  const CVector v0 = CVector::Unit(4, 0);
  CHECK_THROWS(projection_gap_experiment(2, 0, 1, 1, v0, CVector::Unit(4, 1)));
  CHECK_THROWS(projection_gap_experiment(2, 2, 1, 1, v0, v0));
  CHECK_THROWS(projection_gap_experiment(2, 2, 1, 1, v0, CVector::Unit(8, 1)));
}

TEST_CASE("random-basis total variation") {
  const CVector psi = CVector::Unit(2, 0), phi = CVector::Unit(2, 1);
  CHECK(random_basis_tvd(psi, psi, 200, 1).stats.max == Approx(0.0).margin(1e-15));
  // N = 2 with orthogonal states: TVD = |2t - 1|, t uniform on [0, 1], mean 1/2.
  const TvdResult r = random_basis_tvd(psi, phi, 20000, 2);
  CHECK(within_sigma(r.stats, 0.5));
  CHECK(r.fraction_below(0.2) == Approx(0.2).margin(0.02));
  CHECK(total_variation(Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)) == 1.0);
  CHECK_THROWS(random_basis_tvd(psi, CVector::Unit(4, 1), 1, 1));
  CHECK_THROWS(random_basis_tvd(psi, CVector::Ones(2), 1, 1));
}
