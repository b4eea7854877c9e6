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
 * @file hamiltonian.hpp
 * @brief Nearest-neighbour Hamiltonians on a line of d-level sites, their
 * low-lying spectra, and the local-Hamiltonian promise classes.
 *
 * Sites are numbered 1..n with site 1 the most significant digit of a basis
 * index. A term at site i acts on sites (i, i+1).
 */
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "isolab/circuit.hpp"
#include "isolab/random.hpp"

namespace isolab {

inline constexpr std::size_t kDefaultMaxHilbertDim = 4096;

struct ChainTerm {
  unsigned site;    // acts on (site, site + 1), 1-based
  CMatrix matrix;   // d^2 x d^2, Hermitian
  double norm = 0;  // operator norm
};

class ChainHamiltonian {
 public:
  ChainHamiltonian(unsigned sites, unsigned local_dim,
                   std::size_t max_dim = kDefaultMaxHilbertDim)
      : n_(sites), d_(local_dim) {
    if (n_ < 2) throw std::invalid_argument("chain: need at least 2 sites");
    if (d_ < 2) throw std::invalid_argument("chain: local dimension must be at least 2");
    std::size_t dim = 1;
    for (unsigned i = 0; i < n_; ++i) {
      dim *= d_;
      if (dim > max_dim)
        throw std::invalid_argument("chain: d^n exceeds the dimension cap " + std::to_string(max_dim));
    }
    dim_ = dim;
  }

  unsigned sites() const noexcept { return n_; }
  unsigned local_dim() const noexcept { return d_; }
  std::size_t dim() const noexcept { return dim_; }
  const std::vector<ChainTerm>& terms() const noexcept { return terms_; }

  ChainHamiltonian& add_term(unsigned site, const CMatrix& matrix) {
    const auto pair_dim = static_cast<std::ptrdiff_t>(d_) * d_;
    if (site < 1 || site + 1 > n_) throw std::invalid_argument("chain: term site must be in [1, n-1]");
    if (matrix.rows() != pair_dim || matrix.cols() != pair_dim)
      throw std::invalid_argument("chain: term must be d^2 x d^2");
    if ((matrix - matrix.adjoint()).norm() > 1e-10)
      throw std::invalid_argument("chain: term is not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(matrix, Eigen::EigenvaluesOnly);
    const double norm = solver.eigenvalues().cwiseAbs().maxCoeff();
    if (!std::isfinite(norm)) throw std::invalid_argument("chain: term norm is not finite");
    terms_.push_back({site, 0.5 * (matrix + matrix.adjoint()), norm});
    return *this;
  }

 private:
  unsigned n_;
  unsigned d_;
  std::size_t dim_ = 0;
  std::vector<ChainTerm> terms_;
};

/// Dense d^n x d^n matrix of the sum of embedded terms.
inline CMatrix assemble_dense(const ChainHamiltonian& h) {
  const auto dim = static_cast<std::ptrdiff_t>(h.dim());
  const std::ptrdiff_t d = h.local_dim();
  const std::ptrdiff_t pair = d * d;
  CMatrix out = CMatrix::Zero(dim, dim);
  for (const ChainTerm& term : h.terms()) {
    // index = (left * d^2 + pair_index) * right_dim + right
    std::ptrdiff_t right_dim = 1;
    for (unsigned s = term.site + 2; s <= h.sites(); ++s) right_dim *= d;
    const std::ptrdiff_t left_dim = dim / (pair * right_dim);
    for (std::ptrdiff_t left = 0; left < left_dim; ++left)
      for (std::ptrdiff_t right = 0; right < right_dim; ++right)
        for (std::ptrdiff_t r = 0; r < pair; ++r)
          for (std::ptrdiff_t c = 0; c < pair; ++c) {
            const Complex v = term.matrix(r, c);
            if (v == Complex(0.0)) continue;
            out((left * pair + r) * right_dim + right, (left * pair + c) * right_dim + right) += v;
          }
  }
  return out;
}

/// Smallest `count` eigenvalues, ascending.
inline std::vector<double> low_spectrum(const CMatrix& m, std::size_t count) {
  if (count > static_cast<std::size_t>(m.rows())) throw std::invalid_argument("low_spectrum: count exceeds dimension");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("low_spectrum: eigen solver failed");
  return {solver.eigenvalues().data(), solver.eigenvalues().data() + count};
}

inline std::vector<double> low_spectrum(const ChainHamiltonian& h, std::size_t count) {
  return low_spectrum(assemble_dense(h), count);
}

// ---------------------------------------------------------------------------
// Second eigenvalue path: Householder reduction to a real symmetric
// tridiagonal matrix, then Sturm-sequence bisection.

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // |subdiagonal|, size n-1
};

inline Tridiagonal householder_tridiagonalize(CMatrix a) {
  const std::ptrdiff_t n = a.rows();
  Tridiagonal t;
  t.diag.resize(static_cast<std::size_t>(n));
  t.off.resize(static_cast<std::size_t>(std::max<std::ptrdiff_t>(n - 1, 0)));
  for (std::ptrdiff_t k = 0; k + 2 < n; ++k) {
    const std::ptrdiff_t len = n - k - 1;
    CVector x = a.col(k).tail(len);
    const double xnorm = x.norm();
    if (xnorm == 0.0) {
      t.off[static_cast<std::size_t>(k)] = 0.0;
      continue;
    }
    const Complex x0 = x[0];
    const Complex phase = std::abs(x0) == 0.0 ? Complex(1.0) : x0 / std::abs(x0);
    const Complex alpha = -phase * xnorm;
    CVector v = x;
    v[0] -= alpha;
    const double vnorm = v.norm();
    if (vnorm == 0.0) {
      t.off[static_cast<std::size_t>(k)] = std::abs(x0);
      continue;
    }
    v /= vnorm;
    // A22 <- H A22 H with H = I - 2 v v†.
    auto a22 = a.bottomRightCorner(len, len);
    const CVector p = a22 * v;
    const Complex kappa = v.dot(p);
    const CVector w = p - kappa * v;
    a22.noalias() -= 2.0 * v * w.adjoint();
    a22.noalias() -= 2.0 * w * v.adjoint();
    t.off[static_cast<std::size_t>(k)] = std::abs(alpha);
  }
  for (std::ptrdiff_t i = 0; i < n; ++i) t.diag[static_cast<std::size_t>(i)] = a(i, i).real();
  if (n >= 2) t.off[static_cast<std::size_t>(n - 2)] = std::abs(a(n - 1, n - 2));
  return t;
}

/// Number of eigenvalues strictly below x.
inline std::size_t sturm_count(const Tridiagonal& t, double x) {
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < t.diag.size(); ++i) {
    const double e2 = i == 0 ? 0.0 : t.off[i - 1] * t.off[i - 1];
    q = t.diag[i] - x - (i == 0 ? 0.0 : e2 / q);
    if (q == 0.0) q = -std::numeric_limits<double>::epsilon() * (std::abs(x) + 1.0);
    if (q < 0.0) ++count;
  }
  return count;
}

/// Smallest `count` eigenvalues by bisection, ascending.
inline std::vector<double> low_spectrum_bisection(const CMatrix& m, std::size_t count) {
  const auto n = static_cast<std::size_t>(m.rows());
  if (count > n) throw std::invalid_argument("low_spectrum_bisection: count exceeds dimension");
  const Tridiagonal t = householder_tridiagonalize(m);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    const double radius = (i > 0 ? t.off[i - 1] : 0.0) + (i + 1 < n ? t.off[i] : 0.0);
    lo = std::min(lo, t.diag[i] - radius);
    hi = std::max(hi, t.diag[i] + radius);
  }
  const double scale = std::max({std::abs(lo), std::abs(hi), 1.0});
  lo -= 1e-9 * scale;
  hi += 1e-9 * scale;
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    // k-th smallest: the least x with more than k eigenvalues below it.
    double a = lo, b = hi;
    for (int iter = 0; iter < 200 && b - a > 1e-14 * scale; ++iter) {
      const double mid = 0.5 * (a + b);
      if (sturm_count(t, mid) > k)
        b = mid;
      else
        a = mid;
    }
    out.push_back(0.5 * (a + b));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Promise classification

struct GapReport {
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  double gap = 0.0;  // lambda1 - lambda0
  bool lh_yes = false;
  bool lh_no = false;
  bool unique_lh_yes = false;
  bool poly_gap_promise_ok = false;
  bool promise_violated = false;

  std::vector<std::string> flags() const {
    std::vector<std::string> out;
    if (lh_yes) out.emplace_back("LhYes");
    if (lh_no) out.emplace_back("LhNo");
    if (unique_lh_yes) out.emplace_back("UniqueLhYes");
    if (poly_gap_promise_ok) out.emplace_back("PolyGapPromiseOk");
    if (promise_violated) out.emplace_back("PromiseViolated");
    return out;
  }
};

/// Flags for the two lowest eigenvalues against thresholds a < b and an
/// optional gap threshold.
inline GapReport classify_lh_spectrum(double lambda0, double lambda1, double a, double b,
                                      std::optional<double> gap_threshold = std::nullopt) {
  if (!(a < b)) throw std::invalid_argument("classify_lh: need a < b");
  GapReport r;
  r.lambda0 = lambda0;
  r.lambda1 = lambda1;
  r.gap = lambda1 - lambda0;
  r.lh_yes = lambda0 <= a;
  r.lh_no = lambda0 > b;
  r.unique_lh_yes = r.lh_yes && lambda1 > b;
  r.poly_gap_promise_ok = gap_threshold.has_value() && r.gap >= *gap_threshold;
  r.promise_violated = !r.lh_yes && !r.lh_no;
  return r;
}

inline GapReport classify_lh(const ChainHamiltonian& h, double a, double b,
                             std::optional<double> gap_threshold = std::nullopt) {
  if (!(a < b)) throw std::invalid_argument("classify_lh: need a < b");
  const auto low = low_spectrum(h, 2);
  return classify_lh_spectrum(low[0], low[1], a, b, gap_threshold);
}

/// For a unique-ground-state yes-instance: Δ >= b - a.
inline bool uqma_yes_gap_witness(const ChainHamiltonian& h, double a, double b) {
  const GapReport r = classify_lh(h, a, b);
  if (!r.unique_lh_yes) throw std::domain_error("uqma_yes_gap_witness: instance is not UniqueLhYes");
  return r.gap >= b - a;
}

// ---------------------------------------------------------------------------
// Standard terms and models

inline Eigen::Matrix2cd pauli(char which) {
  Eigen::Matrix2cd p;
  const Complex i{0.0, 1.0};
  switch (which) {
    case 'I': p << 1, 0, 0, 1; break;
    case 'X': p << 0, 1, 1, 0; break;
    case 'Y': p << 0, -i, i, 0; break;
    case 'Z': p << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("pauli: expected one of I, X, Y, Z");
  }
  return p;
}

/// A ⊗ B for two d x d matrices, A on the more significant site.
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::ptrdiff_t i = 0; i < a.rows(); ++i)
    for (std::ptrdiff_t j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// X⊗X + Y⊗Y + Z⊗Z.
inline CMatrix heisenberg_term() {
  return kron(pauli('X'), pauli('X')) + kron(pauli('Y'), pauli('Y')) + kron(pauli('Z'), pauli('Z'));
}

inline CMatrix zz_term() { return kron(pauli('Z'), pauli('Z')); }

inline ChainHamiltonian heisenberg_chain(unsigned sites) {
  ChainHamiltonian h(sites, 2);
  for (unsigned i = 1; i < sites; ++i) h.add_term(i, heisenberg_term());
  return h;
}

/// Independent GUE-like Hermitian term on every bond.
inline ChainHamiltonian random_chain(unsigned sites, unsigned local_dim, Rng& rng) {
  ChainHamiltonian h(sites, local_dim);
  const std::ptrdiff_t pair = static_cast<std::ptrdiff_t>(local_dim) * local_dim;
  for (unsigned i = 1; i < sites; ++i) {
    CMatrix g(pair, pair);
    for (std::ptrdiff_t c = 0; c < pair; ++c)
      for (std::ptrdiff_t r = 0; r < pair; ++r) g(r, c) = Complex(standard_normal(rng), standard_normal(rng));
    h.add_term(i, 0.5 * (g + g.adjoint()));
  }
  return h;
}

// ---------------------------------------------------------------------------
// Text format
//
//   n=<int> d=<int>
//   site=<i>
//   <d^2 rows of d^2 entries "re,im">
//   site=<j>
//   ...

inline void write_hamiltonian(std::ostream& out, const ChainHamiltonian& h) {
  out << "n=" << h.sites() << " d=" << h.local_dim() << '\n';
  out.precision(17);
  for (const ChainTerm& term : h.terms()) {
    out << "site=" << term.site << '\n';
    for (std::ptrdiff_t r = 0; r < term.matrix.rows(); ++r) {
      for (std::ptrdiff_t c = 0; c < term.matrix.cols(); ++c)
        out << (c ? " " : "") << term.matrix(r, c).real() << ',' << term.matrix(r, c).imag();
      out << '\n';
    }
  }
}

inline ChainHamiltonian read_hamiltonian(std::istream& in, std::size_t max_dim = kDefaultMaxHilbertDim) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::string cleaned;
  cleaned.reserve(text.size());
  bool comment = false;
  for (char c : text) {
    if (c == '#') comment = true;
    if (c == '\n') comment = false;
    if (!comment) cleaned.push_back(c == ',' || c == '=' ? ' ' : c);
  }
  std::istringstream tokens(cleaned);
  std::string key;
  unsigned n = 0, d = 0;
  if (!(tokens >> key) || key != "n" || !(tokens >> n))
    throw std::invalid_argument("hamiltonian text: header must start with n=<int>");
  if (!(tokens >> key) || key != "d" || !(tokens >> d))
    throw std::invalid_argument("hamiltonian text: header must contain d=<int>");
  ChainHamiltonian h(n, d, max_dim);
  const std::ptrdiff_t pair = static_cast<std::ptrdiff_t>(d) * d;
  while (tokens >> key) {
    if (key != "site") throw std::invalid_argument("hamiltonian text: expected site=<i>, got '" + key + "'");
    unsigned site = 0;
    if (!(tokens >> site)) throw std::invalid_argument("hamiltonian text: bad site index");
    CMatrix m(pair, pair);
    for (std::ptrdiff_t r = 0; r < pair; ++r)
      for (std::ptrdiff_t c = 0; c < pair; ++c) {
        double re = 0.0, im = 0.0;
        if (!(tokens >> re >> im)) throw std::invalid_argument("hamiltonian text: truncated term matrix");
        m(r, c) = Complex(re, im);
      }
    h.add_term(site, m);
  }
  return h;
}

}  // namespace isolab
