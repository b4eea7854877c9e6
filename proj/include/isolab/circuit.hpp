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
 * @file circuit.hpp
 * @brief Dense statevector simulation of small verification circuits.
 *
 * Qubits 0..l-1 hold the witness and l..l+m-1 the ancillas, which start in
 * |0>. Qubit q is bit (n-1-q) of a basis index, so qubit 0 is the most
 * significant bit and a basis index reads |y, a> = y * 2^m + a. The circuit
 * accepts when qubit 0 is measured as 1.
 */
#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "isolab/random.hpp"

namespace isolab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr unsigned kDefaultMaxQubits = 12;
inline constexpr double kUnitarityTolerance = 1e-10;
inline constexpr double kNormTolerance = 1e-8;

enum class GateKind { H, S, Sdg, T, Tdg, X, Z, Ry, Cnot, Unitary1, Unitary2 };

struct GateSpec {
  GateKind kind;
  std::string_view name;
  unsigned arity;
  unsigned params;  // real parameters after the qubit indices
};

inline constexpr std::array<GateSpec, 11> kGateSpecs{{
    {GateKind::H, "h", 1, 0},
    {GateKind::S, "s", 1, 0},
    {GateKind::Sdg, "sdg", 1, 0},
    {GateKind::T, "t", 1, 0},
    {GateKind::Tdg, "tdg", 1, 0},
    {GateKind::X, "x", 1, 0},
    {GateKind::Z, "z", 1, 0},
    {GateKind::Ry, "ry", 1, 1},
    {GateKind::Cnot, "cnot", 2, 0},
    {GateKind::Unitary1, "u1", 1, 8},
    {GateKind::Unitary2, "u2", 2, 32},
}};

inline const GateSpec& gate_spec(GateKind kind) {
  for (const auto& spec : kGateSpecs)
    if (spec.kind == kind) return spec;
  throw std::logic_error("unknown gate kind");
}

inline const GateSpec& gate_spec(std::string_view name) {
  for (const auto& spec : kGateSpecs)
    if (spec.name == name) return spec;
  throw std::invalid_argument("unknown gate '" + std::string(name) + "'");
}

/// A gate on one or two qubits. For two-qubit gates the 4x4 matrix acts on
/// |q0 q1> with q0 as the more significant local bit.
class Gate {
 public:
  static Gate single(GateKind kind, unsigned qubit, double angle = 0.0) {
    const Complex i{0.0, 1.0};
    const double r = 1.0 / std::sqrt(2.0);
    Eigen::Matrix2cd u;
    switch (kind) {
      case GateKind::H: u << r, r, r, -r; break;
      case GateKind::S: u << 1.0, 0.0, 0.0, i; break;
      case GateKind::Sdg: u << 1.0, 0.0, 0.0, -i; break;
      case GateKind::T: u << 1.0, 0.0, 0.0, std::polar(1.0, M_PI / 4); break;
      case GateKind::Tdg: u << 1.0, 0.0, 0.0, std::polar(1.0, -M_PI / 4); break;
      case GateKind::X: u << 0.0, 1.0, 1.0, 0.0; break;
      case GateKind::Z: u << 1.0, 0.0, 0.0, -1.0; break;
      case GateKind::Ry:
        u << std::cos(angle / 2), -std::sin(angle / 2), std::sin(angle / 2), std::cos(angle / 2);
        break;
      default: throw std::invalid_argument("Gate::single: not a fixed one-qubit gate");
    }
    Gate g(kind, {qubit, 0}, 1);
    g.matrix_.topLeftCorner<2, 2>() = u;
    if (kind == GateKind::Ry) g.params_ = {angle};
    return g;
  }

  static Gate cnot(unsigned control, unsigned target) {
    Gate g(GateKind::Cnot, {control, target}, 2);
    g.matrix_ << 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0;
    return g;
  }

  static Gate unitary1(unsigned qubit, const Eigen::Matrix2cd& u) {
    check_unitary(u);
    Gate g(GateKind::Unitary1, {qubit, 0}, 1);
    g.matrix_.topLeftCorner<2, 2>() = u;
    return g;
  }

  static Gate unitary2(unsigned q0, unsigned q1, const Eigen::Matrix4cd& u) {
    check_unitary(u);
    Gate g(GateKind::Unitary2, {q0, q1}, 2);
    g.matrix_ = u;
    return g;
  }

  GateKind kind() const noexcept { return kind_; }
  unsigned arity() const noexcept { return arity_; }
  const std::array<unsigned, 2>& qubits() const noexcept { return qubits_; }
  const Eigen::Matrix4cd& matrix() const noexcept { return matrix_; }
  Eigen::Matrix2cd matrix1() const { return matrix_.topLeftCorner<2, 2>(); }
  const std::vector<double>& params() const noexcept { return params_; }

 private:
  Gate(GateKind kind, std::array<unsigned, 2> qubits, unsigned arity)
      : kind_(kind), arity_(arity), qubits_(qubits), matrix_(Eigen::Matrix4cd::Zero()) {}

  template <typename M>
  static void check_unitary(const M& u) {
    const auto defect = (u.adjoint() * u - M::Identity()).norm();
    if (defect > kUnitarityTolerance) throw std::invalid_argument("gate matrix is not unitary");
  }

  GateKind kind_;
  unsigned arity_;
  std::array<unsigned, 2> qubits_;
  Eigen::Matrix4cd matrix_;
  std::vector<double> params_;
};

class Circuit {
 public:
  Circuit(unsigned witness_qubits, unsigned ancilla_qubits,
          unsigned max_qubits = kDefaultMaxQubits)
      : l_(witness_qubits), m_(ancilla_qubits) {
    if (l_ < 1) throw std::invalid_argument("circuit: l must be at least 1");
    if (l_ + m_ > max_qubits)
      throw std::invalid_argument("circuit: l+m=" + std::to_string(l_ + m_) +
                                  " exceeds the qubit cap " + std::to_string(max_qubits));
  }

  unsigned witness_qubits() const noexcept { return l_; }
  unsigned ancilla_qubits() const noexcept { return m_; }
  unsigned qubits() const noexcept { return l_ + m_; }
  const std::vector<Gate>& gates() const noexcept { return gates_; }

  Circuit& add(Gate gate) {
    const auto& q = gate.qubits();
    if (q[0] >= qubits() || (gate.arity() == 2 && q[1] >= qubits()))
      throw std::invalid_argument("circuit: gate target out of range");
    if (gate.arity() == 2 && q[0] == q[1])
      throw std::invalid_argument("circuit: two-qubit gate needs distinct qubits");
    gates_.push_back(std::move(gate));
    return *this;
  }

  Circuit& h(unsigned q) { return add(Gate::single(GateKind::H, q)); }
  Circuit& x(unsigned q) { return add(Gate::single(GateKind::X, q)); }
  Circuit& t(unsigned q) { return add(Gate::single(GateKind::T, q)); }
  Circuit& tdg(unsigned q) { return add(Gate::single(GateKind::Tdg, q)); }
  Circuit& ry(unsigned q, double angle) { return add(Gate::single(GateKind::Ry, q, angle)); }
  Circuit& cnot(unsigned c, unsigned t) { return add(Gate::cnot(c, t)); }

  /// Toffoli from H, T, Tdg and CNOT.
  Circuit& toffoli(unsigned c0, unsigned c1, unsigned target) {
    h(target);
    cnot(c1, target);
    tdg(target);
    cnot(c0, target);
    t(target);
    cnot(c1, target);
    tdg(target);
    cnot(c0, target);
    t(c1);
    t(target);
    h(target);
    cnot(c0, c1);
    t(c0);
    tdg(c1);
    cnot(c0, c1);
    return *this;
  }

  Circuit& swap(unsigned a, unsigned b) {
    cnot(a, b);
    cnot(b, a);
    return cnot(a, b);
  }

  /// X on `target` controlled by every qubit in `controls`, using a Toffoli
  /// ladder over `work` (at least controls - 2 clean qubits, restored).
  Circuit& mcx(const std::vector<unsigned>& controls, unsigned target,
               const std::vector<unsigned>& work) {
    const std::size_t c = controls.size();
    if (c == 0) return x(target);
    if (c == 1) return cnot(controls[0], target);
    if (c == 2) return toffoli(controls[0], controls[1], target);
    if (work.size() < c - 2) throw std::invalid_argument("mcx: not enough work qubits");
    toffoli(controls[0], controls[1], work[0]);
    for (std::size_t i = 2; i + 1 < c; ++i) toffoli(controls[i], work[i - 2], work[i - 1]);
    toffoli(controls[c - 1], work[c - 3], target);
    for (std::size_t i = c - 2; i >= 2; --i) toffoli(controls[i], work[i - 2], work[i - 1]);
    return toffoli(controls[0], controls[1], work[0]);
  }

 private:
  unsigned l_;
  unsigned m_;
  std::vector<Gate> gates_;
};

// ---------------------------------------------------------------------------
// Statevector kernels

inline void apply_gate(CVector& state, unsigned qubits, const Gate& gate) {
  const std::size_t dim = std::size_t{1} << qubits;
  const auto& u = gate.matrix();
  if (gate.arity() == 1) {
    const std::size_t stride = std::size_t{1} << (qubits - 1 - gate.qubits()[0]);
    for (std::size_t i = 0; i < dim; ++i) {
      if (i & stride) continue;
      const Complex a = state[i];
      const Complex b = state[i | stride];
      state[i] = u(0, 0) * a + u(0, 1) * b;
      state[i | stride] = u(1, 0) * a + u(1, 1) * b;
    }
    return;
  }
  const std::size_t hi = std::size_t{1} << (qubits - 1 - gate.qubits()[0]);
  const std::size_t lo = std::size_t{1} << (qubits - 1 - gate.qubits()[1]);
  for (std::size_t i = 0; i < dim; ++i) {
    if (i & (hi | lo)) continue;
    const std::array<std::size_t, 4> idx{i, i | lo, i | hi, i | hi | lo};
    std::array<Complex, 4> in{};
    for (int r = 0; r < 4; ++r) in[r] = state[idx[r]];
    for (int r = 0; r < 4; ++r)
      state[idx[r]] = u(r, 0) * in[0] + u(r, 1) * in[1] + u(r, 2) * in[2] + u(r, 3) * in[3];
  }
}

/// U (|psi> ⊗ |0^m>) as a 2^{l+m} vector.
inline CVector run_circuit(const Circuit& circuit, const CVector& witness_state) {
  const std::size_t witness_dim = std::size_t{1} << circuit.witness_qubits();
  if (static_cast<std::size_t>(witness_state.size()) != witness_dim)
    throw std::invalid_argument("run_circuit: input must have dimension 2^l");
  CVector state = CVector::Zero(std::ptrdiff_t{1} << circuit.qubits());
  const std::size_t ancilla_dim = std::size_t{1} << circuit.ancilla_qubits();
  for (std::size_t y = 0; y < witness_dim; ++y) state[y * ancilla_dim] = witness_state[y];
  for (const Gate& gate : circuit.gates()) apply_gate(state, circuit.qubits(), gate);
  return state;
}

/// Squared norm of the part of `state` with qubit 0 equal to 1.
inline double accept_weight(const CVector& state) {
  const std::ptrdiff_t half = state.size() / 2;
  return state.tail(half).squaredNorm();
}

/// || Pi_1 U (|psi> ⊗ |0^m>) ||^2.
inline double simulate(const Circuit& circuit, const CVector& witness_state) {
  if (std::abs(witness_state.norm() - 1.0) > kNormTolerance)
    throw std::invalid_argument("simulate: input state is not normalized");
  return accept_weight(run_circuit(circuit, witness_state));
}

/// Computational basis state |y> on 2^bits amplitudes.
inline CVector basis_state(unsigned bits, std::size_t y) {
  CVector v = CVector::Zero(std::ptrdiff_t{1} << bits);
  v[static_cast<std::ptrdiff_t>(y)] = 1.0;
  return v;
}

/// Complex Gaussian vector normalized to a uniformly random pure state.
inline CVector random_state(std::size_t dim, Rng& rng) {
  CVector v(static_cast<std::ptrdiff_t>(dim));
  for (std::ptrdiff_t i = 0; i < v.size(); ++i) v[i] = Complex(standard_normal(rng), standard_normal(rng));
  return v / v.norm();
}

// ---------------------------------------------------------------------------
// Circuit families

/// Uniformly chosen gates from the fixed set, with random Ry angles.
inline Circuit random_circuit(unsigned l, unsigned m, std::size_t gate_count, Rng& rng,
                              unsigned max_qubits = kDefaultMaxQubits) {
  Circuit c(l, m, max_qubits);
  constexpr GateKind kinds[] = {GateKind::H, GateKind::S, GateKind::Sdg, GateKind::T, GateKind::Tdg,
                                GateKind::X, GateKind::Z, GateKind::Ry, GateKind::Cnot};
  const unsigned n = c.qubits();
  for (std::size_t g = 0; g < gate_count; ++g) {
    const GateKind kind = kinds[uniform_below(rng, std::size(kinds) - (n < 2 ? 1 : 0))];
    const auto q0 = static_cast<unsigned>(uniform_below(rng, n));
    if (kind == GateKind::Cnot) {
      auto q1 = static_cast<unsigned>(uniform_below(rng, n - 1));
      if (q1 >= q0) ++q1;
      c.cnot(q0, q1);
    } else {
      c.add(Gate::single(kind, q0, kind == GateKind::Ry ? 2.0 * M_PI * uniform01(rng) : 0.0));
    }
  }
  return c;
}

/// Accepts |y0> with probability 1 and every other basis witness with
/// probability 0. Uses 2l - 1 qubits.
inline Circuit point_acceptor(unsigned l, std::size_t y0, unsigned max_qubits = kDefaultMaxQubits) {
  if (l < 1) throw std::invalid_argument("point_acceptor: l must be at least 1");
  if (y0 >> l) throw std::invalid_argument("point_acceptor: witness longer than l bits");
  const unsigned m = l < 3 ? 1 : l - 1;
  Circuit c(l, m, max_qubits);
  std::vector<unsigned> controls, work;
  for (unsigned q = 0; q < l; ++q) {
    controls.push_back(q);
    if (!((y0 >> (l - 1 - q)) & 1U)) c.x(q);
  }
  for (unsigned a = l + 1; a < l + m; ++a) work.push_back(a);
  c.mcx(controls, l, work);
  for (unsigned q = 0; q < l; ++q)
    if (!((y0 >> (l - 1 - q)) & 1U)) c.x(q);
  return c.swap(l, 0);
}

/// One ancilla rotated by Ry(θ0 + Σ_j y_j φ_j) and swapped onto qubit 0, so
/// witness y is accepted with probability sin^2 of half its angle. All angles
/// together stay within 2 asin(sqrt(max_prob)).
inline Circuit bounded_acceptor(unsigned l, double max_prob, Rng& rng,
                                unsigned max_qubits = kDefaultMaxQubits) {
  if (!(max_prob >= 0.0 && max_prob <= 1.0))
    throw std::invalid_argument("bounded_acceptor: max_prob outside [0,1]");
  Circuit c(l, 1, max_qubits);
  std::vector<double> weights(l + 1);
  double total = 0.0;
  for (auto& w : weights) total += (w = uniform01(rng));
  const double budget = 2.0 * std::asin(std::sqrt(max_prob)) * uniform01(rng);
  if (total > 0.0)
    for (auto& w : weights) w *= budget / total;
  c.ry(l, weights[0]);
  for (unsigned q = 0; q < l; ++q) {
    const double phi = weights[q + 1];
    Eigen::Matrix4cd u = Eigen::Matrix4cd::Identity();
    u(2, 2) = std::cos(phi / 2);
    u(2, 3) = -std::sin(phi / 2);
    u(3, 2) = std::sin(phi / 2);
    u(3, 3) = std::cos(phi / 2);
    c.add(Gate::unitary2(q, l, u));
  }
  return c.swap(l, 0);
}

// ---------------------------------------------------------------------------
// Text format
//
//   l=<int> m=<int>
//   <gate> <qubit> [<qubit>] [params...]
//
// u1 takes 8 and u2 takes 32 reals: the matrix entries as (real, imag)
// pairs in row-major order.

inline void write_circuit(std::ostream& out, const Circuit& circuit) {
  out << "l=" << circuit.witness_qubits() << " m=" << circuit.ancilla_qubits() << '\n';
  out.precision(17);
  for (const Gate& g : circuit.gates()) {
    const GateSpec& spec = gate_spec(g.kind());
    out << spec.name << ' ' << g.qubits()[0];
    if (g.arity() == 2) out << ' ' << g.qubits()[1];
    if (g.kind() == GateKind::Ry) out << ' ' << g.params()[0];
    if (g.kind() == GateKind::Unitary1 || g.kind() == GateKind::Unitary2) {
      const int size = g.kind() == GateKind::Unitary1 ? 2 : 4;
      for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c)
          out << ' ' << g.matrix()(r, c).real() << ' ' << g.matrix()(r, c).imag();
    }
    out << '\n';
  }
}

inline Circuit read_circuit(std::istream& in, unsigned max_qubits = kDefaultMaxQubits) {
  std::string line;
  auto next_line = [&](std::string& dest) {
    while (std::getline(in, dest)) {
      const auto first = dest.find_first_not_of(" \t\r");
      if (first != std::string::npos && dest[first] != '#') return true;
    }
    return false;
  };
  if (!next_line(line)) throw std::invalid_argument("circuit text: missing header");
  unsigned l = 0, m = 0;
  {
    std::istringstream header(line);
    std::string a, b;
    header >> a >> b;
    if (a.rfind("l=", 0) != 0 || b.rfind("m=", 0) != 0)
      throw std::invalid_argument("circuit text: header must read 'l=<int> m=<int>'");
    try {
      l = static_cast<unsigned>(std::stoul(a.substr(2)));
      m = static_cast<unsigned>(std::stoul(b.substr(2)));
    } catch (const std::exception&) {
      throw std::invalid_argument("circuit text: bad register size in header");
    }
  }
  Circuit circuit(l, m, max_qubits);
  while (next_line(line)) {
    std::istringstream fields(line);
    std::string name;
    fields >> name;
    const GateSpec& spec = gate_spec(name);
    std::array<unsigned, 2> q{0, 0};
    for (unsigned i = 0; i < spec.arity; ++i)
      if (!(fields >> q[i])) throw std::invalid_argument("circuit text: missing qubit index for " + name);
    std::vector<double> params(spec.params);
    for (auto& p : params)
      if (!(fields >> p)) throw std::invalid_argument("circuit text: missing parameter for " + name);
    std::string extra;
    if (fields >> extra) throw std::invalid_argument("circuit text: trailing tokens after " + name);
    switch (spec.kind) {
      case GateKind::Cnot: circuit.add(Gate::cnot(q[0], q[1])); break;
      case GateKind::Unitary1: {
        Eigen::Matrix2cd u;
        for (int k = 0; k < 4; ++k) u(k / 2, k % 2) = Complex(params[2 * k], params[2 * k + 1]);
        circuit.add(Gate::unitary1(q[0], u));
        break;
      }
      case GateKind::Unitary2: {
        Eigen::Matrix4cd u;
        for (int k = 0; k < 16; ++k) u(k / 4, k % 4) = Complex(params[2 * k], params[2 * k + 1]);
        circuit.add(Gate::unitary2(q[0], q[1], u));
        break;
      }
      case GateKind::Ry: circuit.add(Gate::single(spec.kind, q[0], params[0])); break;
      default: circuit.add(Gate::single(spec.kind, q[0])); break;
    }
  }
  return circuit;
}

}  // namespace isolab
