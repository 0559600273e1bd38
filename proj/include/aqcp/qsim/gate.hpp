// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "aqcp/qsim/state.hpp"

namespace aqcp::qsim {

enum class GateKind { RX, RY, RZ, CZ, CX };

inline bool is_single_qubit(GateKind k) {
  return k == GateKind::RX || k == GateKind::RY || k == GateKind::RZ;
}

inline const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::CZ: return "CZ";
    case GateKind::CX: return "CX";
  }
  return "?";
}

struct Gate {
  GateKind kind;
  std::vector<int> targets;
  double angle = 0.0;  // radians; unused for CZ/CX

  static Gate rx(int q, double a) { return {GateKind::RX, {q}, a}; }
  static Gate ry(int q, double a) { return {GateKind::RY, {q}, a}; }
  static Gate rz(int q, double a) { return {GateKind::RZ, {q}, a}; }
  static Gate cz(int a, int b) { return {GateKind::CZ, {a, b}, 0.0}; }
  // For CX the first target is the control.
  static Gate cx(int control, int target) { return {GateKind::CX, {control, target}, 0.0}; }
};

using Circuit = std::vector<Gate>;

inline void validate_gate(const Gate& g, int num_qubits) {
  const std::size_t arity = is_single_qubit(g.kind) ? 1 : 2;
  if (g.targets.size() != arity)
    throw std::invalid_argument(std::string(gate_name(g.kind)) + ": wrong target count");
  for (int t : g.targets)
    if (t < 0 || t >= num_qubits)
      throw std::invalid_argument(std::string(gate_name(g.kind)) + ": target out of range");
  if (arity == 2 && g.targets[0] == g.targets[1])
    throw std::invalid_argument(std::string(gate_name(g.kind)) + ": duplicate targets");
}

inline Eigen::Matrix2cd single_qubit_matrix(GateKind kind, double angle) {
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  Eigen::Matrix2cd u;
  switch (kind) {
    case GateKind::RX:
      u << Complex(c, 0), Complex(0, -s), Complex(0, -s), Complex(c, 0);
      return u;
    case GateKind::RY:
      u << Complex(c, 0), Complex(-s, 0), Complex(s, 0), Complex(c, 0);
      return u;
    case GateKind::RZ:
      u << std::exp(Complex(0, -angle / 2.0)), Complex(0, 0), Complex(0, 0),
          std::exp(Complex(0, angle / 2.0));
      return u;
    default:
      throw std::invalid_argument("not a single-qubit gate kind");
  }
}

// Full 2^Q x 2^Q matrix of a gate; intended for tests and cross-checks,
// not the hot path.
inline CMatrix gate_matrix(const Gate& g, int num_qubits) {
  validate_gate(g, num_qubits);
  const int d = 1 << num_qubits;
  CMatrix u = CMatrix::Zero(d, d);
  if (is_single_qubit(g.kind)) {
    const Eigen::Matrix2cd m = single_qubit_matrix(g.kind, g.angle);
    const int q = g.targets[0];
    for (int i = 0; i < d; ++i) {
      const int bi = bit_of(i, q, num_qubits);
      const int flipped = i ^ bit_stride(q, num_qubits);
      u(i, i) += m(bi, bi);
      u(flipped, i) += m(1 - bi, bi);
    }
    return u;
  }
  if (g.kind == GateKind::CZ) {
    for (int i = 0; i < d; ++i) {
      const bool both = bit_of(i, g.targets[0], num_qubits) &&
                        bit_of(i, g.targets[1], num_qubits);
      u(i, i) = both ? Complex(-1, 0) : Complex(1, 0);
    }
    return u;
  }
  // CX: flip target bit where the control bit is set.
  for (int i = 0; i < d; ++i) {
    if (bit_of(i, g.targets[0], num_qubits))
      u(i ^ bit_stride(g.targets[1], num_qubits), i) = Complex(1, 0);
    else
      u(i, i) = Complex(1, 0);
  }
  return u;
}

inline double unitarity_error(const CMatrix& u) {
  const CMatrix r = u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols());
  return r.cwiseAbs().maxCoeff();
}

namespace detail {

// In-place single-qubit update of an amplitude array.
inline void apply_single_qubit(Complex* amps, int dim, int stride,
                               const Eigen::Matrix2cd& m) {
  const Complex m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0), m11 = m(1, 1);
  for (int base = 0; base < dim; base += 2 * stride) {
    for (int i = base; i < base + stride; ++i) {
      const Complex a0 = amps[i];
      const Complex a1 = amps[i + stride];
      amps[i] = m00 * a0 + m01 * a1;
      amps[i + stride] = m10 * a0 + m11 * a1;
    }
  }
}

}  // namespace detail

inline StateVector apply_gate(const StateVector& state, const Gate& g) {
  validate_gate(g, state.num_qubits());
  const int nq = state.num_qubits();
  const int d = state.dim();
  StateVector out = state;
  Complex* a = out.amplitudes().data();
  if (is_single_qubit(g.kind)) {
    detail::apply_single_qubit(a, d, bit_stride(g.targets[0], nq),
                               single_qubit_matrix(g.kind, g.angle));
    return out;
  }
  if (g.kind == GateKind::CZ) {
    for (int i = 0; i < d; ++i)
      if (bit_of(i, g.targets[0], nq) && bit_of(i, g.targets[1], nq)) a[i] = -a[i];
    return out;
  }
  const int cs = bit_stride(g.targets[0], nq);
  const int ts = bit_stride(g.targets[1], nq);
  for (int i = 0; i < d; ++i)
    if ((i & cs) && !(i & ts)) std::swap(a[i], a[i | ts]);
  return out;
}

inline StateVector run_circuit(const Circuit& circuit, int num_qubits) {
  StateVector psi(num_qubits);
  for (const Gate& g : circuit) psi = apply_gate(psi, g);
  return psi;
}

inline DensityMatrix apply_unitary_to_density(const DensityMatrix& rho, const Gate& g) {
  validate_gate(g, rho.num_qubits());
  const int nq = rho.num_qubits();
  const int d = rho.dim();
  DensityMatrix out = rho;
  CMatrix& m = out.entries();
  if (is_single_qubit(g.kind)) {
    const Eigen::Matrix2cd u = single_qubit_matrix(g.kind, g.angle);
    const int stride = bit_stride(g.targets[0], nq);
    // rho -> U rho U^dagger: columns transform with U on the left, then rows
    // of the result transform with conj(U) acting on the right index.
    for (int c = 0; c < d; ++c)
      detail::apply_single_qubit(m.col(c).data(), d, stride, u);
    const Eigen::Matrix2cd uc = u.conjugate();
    CMatrix mt = m.transpose();
    for (int r = 0; r < d; ++r)
      detail::apply_single_qubit(mt.col(r).data(), d, stride, uc);
    m = mt.transpose();
    return out;
  }
  if (g.kind == GateKind::CZ) {
    auto sign = [&](int i) {
      return bit_of(i, g.targets[0], nq) && bit_of(i, g.targets[1], nq) ? -1.0 : 1.0;
    };
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) m(r, c) *= sign(r) * sign(c);
    return out;
  }
  // CX is a basis permutation.
  const int cs = bit_stride(g.targets[0], nq);
  const int ts = bit_stride(g.targets[1], nq);
  auto perm = [&](int i) { return (i & cs) ? (i ^ ts) : i; };
  CMatrix p(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) p(perm(r), perm(c)) = m(r, c);
  out.entries() = std::move(p);
  return out;
}

}  // namespace aqcp::qsim
