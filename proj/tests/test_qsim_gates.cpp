// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "aqcp/qsim/circuit.hpp"
#include "aqcp/qsim/gate.hpp"
#include "aqcp/qsim/state.hpp"
#include "aqcp/util/rng.hpp"

using namespace aqcp::qsim;

namespace {

// Reference path: full-matrix application, used to cross-check the in-place
// kernels on small systems.
StateVector apply_gate_dense(const StateVector& s, const Gate& g) {
  return StateVector(s.num_qubits(), gate_matrix(g, s.num_qubits()) * s.amplitudes());
}

Gate random_gate(aqcp::util::Rng& rng, int num_qubits) {
  const int pick = static_cast<int>(rng.next_u64() % 5);
  const int q1 = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(num_qubits));
  int q2 = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(num_qubits - 1));
  if (q2 >= q1) ++q2;
  const double angle = rng.uniform(-3.0, 3.0);
  switch (pick) {
    case 0: return Gate::rx(q1, angle);
    case 1: return Gate::ry(q1, angle);
    case 2: return Gate::rz(q1, angle);
    case 3: return Gate::cz(q1, q2);
    default: return Gate::cx(q1, q2);
  }
}

}  // namespace

TEST_CASE("constructed gate matrices are unitary") {
  aqcp::util::Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const Gate g = random_gate(rng, 3);
    REQUIRE(unitarity_error(gate_matrix(g, 3)) <= 1e-12);
  }
}

TEST_CASE("RZ(0) is the identity") {
  aqcp::util::Rng rng(7);
  CVector amps(8);
  for (int i = 0; i < 8; ++i) amps(i) = Complex(rng.normal(), rng.normal());
  amps /= std::sqrt(amps.squaredNorm());
  StateVector s(3, amps);
  const StateVector out = apply_gate(s, Gate::rz(1, 0.0));
  REQUIRE((out.amplitudes() - s.amplitudes()).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("RY(pi) maps |0> to |1>") {
  StateVector s(1);
  const StateVector out = apply_gate(s, Gate::ry(0, M_PI));
  REQUIRE(std::abs(out.amp(1) - Complex(1.0, 0.0)) <= 1e-10);
  REQUIRE(std::abs(out.amp(0)) <= 1e-10);
}

TEST_CASE("CZ flips the phase of |11> only") {
  const StateVector s11 = StateVector::basis_state(2, 3);
  const StateVector out11 = apply_gate(s11, Gate::cz(0, 1));
  REQUIRE(std::abs(out11.amp(3) - Complex(-1.0, 0.0)) <= 1e-15);

  const StateVector s10 = StateVector::basis_state(2, 2);
  const StateVector out10 = apply_gate(s10, Gate::cz(0, 1));
  REQUIRE(std::abs(out10.amp(2) - Complex(1.0, 0.0)) <= 1e-15);
}

TEST_CASE("apply_gate matches dense matrix application and preserves norm") {
  aqcp::util::Rng rng(1234);
  for (int trial = 0; trial < 50; ++trial) {
    StateVector s(3);
    for (int step = 0; step < 12; ++step) {
      const Gate g = random_gate(rng, 3);
      const StateVector fast = apply_gate(s, g);
      const StateVector dense = apply_gate_dense(s, g);
      REQUIRE((fast.amplitudes() - dense.amplitudes()).cwiseAbs().maxCoeff() <= 1e-12);
      s = fast;
    }
    REQUIRE(s.norm_error() <= 1e-10);
  }
}

TEST_CASE("apply_gate rejects invalid targets") {
  StateVector s(2);
  REQUIRE_THROWS_AS(apply_gate(s, Gate::rx(2, 0.3)), std::invalid_argument);
  REQUIRE_THROWS_AS(apply_gate(s, Gate::cz(0, 0)), std::invalid_argument);
  REQUIRE_THROWS_AS(apply_gate(s, Gate{GateKind::CZ, {0}, 0.0}), std::invalid_argument);
}

TEST_CASE("identity unitary leaves a density matrix unchanged") {
  aqcp::util::Rng rng(5);
  StateVector s(2);
  for (int i = 0; i < 6; ++i) s = apply_gate(s, random_gate(rng, 2));
  const DensityMatrix rho = DensityMatrix::pure(s);
  const DensityMatrix out = apply_unitary_to_density(rho, Gate::rz(0, 0.0));
  REQUIRE((out.entries() - rho.entries()).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("RY(pi) on |0><0| gives |1><1|") {
  const DensityMatrix rho(1);
  const DensityMatrix out = apply_unitary_to_density(rho, Gate::ry(0, M_PI));
  REQUIRE(std::abs(out.entries()(1, 1).real() - 1.0) <= 1e-10);
  REQUIRE(std::abs(out.entries()(0, 0)) <= 1e-10);
}

TEST_CASE("CZ on |+>|+> produces a pure entangled state") {
  StateVector plus(2);
  plus = apply_gate(plus, Gate::ry(0, M_PI / 2.0));
  plus = apply_gate(plus, Gate::ry(1, M_PI / 2.0));
  DensityMatrix rho = DensityMatrix::pure(plus);
  rho = apply_unitary_to_density(rho, Gate::cz(0, 1));

  // Brute-force reference: U rho U^dagger with the full 4x4 CZ matrix.
  const CMatrix u = gate_matrix(Gate::cz(0, 1), 2);
  const CMatrix expected = u * DensityMatrix::pure(plus).entries() * u.adjoint();
  REQUIRE((rho.entries() - expected).cwiseAbs().maxCoeff() <= 1e-14);

  REQUIRE(rho.trace_error() <= 1e-12);
  REQUIRE(std::abs(rho.purity() - 1.0) <= 1e-12);
}

TEST_CASE("density path matches statevector path under unitaries") {
  aqcp::util::Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    StateVector s(3);
    DensityMatrix rho(3);
    for (int step = 0; step < 15; ++step) {
      const Gate g = random_gate(rng, 3);
      s = apply_gate(s, g);
      rho = apply_unitary_to_density(rho, g);
    }
    const auto p_state = s.probabilities();
    const auto p_rho = measure_probabilities(rho);
    for (std::size_t i = 0; i < p_state.size(); ++i)
      REQUIRE(std::abs(p_state[i] - p_rho[i]) <= 1e-10);
    REQUIRE(rho.hermiticity_error() <= 1e-10);
    REQUIRE(rho.trace_error() <= 1e-10);
    REQUIRE(rho.min_eigenvalue() >= -1e-8);
  }
}

TEST_CASE("debug print uses re+imi pairs") {
  CMatrix m(1, 2);
  m << Complex(0.5, 0.5), Complex(-1.0, -2.0);
  REQUIRE(to_debug_string(m) == "0.5+0.5i -1-2i\n");
}
