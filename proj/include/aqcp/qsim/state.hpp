// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace aqcp::qsim {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

// Qubit 0 is the most-significant bit of a bitstring, so basis index j is
// exactly the denary value of the bitstring read left to right.
inline int bit_stride(int qubit, int num_qubits) {
  return 1 << (num_qubits - 1 - qubit);
}

inline int bit_of(int index, int qubit, int num_qubits) {
  return (index >> (num_qubits - 1 - qubit)) & 1;
}

inline void check_qubit_count(int num_qubits) {
  if (num_qubits < 1 || num_qubits > 10)
    throw std::invalid_argument("qubit count must be in [1, 10]");
}

class StateVector {
 public:
  explicit StateVector(int num_qubits) : num_qubits_(num_qubits) {
    check_qubit_count(num_qubits);
    amps_ = CVector::Zero(1 << num_qubits);
    amps_(0) = Complex(1.0, 0.0);
  }

  StateVector(int num_qubits, CVector amplitudes) : num_qubits_(num_qubits) {
    check_qubit_count(num_qubits);
    if (amplitudes.size() != (1 << num_qubits))
      throw std::invalid_argument("amplitude vector length must be 2^Q");
    amps_ = std::move(amplitudes);
  }

  static StateVector basis_state(int num_qubits, int index) {
    StateVector s(num_qubits);
    if (index < 0 || index >= s.dim())
      throw std::invalid_argument("basis index out of range");
    s.amps_(0) = Complex(0.0, 0.0);
    s.amps_(index) = Complex(1.0, 0.0);
    return s;
  }

  int num_qubits() const { return num_qubits_; }
  int dim() const { return static_cast<int>(amps_.size()); }
  const CVector& amplitudes() const { return amps_; }
  CVector& amplitudes() { return amps_; }
  Complex amp(int i) const { return amps_(i); }

  double norm_error() const { return std::abs(amps_.squaredNorm() - 1.0); }

  std::vector<double> probabilities() const {
    std::vector<double> p(static_cast<std::size_t>(dim()));
    for (int i = 0; i < dim(); ++i) p[static_cast<std::size_t>(i)] = std::norm(amps_(i));
    return p;
  }

 private:
  int num_qubits_;
  CVector amps_;
};

class DensityMatrix {
 public:
  explicit DensityMatrix(int num_qubits) : num_qubits_(num_qubits) {
    check_qubit_count(num_qubits);
    const int d = 1 << num_qubits;
    m_ = CMatrix::Zero(d, d);
    m_(0, 0) = Complex(1.0, 0.0);
  }

  DensityMatrix(int num_qubits, CMatrix entries) : num_qubits_(num_qubits) {
    check_qubit_count(num_qubits);
    const int d = 1 << num_qubits;
    if (entries.rows() != d || entries.cols() != d)
      throw std::invalid_argument("density matrix must be 2^Q x 2^Q");
    m_ = std::move(entries);
  }

  static DensityMatrix pure(const StateVector& psi) {
    const auto& a = psi.amplitudes();
    return DensityMatrix(psi.num_qubits(), a * a.adjoint());
  }

  int num_qubits() const { return num_qubits_; }
  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& entries() const { return m_; }
  CMatrix& entries() { return m_; }

  double trace_error() const { return std::abs(m_.trace() - Complex(1.0, 0.0)); }

  double hermiticity_error() const {
    return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  }

  // Smallest eigenvalue of the Hermitian part; the PSD invariant tolerates
  // values down to -1e-8 after long channel sequences.
  double min_eigenvalue() const {
    CMatrix h = 0.5 * (m_ + m_.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
  }

  double purity() const { return (m_ * m_).trace().real(); }

  std::vector<double> diagonal_probabilities() const {
    std::vector<double> p(static_cast<std::size_t>(dim()));
    for (int i = 0; i < dim(); ++i) p[static_cast<std::size_t>(i)] = m_(i, i).real();
    return p;
  }

 private:
  int num_qubits_;
  CMatrix m_;
};

}  // namespace aqcp::qsim
