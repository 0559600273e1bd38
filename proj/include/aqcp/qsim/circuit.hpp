// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "aqcp/qsim/channel.hpp"
#include "aqcp/qsim/gate.hpp"
#include "aqcp/qsim/noise.hpp"
#include "aqcp/qsim/state.hpp"

namespace aqcp::qsim {

inline constexpr double kPovmTolerance = 1e-10;

// Runs the circuit on a density matrix, applying the schedule's channel at
// time t after each gate on each of that gate's target qubits. The schedule
// is evaluated once per call: one coarse timestamp covers the whole shot.
inline DensityMatrix run_noisy_circuit(const Circuit& circuit, int num_qubits,
                                       const NoiseSchedule& schedule, double t) {
  const KrausChannel channel = schedule.channel_at(t);
  DensityMatrix rho(num_qubits);
  for (const Gate& g : circuit) {
    rho = apply_unitary_to_density(rho, g);
    if (schedule.applies_after_each_gate) {
      for (int q : g.targets) rho = apply_channel(rho, channel, q);
    }
  }
  return rho;
}

// Computational-basis probabilities (default POVM: projectors |b><b|).
inline std::vector<double> measure_probabilities(const DensityMatrix& rho) {
  return rho.diagonal_probabilities();
}

// General POVM path. Effects must be PSD and sum to the identity.
inline std::vector<double> measure_probabilities(const DensityMatrix& rho,
                                                 const std::vector<CMatrix>& povm) {
  const int d = rho.dim();
  CMatrix sum = CMatrix::Zero(d, d);
  for (const auto& effect : povm) {
    if (effect.rows() != d || effect.cols() != d)
      throw std::invalid_argument("POVM effect has wrong dimension");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (effect + effect.adjoint()),
                                              Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-8)
      throw std::domain_error("POVM effect is not positive semidefinite");
    sum += effect;
  }
  if ((sum - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > kPovmTolerance)
    throw std::domain_error("POVM effects do not sum to the identity");
  std::vector<double> probs(povm.size());
  for (std::size_t j = 0; j < povm.size(); ++j)
    probs[j] = (rho.entries() * povm[j]).trace().real();
  return probs;
}

// Effects of the symmetric readout-flip model: each qubit's readout flips
// independently with probability q. Diagonal, so classically equivalent to
// mixing the outcome distribution (see apply_readout_flip).
inline std::vector<CMatrix> readout_flip_povm(int num_qubits, double q) {
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("flip probability out of range");
  const int d = 1 << num_qubits;
  std::vector<CMatrix> povm;
  povm.reserve(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    CMatrix effect = CMatrix::Zero(d, d);
    for (int b = 0; b < d; ++b) {
      double w = 1.0;
      for (int qb = 0; qb < num_qubits; ++qb)
        w *= bit_of(b, qb, num_qubits) == bit_of(j, qb, num_qubits) ? (1.0 - q) : q;
      effect(b, b) = w;
    }
    povm.push_back(std::move(effect));
  }
  return povm;
}

// P(observe j) = sum_b P(b) prod_q P(flip b_q -> j_q); applied one qubit at
// a time in O(Q 2^Q). Matches the readout_flip_povm computation exactly.
inline std::vector<double> apply_readout_flip(std::vector<double> probs, double q,
                                              int num_qubits) {
  if (q == 0.0) return probs;
  const int d = 1 << num_qubits;
  for (int qb = 0; qb < num_qubits; ++qb) {
    const int stride = bit_stride(qb, num_qubits);
    for (int base = 0; base < d; base += 2 * stride) {
      for (int i = base; i < base + stride; ++i) {
        const double p0 = probs[static_cast<std::size_t>(i)];
        const double p1 = probs[static_cast<std::size_t>(i + stride)];
        probs[static_cast<std::size_t>(i)] = (1.0 - q) * p0 + q * p1;
        probs[static_cast<std::size_t>(i + stride)] = q * p0 + (1.0 - q) * p1;
      }
    }
  }
  return probs;
}

// Plain-text debug format: one row per line, entries as "re+imi" pairs
// separated by single spaces (row-major).
inline std::string to_debug_string(const CMatrix& m) {
  std::string out;
  char buf[64];
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const Complex z = m(r, c);
      std::snprintf(buf, sizeof(buf), "%.6g%+.6gi", z.real(), z.imag());
      if (c) out += ' ';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace aqcp::qsim
