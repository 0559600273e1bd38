// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "aqcp/qsim/gate.hpp"
#include "aqcp/qsim/state.hpp"

namespace aqcp::qsim {

inline constexpr double kCptpTolerance = 1e-12;

enum class ChannelFamily { Depolarising, PhaseFlip, AmplitudeDamping };

inline const char* channel_family_name(ChannelFamily f) {
  switch (f) {
    case ChannelFamily::Depolarising: return "depolarising";
    case ChannelFamily::PhaseFlip: return "phase_flip";
    case ChannelFamily::AmplitudeDamping: return "amplitude_damping";
  }
  return "?";
}

inline ChannelFamily channel_family_from_name(const std::string& name) {
  if (name == "depolarising") return ChannelFamily::Depolarising;
  if (name == "phase_flip") return ChannelFamily::PhaseFlip;
  if (name == "amplitude_damping") return ChannelFamily::AmplitudeDamping;
  throw std::invalid_argument("unknown channel family: " + name);
}

// Single-qubit channel in Kraus form.
struct KrausChannel {
  std::vector<Eigen::Matrix2cd> operators;
  std::string label;
  ChannelFamily family = ChannelFamily::Depolarising;
  double parameter = 0.0;

  // max-norm of sum_k E_k^dagger E_k - I
  double completeness_error() const {
    Eigen::Matrix2cd s = Eigen::Matrix2cd::Zero();
    for (const auto& e : operators) s += e.adjoint() * e;
    s -= Eigen::Matrix2cd::Identity();
    return s.cwiseAbs().maxCoeff();
  }
};

inline KrausChannel make_channel(ChannelFamily family, double parameter) {
  if (parameter < 0.0 || parameter > 1.0)
    throw std::invalid_argument("channel parameter must lie in [0, 1]");
  KrausChannel ch;
  ch.family = family;
  ch.parameter = parameter;
  ch.label = channel_family_name(family);
  const double p = parameter;
  Eigen::Matrix2cd op;
  switch (family) {
    case ChannelFamily::Depolarising: {
      if (p == 0.0) {
        ch.operators = {Eigen::Matrix2cd::Identity()};
        break;
      }
      op = std::sqrt(1.0 - 3.0 * p / 4.0) * Eigen::Matrix2cd::Identity();
      ch.operators.push_back(op);
      const double q = std::sqrt(p / 4.0);
      op << 0, q, q, 0;  // X
      ch.operators.push_back(op);
      op << Complex(0, 0), Complex(0, -q), Complex(0, q), Complex(0, 0);  // Y
      ch.operators.push_back(op);
      op << q, 0, 0, -q;  // Z
      ch.operators.push_back(op);
      break;
    }
    case ChannelFamily::PhaseFlip: {
      op = std::sqrt(1.0 - p) * Eigen::Matrix2cd::Identity();
      ch.operators.push_back(op);
      op << std::sqrt(p), 0, 0, -std::sqrt(p);
      ch.operators.push_back(op);
      break;
    }
    case ChannelFamily::AmplitudeDamping: {
      op << 1, 0, 0, std::sqrt(1.0 - p);
      ch.operators.push_back(op);
      op << 0, std::sqrt(p), 0, 0;
      ch.operators.push_back(op);
      break;
    }
  }
  return ch;
}

namespace detail {

// sum_k (E_k ⊗ I) rho (E_k ⊗ I)^dagger on the target qubit, generic path.
inline CMatrix kraus_sum(const CMatrix& rho, const std::vector<Eigen::Matrix2cd>& ops,
                         int stride) {
  const int d = static_cast<int>(rho.rows());
  CMatrix acc = CMatrix::Zero(d, d);
  CMatrix work(d, d);
  for (const auto& e : ops) {
    work = rho;
    for (int c = 0; c < d; ++c)
      apply_single_qubit(work.col(c).data(), d, stride, e);
    const Eigen::Matrix2cd ec = e.conjugate();
    CMatrix wt = work.transpose();
    for (int r = 0; r < d; ++r)
      apply_single_qubit(wt.col(r).data(), d, stride, ec);
    acc += wt.transpose();
  }
  return acc;
}

}  // namespace detail

inline DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& channel,
                                   int target_qubit) {
  if (target_qubit < 0 || target_qubit >= rho.num_qubits())
    throw std::invalid_argument("apply_channel: target qubit out of range");
  if (channel.completeness_error() > kCptpTolerance)
    throw std::domain_error("apply_channel: channel is not CPTP (completeness violated)");
  const int nq = rho.num_qubits();
  const int d = rho.dim();
  const int stride = bit_stride(target_qubit, nq);
  const double p = channel.parameter;

  // Closed forms for the two unital families; measurably faster than the
  // generic Kraus sum and exercised against it in tests.
  if (channel.family == ChannelFamily::Depolarising && channel.operators.size() == 4) {
    // (1-p) rho + p (I/2 ⊗ tr_q rho)
    CMatrix out = (1.0 - p) * rho.entries();
    const CMatrix& m = rho.entries();
    for (int r = 0; r < d; ++r) {
      if (r & stride) continue;
      for (int c = 0; c < d; ++c) {
        if (c & stride) continue;
        const Complex partial = m(r, c) + m(r | stride, c | stride);
        out(r, c) += 0.5 * p * partial;
        out(r | stride, c | stride) += 0.5 * p * partial;
      }
    }
    return DensityMatrix(nq, std::move(out));
  }
  if (channel.family == ChannelFamily::PhaseFlip) {
    // (1-p) rho + p Z rho Z: off-diagonal blocks in the target qubit scale
    // by (1 - 2p).
    CMatrix out = rho.entries();
    const double scale = 1.0 - 2.0 * p;
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c)
        if (((r ^ c) & stride) != 0) out(r, c) *= scale;
    return DensityMatrix(nq, std::move(out));
  }
  return DensityMatrix(nq, detail::kraus_sum(rho.entries(), channel.operators, stride));
}

}  // namespace aqcp::qsim
