// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aqcp/model/encoder.hpp"
#include "aqcp/qsim/gate.hpp"

namespace aqcp::model {

enum class Entangler { Linear, Circular, Full };

inline const char* entangler_name(Entangler e) {
  switch (e) {
    case Entangler::Linear: return "linear";
    case Entangler::Circular: return "circular";
    case Entangler::Full: return "full";
  }
  return "?";
}

inline Entangler entangler_from_name(const std::string& name) {
  if (name == "linear") return Entangler::Linear;
  if (name == "circular") return Entangler::Circular;
  if (name == "full") return Entangler::Full;
  throw std::invalid_argument("unknown entangler: " + name);
}

// Hardware-efficient ansatz: per layer, RZ-RY-RZ rotations on every qubit
// followed by a fixed CZ entangling pattern.
struct AnsatzConfig {
  int num_qubits = 5;
  int num_layers = 5;
  Entangler entangler = Entangler::Linear;

  int parameter_count() const { return 3 * num_layers * num_qubits; }
};

inline std::vector<std::pair<int, int>> entangler_pairs(const AnsatzConfig& config) {
  std::vector<std::pair<int, int>> pairs;
  const int q = config.num_qubits;
  switch (config.entangler) {
    case Entangler::Linear:
      for (int k = 0; k + 1 < q; ++k) pairs.emplace_back(k, k + 1);
      break;
    case Entangler::Circular:
      for (int k = 0; k + 1 < q; ++k) pairs.emplace_back(k, k + 1);
      if (q > 2) pairs.emplace_back(q - 1, 0);
      break;
    case Entangler::Full:
      for (int a = 0; a < q; ++a)
        for (int b = a + 1; b < q; ++b) pairs.emplace_back(a, b);
      break;
  }
  return pairs;
}

// Angle layout: index (layer * Q + qubit) * 3 + r with r = 0,1,2 for the
// RZ, RY, RZ rotations in temporal order.
inline qsim::Circuit build_circuit(const VectorXd& angles, const AnsatzConfig& config) {
  if (angles.size() != config.parameter_count())
    throw std::invalid_argument("angle vector length must equal 3*L*Q");
  qsim::Circuit circuit;
  const auto pairs = entangler_pairs(config);
  circuit.reserve(static_cast<std::size_t>(config.parameter_count()) +
                  pairs.size() * static_cast<std::size_t>(config.num_layers));
  for (int l = 0; l < config.num_layers; ++l) {
    for (int q = 0; q < config.num_qubits; ++q) {
      const int base = (l * config.num_qubits + q) * 3;
      circuit.push_back(qsim::Gate::rz(q, angles(base)));
      circuit.push_back(qsim::Gate::ry(q, angles(base + 1)));
      circuit.push_back(qsim::Gate::rz(q, angles(base + 2)));
    }
    for (const auto& [a, b] : pairs) circuit.push_back(qsim::Gate::cz(a, b));
  }
  return circuit;
}

inline qsim::Circuit build_circuit(double x, const AngleEncoder& encoder,
                                   const AnsatzConfig& config) {
  if (encoder.output_size() != config.parameter_count())
    throw std::invalid_argument("encoder output size must equal 3*L*Q");
  return build_circuit(encoder.forward(x), config);
}

}  // namespace aqcp::model
