// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace aqcp::model {

// Bitstring-to-target map f(b) = y_min + k * bin(b), with qubit 0 as the
// most-significant bit. Bijective between {0,1}^Q and the lattice.
struct GridMap {
  double y_min = -1.5;
  double y_max = 1.5;
  int num_qubits = 5;

  int num_points() const { return 1 << num_qubits; }
  double spacing() const { return (y_max - y_min) / (num_points() - 1); }

  double map_index(int bin) const {
    if (bin < 0 || bin >= num_points())
      throw std::invalid_argument("grid index out of range");
    return y_min + spacing() * bin;
  }

  int parse_bitstring(std::string_view b) const {
    if (static_cast<int>(b.size()) != num_qubits)
      throw std::invalid_argument("bitstring length must equal qubit count");
    int bin = 0;
    for (char c : b) {
      if (c != '0' && c != '1')
        throw std::invalid_argument("bitstring may contain only 0 and 1");
      bin = (bin << 1) | (c - '0');
    }
    return bin;
  }

  double map_bitstring(std::string_view b) const { return map_index(parse_bitstring(b)); }

  std::string format_bitstring(int bin) const {
    std::string s(static_cast<std::size_t>(num_qubits), '0');
    for (int q = 0; q < num_qubits; ++q)
      if ((bin >> (num_qubits - 1 - q)) & 1) s[static_cast<std::size_t>(q)] = '1';
    return s;
  }

  // Nearest lattice cell; used to discretise training targets.
  int snap_index(double y) const {
    const double idx = std::round((y - y_min) / spacing());
    if (idx < 0.0) return 0;
    if (idx > num_points() - 1) return num_points() - 1;
    return static_cast<int>(idx);
  }
};

}  // namespace aqcp::model
