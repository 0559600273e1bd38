// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "aqcp/model/sampler.hpp"

namespace aqcp::model {

namespace detail {

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& s, const std::string& context) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("failed to parse number '" + s + "' in " + context);
  }
}

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Model file: versioned line-oriented text. Weights are written row-major
// with full precision so save/load round-trips exactly.
// ---------------------------------------------------------------------------

inline void save_model(const std::string& path, const PqcModel& model) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open model file for writing: " + path);
  out << "format_version 1\n";
  out << "ansatz_qubits " << model.ansatz.num_qubits << "\n";
  out << "ansatz_layers " << model.ansatz.num_layers << "\n";
  out << "ansatz_entangler " << entangler_name(model.ansatz.entangler) << "\n";
  out << "grid_y_min " << detail::fmt_double(model.grid.y_min) << "\n";
  out << "grid_y_max " << detail::fmt_double(model.grid.y_max) << "\n";
  out << "encoder_layer_sizes";
  for (int s : model.encoder.layer_sizes()) out << ' ' << s;
  out << "\n";
  for (std::size_t l = 0; l < model.encoder.num_layers(); ++l) {
    const auto& w = model.encoder.weights()[l];
    out << "weights " << l << ' ' << w.rows() << ' ' << w.cols() << "\n";
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c)
        out << (c ? " " : "") << detail::fmt_double(w(r, c));
      out << "\n";
    }
    const auto& b = model.encoder.biases()[l];
    out << "biases " << l << ' ' << b.size() << "\n";
    for (Eigen::Index r = 0; r < b.size(); ++r)
      out << (r ? " " : "") << detail::fmt_double(b(r));
    out << "\n";
  }
}

inline PqcModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::string key;
  auto expect_key = [&](const char* want) {
    if (!(in >> key) || key != want)
      throw std::runtime_error(std::string("model file: expected '") + want +
                               "', got '" + key + "'");
  };
  expect_key("format_version");
  int version = 0;
  in >> version;
  if (version != 1)
    throw std::runtime_error("model file: unsupported format_version " +
                             std::to_string(version));
  PqcModel model;
  expect_key("ansatz_qubits");
  in >> model.ansatz.num_qubits;
  expect_key("ansatz_layers");
  in >> model.ansatz.num_layers;
  expect_key("ansatz_entangler");
  std::string ent;
  in >> ent;
  model.ansatz.entangler = entangler_from_name(ent);
  expect_key("grid_y_min");
  in >> model.grid.y_min;
  expect_key("grid_y_max");
  in >> model.grid.y_max;
  model.grid.num_qubits = model.ansatz.num_qubits;
  expect_key("encoder_layer_sizes");
  std::vector<int> sizes;
  {
    std::string rest;
    std::getline(in, rest);
    std::istringstream is(rest);
    int v;
    while (is >> v) sizes.push_back(v);
  }
  model.encoder = AngleEncoder(sizes);
  for (std::size_t l = 0; l < model.encoder.num_layers(); ++l) {
    std::size_t li;
    Eigen::Index rows, cols;
    expect_key("weights");
    in >> li >> rows >> cols;
    auto& w = model.encoder.weights()[l];
    if (li != l || rows != w.rows() || cols != w.cols())
      throw std::runtime_error("model file: weight block mismatch at layer " +
                               std::to_string(l));
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) in >> w(r, c);
    expect_key("biases");
    Eigen::Index len;
    in >> li >> len;
    auto& b = model.encoder.biases()[l];
    if (li != l || len != b.size())
      throw std::runtime_error("model file: bias block mismatch at layer " +
                               std::to_string(l));
    for (Eigen::Index r = 0; r < len; ++r) in >> b(r);
  }
  if (!in) throw std::runtime_error("model file: truncated or malformed: " + path);
  model.validate();
  return model;
}

// ---------------------------------------------------------------------------
// Shots CSV: header `sample_index,x,t_seconds,bitstring,y_mapped`, one row
// per shot. Floats carry full precision (>= 9 significant digits).
// ---------------------------------------------------------------------------

inline void save_shots_file(const std::string& path,
                            const std::map<long, ShotMultiset>& shots, int num_qubits) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open shots file for writing: " + path);
  const GridMap grid{-1.5, 1.5, num_qubits};
  out << "sample_index,x,t_seconds,bitstring,y_mapped\n";
  for (const auto& [index, multiset] : shots) {
    for (const auto& r : multiset.records) {
      out << index << ',' << detail::fmt_double(multiset.x) << ','
          << detail::fmt_double(r.t) << ',' << grid.format_bitstring(r.bitstring)
          << ',' << detail::fmt_double(r.y) << "\n";
    }
  }
}

// Reads a shots file. If expected_qubits is 0 the bitstring width is taken
// from the first data row; every row must match it.
inline std::map<long, ShotMultiset> load_shots_file(const std::string& path,
                                                    int expected_qubits = 0) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open shots file: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("shots file: missing header: " + path);
  if (line != "sample_index,x,t_seconds,bitstring,y_mapped")
    throw std::runtime_error("shots file: unexpected header: " + line);

  std::map<long, ShotMultiset> result;
  int num_qubits = expected_qubits;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto context = "shots file line " + std::to_string(line_no);
    const auto fields = detail::split(line, ',');
    if (fields.size() != 5)
      throw std::runtime_error(context + ": expected 5 fields, got " +
                               std::to_string(fields.size()));
    long index = 0;
    try {
      index = std::stol(fields[0]);
    } catch (const std::exception&) {
      throw std::runtime_error(context + ": bad sample_index '" + fields[0] + "'");
    }
    const double x = detail::parse_double(fields[1], context);
    const double t = detail::parse_double(fields[2], context);
    const std::string& bits = fields[3];
    if (num_qubits == 0) num_qubits = static_cast<int>(bits.size());
    if (static_cast<int>(bits.size()) != num_qubits)
      throw std::runtime_error(context + ": bitstring length " +
                               std::to_string(bits.size()) + " does not match Q=" +
                               std::to_string(num_qubits));
    const GridMap grid{-1.5, 1.5, num_qubits};
    int bin = 0;
    try {
      bin = grid.parse_bitstring(bits);
    } catch (const std::exception& e) {
      throw std::runtime_error(context + ": " + e.what());
    }
    const double y = detail::parse_double(fields[4], context);
    auto& multiset = result[index];
    multiset.x = x;
    multiset.records.push_back({t, bin, y});
  }
  return result;
}

}  // namespace aqcp::model
