// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "aqcp/conformal/scores.hpp"
#include "aqcp/model/ansatz.hpp"
#include "aqcp/model/sampler.hpp"
#include "aqcp/qsim/noise.hpp"

namespace aqcp::harness {

// Flat key=value experiment configuration. Every field is range-checked in
// validate(); print() emits the canonical form that also feeds the config
// hash embedded in output headers.
struct ExperimentConfig {
  std::uint64_t seed = 1;
  double alpha = 0.1;
  std::vector<double> gamma_list{0.0, 0.03};
  std::vector<int> m_list{1, 2, 5, 10, 22, 46, 100, 215, 464, 1000};
  std::vector<std::string> scores{"euc", "knn", "kde", "hdr"};
  int window = 500;
  int n_cal = 100;
  int n_test = 9900;
  int n_train = 1000;
  int epochs = 30;
  double lr = 0.01;
  int batch_size = 0;
  int m_shots = 100;
  int qubits = 5;
  int layers = 5;
  std::string entangler = "linear";
  double grid_lo = -1.5;
  double grid_hi = 1.5;
  int grid_points = 301;
  std::string noise_family = "depolarising";
  std::string noise_kind = "constant";  // constant|linear_drift|sinusoid|burst|drift_burst
  double noise_p = 0.01;
  double noise_p0 = 0.01;
  double noise_p1 = 0.15;
  double noise_t_end = 0.0;  // 0 = span the whole stream
  double noise_period = 100.0;
  double noise_amp = 0.0;
  double noise_burst_p = 0.4;
  std::vector<double> noise_burst_times;  // empty = 35% and 70% of the stream
  double noise_burst_width = 30.0;
  double readout_p = 0.02;
  std::string sampler = "density";  // density|trajectory
  double dt_shot = 0.001;
  double batch_gap = 0.1;
  int threads = 0;
  int timing = 0;  // 1: measure wall_time_ms (breaks byte-identical reruns)
  std::string out_dir = "out";
  std::string model_file = "model.txt";
  std::string data_file;
  std::string shots_file;

  void validate() const {
    auto expect = [](bool ok, const std::string& what) {
      if (!ok) throw std::invalid_argument("config: " + what);
    };
    expect(alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0,1]");
    for (double g : gamma_list) expect(g >= 0.0, "gamma values must be >= 0");
    expect(!m_list.empty(), "m_list must be nonempty");
    for (int m : m_list) expect(m >= 1, "m_list entries must be >= 1");
    expect(!scores.empty(), "scores must be nonempty");
    for (const auto& s : scores) conformal::score_variant_from_name(s);
    expect(window >= 1, "window must be >= 1");
    expect(n_cal >= 1, "n_cal must be >= 1");
    expect(n_test >= 0, "n_test must be >= 0");
    expect(n_train >= 0, "n_train must be >= 0");
    expect(epochs >= 0, "epochs must be >= 0");
    expect(lr >= 0.0, "lr must be >= 0");
    expect(batch_size >= 0, "batch_size must be >= 0");
    expect(m_shots >= 1, "m_shots must be >= 1");
    expect(qubits >= 1 && qubits <= 10, "qubits must lie in [1,10]");
    expect(layers >= 1, "layers must be >= 1");
    model::entangler_from_name(entangler);
    expect(grid_hi > grid_lo, "grid_hi must exceed grid_lo");
    expect(grid_points >= 2, "grid_points must be >= 2");
    qsim::channel_family_from_name(noise_family);
    expect(noise_kind == "constant" || noise_kind == "linear_drift" ||
               noise_kind == "sinusoid" || noise_kind == "burst" ||
               noise_kind == "drift_burst",
           "unknown noise_kind");
    expect(readout_p >= 0.0 && readout_p <= 1.0, "readout_p must lie in [0,1]");
    model::sampler_mode_from_name(sampler);
    expect(dt_shot >= 0.0 && batch_gap >= 0.0, "clock increments must be >= 0");
    expect(timing == 0 || timing == 1, "timing must be 0 or 1");
  }

  std::string print() const {
    std::ostringstream out;
    // shortest representation that re-parses to the same double
    auto num = [](double v) {
      char buf[40];
      for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
      }
      return std::string(buf);
    };
    auto num_list = [&](const std::vector<double>& vs) {
      std::string s;
      for (std::size_t i = 0; i < vs.size(); ++i) s += (i ? "," : "") + num(vs[i]);
      return s;
    };
    auto int_list = [](const std::vector<int>& vs) {
      std::string s;
      for (std::size_t i = 0; i < vs.size(); ++i)
        s += (i ? "," : "") + std::to_string(vs[i]);
      return s;
    };
    auto str_list = [](const std::vector<std::string>& vs) {
      std::string s;
      for (std::size_t i = 0; i < vs.size(); ++i) s += (i ? "," : "") + vs[i];
      return s;
    };
    out << "seed=" << seed << "\n";
    out << "alpha=" << num(alpha) << "\n";
    out << "gamma_list=" << num_list(gamma_list) << "\n";
    out << "m_list=" << int_list(m_list) << "\n";
    out << "scores=" << str_list(scores) << "\n";
    out << "window=" << window << "\n";
    out << "n_cal=" << n_cal << "\n";
    out << "n_test=" << n_test << "\n";
    out << "n_train=" << n_train << "\n";
    out << "epochs=" << epochs << "\n";
    out << "lr=" << num(lr) << "\n";
    out << "batch_size=" << batch_size << "\n";
    out << "m_shots=" << m_shots << "\n";
    out << "qubits=" << qubits << "\n";
    out << "layers=" << layers << "\n";
    out << "entangler=" << entangler << "\n";
    out << "grid_lo=" << num(grid_lo) << "\n";
    out << "grid_hi=" << num(grid_hi) << "\n";
    out << "grid_points=" << grid_points << "\n";
    out << "noise_family=" << noise_family << "\n";
    out << "noise_kind=" << noise_kind << "\n";
    out << "noise_p=" << num(noise_p) << "\n";
    out << "noise_p0=" << num(noise_p0) << "\n";
    out << "noise_p1=" << num(noise_p1) << "\n";
    out << "noise_t_end=" << num(noise_t_end) << "\n";
    out << "noise_period=" << num(noise_period) << "\n";
    out << "noise_amp=" << num(noise_amp) << "\n";
    out << "noise_burst_p=" << num(noise_burst_p) << "\n";
    out << "noise_burst_times=" << num_list(noise_burst_times) << "\n";
    out << "noise_burst_width=" << num(noise_burst_width) << "\n";
    out << "readout_p=" << num(readout_p) << "\n";
    out << "sampler=" << sampler << "\n";
    out << "dt_shot=" << num(dt_shot) << "\n";
    out << "batch_gap=" << num(batch_gap) << "\n";
    out << "threads=" << threads << "\n";
    out << "timing=" << timing << "\n";
    out << "out_dir=" << out_dir << "\n";
    out << "model_file=" << model_file << "\n";
    out << "data_file=" << data_file << "\n";
    out << "shots_file=" << shots_file << "\n";
    return out.str();
  }

  // FNV-1a over the canonical form, excluding out_dir: where results land
  // does not change what was computed.
  std::uint64_t hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    std::istringstream lines(print());
    std::string line;
    while (std::getline(lines, line)) {
      if (line.rfind("out_dir=", 0) == 0) continue;
      line += '\n';
      for (char c : line) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
      }
    }
    return h;
  }

  void set(const std::string& key, const std::string& value);
};

namespace detail {

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad numeric value for " + key + ": " + v);
  }
}

inline int to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long d = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return static_cast<int>(d);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer value for " + key + ": " + v);
  }
}

}  // namespace detail

inline void ExperimentConfig::set(const std::string& key, const std::string& value) {
  using detail::split_list;
  using detail::to_double;
  using detail::to_int;
  if (key == "seed") {
    try {
      std::size_t pos = 0;
      seed = std::stoull(value, &pos);
      if (pos != value.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw std::invalid_argument("config: bad integer value for seed: " + value);
    }
  }
  else if (key == "alpha") alpha = to_double(key, value);
  else if (key == "gamma_list") {
    gamma_list.clear();
    for (const auto& v : split_list(value)) gamma_list.push_back(to_double(key, v));
  } else if (key == "m_list") {
    m_list.clear();
    for (const auto& v : split_list(value)) m_list.push_back(to_int(key, v));
  } else if (key == "scores") scores = split_list(value);
  else if (key == "window") window = to_int(key, value);
  else if (key == "n_cal") n_cal = to_int(key, value);
  else if (key == "n_test") n_test = to_int(key, value);
  else if (key == "n_train") n_train = to_int(key, value);
  else if (key == "epochs") epochs = to_int(key, value);
  else if (key == "lr") lr = to_double(key, value);
  else if (key == "batch_size") batch_size = to_int(key, value);
  else if (key == "m_shots") m_shots = to_int(key, value);
  else if (key == "qubits") qubits = to_int(key, value);
  else if (key == "layers") layers = to_int(key, value);
  else if (key == "entangler") entangler = value;
  else if (key == "grid_lo") grid_lo = to_double(key, value);
  else if (key == "grid_hi") grid_hi = to_double(key, value);
  else if (key == "grid_points") grid_points = to_int(key, value);
  else if (key == "noise_family") noise_family = value;
  else if (key == "noise_kind") noise_kind = value;
  else if (key == "noise_p") noise_p = to_double(key, value);
  else if (key == "noise_p0") noise_p0 = to_double(key, value);
  else if (key == "noise_p1") noise_p1 = to_double(key, value);
  else if (key == "noise_t_end") noise_t_end = to_double(key, value);
  else if (key == "noise_period") noise_period = to_double(key, value);
  else if (key == "noise_amp") noise_amp = to_double(key, value);
  else if (key == "noise_burst_p") noise_burst_p = to_double(key, value);
  else if (key == "noise_burst_times") {
    noise_burst_times.clear();
    for (const auto& v : split_list(value)) noise_burst_times.push_back(to_double(key, v));
  } else if (key == "noise_burst_width") noise_burst_width = to_double(key, value);
  else if (key == "readout_p") readout_p = to_double(key, value);
  else if (key == "sampler") sampler = value;
  else if (key == "dt_shot") dt_shot = to_double(key, value);
  else if (key == "batch_gap") batch_gap = to_double(key, value);
  else if (key == "threads") threads = to_int(key, value);
  else if (key == "timing") timing = to_int(key, value);
  else if (key == "out_dir") out_dir = value;
  else if (key == "model_file") model_file = value;
  else if (key == "data_file") data_file = value;
  else if (key == "shots_file") shots_file = value;
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

// Parses `key=value` lines; '#' starts a comment, blank lines are skipped.
inline ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig config;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line.erase(hash_pos);
    // trim
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key=value");
    auto strip = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      if (a == std::string::npos) return std::string();
      const auto b = s.find_last_not_of(" \t");
      return s.substr(a, b - a + 1);
    };
    config.set(strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
  }
  return config;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return parse_config(in);
}

}  // namespace aqcp::harness
