// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "aqcp/data/dataset.hpp"
#include "aqcp/oracle/oracle.hpp"
#include "aqcp/util/rng.hpp"

namespace aqcp::data {

namespace detail {

inline std::vector<LabelledPoint> draw_points(const oracle::TaskDensity& task, int n,
                                              std::uint64_t stream_seed) {
  util::Rng rng(stream_seed);
  std::vector<LabelledPoint> points;
  points.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = rng.uniform(-10.0, 10.0);
    // fair coin picks the mixture component, same stream as the draws
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    const double y = sign * task.mu(x) + task.sigma * rng.normal();
    points.push_back({x, y});
  }
  return points;
}

}  // namespace detail

// i.i.d. draws from X ~ U(-10,10), Y | X=x from the two-component mixture.
// Each split uses its own derived stream, so changing one size leaves the
// other splits untouched.
inline DatasetSplit generate(std::uint64_t seed, int n_tr, int n_cal, int n_test) {
  if (n_tr < 0 || n_cal < 0 || n_test < 0)
    throw std::invalid_argument("generate: sizes must be nonnegative");
  const oracle::TaskDensity task;
  DatasetSplit split;
  split.seed = seed;
  split.train = detail::draw_points(task, n_tr, util::derive_seed(seed, 0x7472));
  split.calibration = detail::draw_points(task, n_cal, util::derive_seed(seed, 0x63616c));
  split.test = detail::draw_points(task, n_test, util::derive_seed(seed, 0x74657374));
  return split;
}

inline void save_dataset_csv(const std::string& path, const DatasetSplit& split) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open dataset file for writing: " + path);
  char buf[96];
  out << "split,x,y\n";
  auto write = [&](const char* name, const std::vector<LabelledPoint>& points) {
    for (const auto& p : points) {
      std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g\n", name, p.x, p.y);
      out << buf;
    }
  };
  write("train", split.train);
  write("calibration", split.calibration);
  write("test", split.test);
}

inline DatasetSplit load_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "split,x,y")
    throw std::runtime_error("dataset file: unexpected header: " + path);
  DatasetSplit split;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream is(line);
    std::string name, xs, ys;
    if (!std::getline(is, name, ',') || !std::getline(is, xs, ',') ||
        !std::getline(is, ys))
      throw std::runtime_error("dataset file line " + std::to_string(line_no) +
                               ": expected 3 fields");
    const LabelledPoint p{std::stod(xs), std::stod(ys)};
    if (name == "train")
      split.train.push_back(p);
    else if (name == "calibration")
      split.calibration.push_back(p);
    else if (name == "test")
      split.test.push_back(p);
    else
      throw std::runtime_error("dataset file line " + std::to_string(line_no) +
                               ": unknown split '" + name + "'");
  }
  return split;
}

}  // namespace aqcp::data
