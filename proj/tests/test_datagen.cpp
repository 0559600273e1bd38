// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "aqcp/data/datagen.hpp"

using namespace aqcp::data;

TEST_CASE("same seed gives byte-identical splits") {
  const DatasetSplit a = generate(42, 50, 20, 30);
  const DatasetSplit b = generate(42, 50, 20, 30);
  REQUIRE(a.train.size() == 50);
  REQUIRE(a.calibration.size() == 20);
  REQUIRE(a.test.size() == 30);
  for (std::size_t i = 0; i < a.train.size(); ++i) {
    REQUIRE(a.train[i].x == b.train[i].x);
    REQUIRE(a.train[i].y == b.train[i].y);
  }
  for (std::size_t i = 0; i < a.test.size(); ++i) REQUIRE(a.test[i].y == b.test[i].y);

  const DatasetSplit c = generate(43, 50, 20, 30);
  REQUIRE(a.train[0].x != c.train[0].x);
}

TEST_CASE("empty sizes produce empty splits") {
  const DatasetSplit split = generate(7, 0, 5, 0);
  REQUIRE(split.train.empty());
  REQUIRE(split.test.empty());
  REQUIRE(split.calibration.size() == 5);
  REQUIRE_THROWS_AS(generate(7, -1, 0, 0), std::invalid_argument);
}

TEST_CASE("x draws look uniform on [-10, 10]") {
  const DatasetSplit split = generate(11, 100000, 0, 0);
  double mean = 0.0;
  for (const auto& p : split.train) {
    REQUIRE(p.x >= -10.0);
    REQUIRE(p.x <= 10.0);
    mean += p.x;
  }
  mean /= static_cast<double>(split.train.size());
  REQUIRE(std::abs(mean) <= 0.1);  // SE ~ 0.018
}

TEST_CASE("Kolmogorov-Smirnov statistic is below the 1% critical value") {
  const int n = 10000;
  const DatasetSplit split = generate(2024, n, 0, 0);
  std::vector<double> xs;
  for (const auto& p : split.train) xs.push_back(p.x);
  std::sort(xs.begin(), xs.end());
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    const double cdf = (xs[static_cast<std::size_t>(i)] + 10.0) / 20.0;
    d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - cdf));
  }
  REQUIRE(d < 1.6276 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("per-component residual spread matches sigma = 0.05") {
  const aqcp::oracle::TaskDensity task;
  const DatasetSplit split = generate(5, 50000, 0, 0);
  double ss = 0.0;
  for (const auto& p : split.train) {
    const double mu = task.mu(p.x);
    // classify by the nearest component mean
    const double r = std::abs(p.y - mu) <= std::abs(p.y + mu) ? p.y - mu : p.y + mu;
    ss += r * r;
  }
  const double sd = std::sqrt(ss / static_cast<double>(split.train.size()));
  REQUIRE(sd == Catch::Approx(0.05).margin(0.003));
}

TEST_CASE("dataset CSV round-trips") {
  const DatasetSplit split = generate(77, 12, 6, 9);
  const auto path =
      (std::filesystem::temp_directory_path() / "aqcp_dataset.csv").string();
  save_dataset_csv(path, split);
  const DatasetSplit loaded = load_dataset_csv(path);
  REQUIRE(loaded.train.size() == split.train.size());
  REQUIRE(loaded.calibration.size() == split.calibration.size());
  REQUIRE(loaded.test.size() == split.test.size());
  for (std::size_t i = 0; i < split.test.size(); ++i) {
    REQUIRE(loaded.test[i].x == split.test[i].x);
    REQUIRE(loaded.test[i].y == split.test[i].y);
  }
}
