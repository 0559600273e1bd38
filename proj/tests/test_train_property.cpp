// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "aqcp/harness/experiments.hpp"
#include "aqcp/model/io.hpp"

using namespace aqcp;

TEST_CASE("training at defaults cuts the empirical risk by at least 20%") {
  harness::ExperimentConfig config;  // epochs=30, lr=0.01, full batch
  config.seed = 314;
  config.threads = 2;
  auto pqc = harness::fresh_model(config);
  const auto result = harness::train_experiment(config, pqc);
  REQUIRE(result.loss_history.size() == 30);
  REQUIRE(result.loss_history.back() < 0.8 * result.loss_history.front());
}

TEST_CASE("retraining with the same seed writes a byte-identical model file") {
  harness::ExperimentConfig config;
  config.seed = 2718;
  config.qubits = 3;
  config.layers = 1;
  config.n_train = 20;
  config.epochs = 2;
  config.threads = 2;

  const auto dir = std::filesystem::temp_directory_path();
  std::string files[2];
  for (int round = 0; round < 2; ++round) {
    auto pqc = harness::fresh_model(config);
    harness::train_experiment(config, pqc);
    const std::string path =
        (dir / ("aqcp_train_det_" + std::to_string(round) + ".txt")).string();
    model::save_model(path, pqc);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    files[round] = ss.str();
  }
  REQUIRE(!files[0].empty());
  REQUIRE(files[0] == files[1]);
}
