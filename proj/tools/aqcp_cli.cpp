// SPDX-License-Identifier: Apache-2.0
// Command-line harness: data generation, model training, shot collection,
// online coverage runs, the efficiency sweep, and optimal-set baselines.
// All outputs are plot-ready CSV with the config hash and seed embedded.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "aqcp/harness/config.hpp"
#include "aqcp/harness/experiments.hpp"

namespace {

using aqcp::harness::ExperimentConfig;

std::string resolve_model_path(const ExperimentConfig& config) {
  if (config.model_file.find('/') != std::string::npos) return config.model_file;
  return config.out_dir + "/" + config.model_file;
}

aqcp::model::PqcModel load_model_or_exit(const ExperimentConfig& config) {
  const std::string path = resolve_model_path(config);
  if (!std::filesystem::exists(path)) {
    std::fprintf(stderr, "error: model file '%s' not found; run `aqcp train` first\n",
                 path.c_str());
    std::exit(2);
  }
  return aqcp::model::load_model(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"aqcp: adaptive conformal prediction over a noisy PQC simulator"};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::string out_override;
  std::uint64_t seed_override = 0;
  bool seed_given = false, print_config = false;
  app.add_option("--config", config_path, "key=value config file");
  app.add_option("--seed", seed_override, "override the config seed")
      ->each([&](const std::string&) { seed_given = true; });
  app.add_option("--out", out_override, "override the output directory");
  app.add_flag("--print-config", print_config, "echo the canonical config and exit");

  auto* cmd_generate = app.add_subcommand("generate-data", "write the dataset CSV");
  auto* cmd_train = app.add_subcommand("train", "train the model, write model + loss CSV");
  auto* cmd_shots = app.add_subcommand("sample-shots", "collect shots into a CSV");
  auto* cmd_run = app.add_subcommand("run", "online coverage run per (gamma, score)");
  auto* cmd_eff = app.add_subcommand("efficiency", "set-size sweep across shot counts");
  auto* cmd_oracle = app.add_subcommand("oracle", "optimal set sizes over the test draws");
  for (auto* sub : {cmd_generate, cmd_train, cmd_shots, cmd_run, cmd_eff, cmd_oracle})
    sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig config;
    if (!config_path.empty()) config = aqcp::harness::load_config(config_path);
    if (seed_given) config.seed = seed_override;
    if (!out_override.empty()) config.out_dir = out_override;
    config.validate();

    if (print_config) {
      std::fputs(config.print().c_str(), stdout);
      if (app.get_subcommands().empty()) return 0;
    }
    if (app.get_subcommands().empty()) {
      std::fputs(app.help().c_str(), stderr);
      return 2;
    }
    std::filesystem::create_directories(config.out_dir);

    if (cmd_generate->parsed()) {
      const auto split = aqcp::data::generate(config.seed, config.n_train, config.n_cal,
                                              config.n_test);
      const std::string path = config.out_dir + "/dataset.csv";
      aqcp::data::save_dataset_csv(path, split);
      std::printf("wrote %s (%d train, %d calibration, %d test)\n", path.c_str(),
                  config.n_train, config.n_cal, config.n_test);
      return 0;
    }

    if (cmd_train->parsed()) {
      auto pqc = aqcp::harness::fresh_model(config);
      const auto result = aqcp::harness::train_experiment(config, pqc);
      const std::string model_path = resolve_model_path(config);
      aqcp::model::save_model(model_path, pqc);
      const std::string loss_path = config.out_dir + "/loss.csv";
      aqcp::harness::write_loss_csv(loss_path, result, config.hash(), config.seed);
      std::printf("wrote %s and %s (final loss %.6g)\n", model_path.c_str(),
                  loss_path.c_str(),
                  result.loss_history.empty() ? 0.0 : result.loss_history.back());
      return 0;
    }

    if (cmd_shots->parsed()) {
      const auto pqc = load_model_or_exit(config);
      const auto split = aqcp::harness::load_or_generate_data(config);
      std::vector<aqcp::data::LabelledPoint> streamed = split.calibration;
      streamed.insert(streamed.end(), split.test.begin(), split.test.end());
      const auto shots =
          aqcp::harness::shot_stream(config, pqc, streamed, config.m_shots);
      std::map<long, aqcp::model::ShotMultiset> by_index;
      for (std::size_t i = 0; i < shots.size(); ++i)
        by_index[static_cast<long>(i)] = shots[i];
      const std::string path = config.out_dir + "/shots.csv";
      aqcp::model::save_shots_file(path, by_index, config.qubits);
      std::printf("wrote %s (%zu samples x %d shots)\n", path.c_str(), shots.size(),
                  config.m_shots);
      return 0;
    }

    if (cmd_run->parsed()) {
      const auto pqc = load_model_or_exit(config);
      const auto output = aqcp::harness::run_experiment(config, pqc);
      for (const auto& s : output.summaries)
        std::printf("gamma=%g score=%s coverage=%.4f set_size=%.4f bound=%g %s\n",
                    s.gamma, s.score.c_str(), s.avg_coverage, s.avg_set_size, s.bound,
                    s.bound_ok ? "ok" : "VIOLATED");
      std::printf("wrote %s/summary.csv\n", config.out_dir.c_str());
      return output.all_bounds_ok ? 0 : 1;
    }

    if (cmd_eff->parsed()) {
      const auto pqc = load_model_or_exit(config);
      const auto rows = aqcp::harness::efficiency_experiment(config, pqc);
      const std::string path = config.out_dir + "/efficiency.csv";
      aqcp::harness::write_efficiency_csv(path, rows, config.hash(), config.seed);
      std::printf("wrote %s (%zu rows)\n", path.c_str(), rows.size());
      return 0;
    }

    if (cmd_oracle->parsed()) {
      const std::string path = config.out_dir + "/oracle.csv";
      aqcp::harness::oracle_experiment(config, path);
      std::printf("wrote %s\n", path.c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
