// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aqcp/conformal/aqcp.hpp"
#include "aqcp/data/datagen.hpp"
#include "aqcp/harness/config.hpp"
#include "aqcp/model/io.hpp"
#include "aqcp/model/training.hpp"
#include "aqcp/oracle/oracle.hpp"
#include "aqcp/util/parallel.hpp"

namespace aqcp::harness {

inline double stream_duration(std::size_t n_samples, int m, double dt, double gap) {
  return static_cast<double>(n_samples) * (m * dt + gap);
}

// Noise schedule from config. drift_burst overlays bursts on a linear drift;
// burst times default to 35% and 70% of the stream.
inline qsim::NoiseSchedule build_schedule(const ExperimentConfig& config,
                                          double duration) {
  const auto family = qsim::channel_family_from_name(config.noise_family);
  const double t_end = config.noise_t_end > 0.0 ? config.noise_t_end : duration;
  std::vector<double> burst_times = config.noise_burst_times;
  if (burst_times.empty()) burst_times = {0.35 * t_end, 0.7 * t_end};

  qsim::ParamFn param = qsim::ParamFn::constant(config.noise_p);
  if (config.noise_kind == "linear_drift") {
    param = qsim::ParamFn::linear_drift(config.noise_p0, config.noise_p1, t_end);
  } else if (config.noise_kind == "sinusoid") {
    param = qsim::ParamFn::sinusoid(config.noise_p, config.noise_amp,
                                    config.noise_period);
  } else if (config.noise_kind == "burst") {
    param = qsim::ParamFn::burst(config.noise_p, config.noise_burst_p, burst_times,
                                 config.noise_burst_width);
  } else if (config.noise_kind == "drift_burst") {
    param = qsim::ParamFn::burst_overlay(
        qsim::ParamFn::linear_drift(config.noise_p0, config.noise_p1, t_end),
        config.noise_burst_p, burst_times, config.noise_burst_width);
  }
  return qsim::NoiseSchedule(family, std::move(param),
                             qsim::ParamFn::constant(config.readout_p));
}

// Collects one shot batch per sample. Sample i occupies the time slot
// [i*(M dt + gap), ...), matching a single clock threaded through the
// stream, so batches can be simulated in parallel.
inline std::vector<model::ShotMultiset> collect_shots(
    const model::PqcModel& pqc, const qsim::NoiseSchedule& schedule,
    model::SamplerMode mode, std::span<const data::LabelledPoint> points, int m,
    double dt, double gap, std::uint64_t seed, int threads = 0) {
  const model::ShotSampler sampler(pqc, schedule, mode);
  std::vector<model::ShotMultiset> shots(points.size());
  util::parallel_for(
      points.size(),
      [&](std::size_t i) {
        model::ShotClock clock(static_cast<double>(i) * (m * dt + gap), dt, gap);
        util::Rng rng(util::derive_seed(seed, 0x73686f74, i));
        shots[i] = sampler.sample(points[i].x, m, clock, rng);
      },
      threads);
  return shots;
}

// ---------------------------------------------------------------------------
// Per-cell AQCP runs over a precollected shot stream.
// ---------------------------------------------------------------------------

struct CellSummary {
  double gamma = 0.0;
  std::string score;
  long n_test = 0;
  double avg_coverage = 0.0;
  double avg_set_size = 0.0;
  double bound = 0.0;
  bool bound_ok = true;
};

struct CellResult {
  std::vector<conformal::StepRecord> records;
  std::vector<double> wall_ms;  // empty unless timing was requested
  CellSummary summary;
};

inline CellResult run_cell(const std::vector<model::ShotMultiset>& shots,
                           std::span<const data::LabelledPoint> calibration,
                           std::span<const data::LabelledPoint> test,
                           const conformal::ScoreSpec& spec, double gamma, double alpha,
                           const conformal::CandidateGrid& grid,
                           std::uint64_t tiebreak_seed, bool timing = false) {
  using clock = std::chrono::steady_clock;
  if (shots.size() != calibration.size() + test.size())
    throw std::invalid_argument("run_cell: shot stream does not cover the data stream");

  CellResult result;
  std::vector<double> cal_scores;
  cal_scores.reserve(calibration.size());
  for (std::size_t i = 0; i < calibration.size(); ++i) {
    const conformal::Tiebreak tiebreak{tiebreak_seed, i, spec.tiebreak_sigma};
    cal_scores.push_back(
        conformal::score(spec, calibration[i].x, calibration[i].y, shots[i], tiebreak));
  }
  conformal::AqcpState state =
      conformal::AqcpState::initial(alpha, gamma, std::move(cal_scores), tiebreak_seed);

  result.records.reserve(test.size());
  for (std::size_t j = 0; j < test.size(); ++j) {
    const auto t0 = clock::now();
    const std::size_t index = calibration.size() + j;
    const conformal::StepOutcome out = conformal::aqcp_step(
        state, test[j].x, test[j].y, shots[index], spec, grid);
    result.records.push_back({static_cast<long>(j + 1), out.alpha_used, out.err,
                              1 - out.err, out.set.size_measure(), out.lambda});
    if (timing)
      result.wall_ms.push_back(
          std::chrono::duration<double, std::milli>(clock::now() - t0).count());
  }

  CellSummary& s = result.summary;
  s.gamma = gamma;
  s.score = score_variant_name(spec.variant);
  s.n_test = static_cast<long>(test.size());
  double err_sum = 0.0, size_sum = 0.0;
  for (const auto& r : result.records) {
    err_sum += r.err;
    size_sum += r.set_size;
  }
  if (!test.empty()) {
    s.avg_coverage = 1.0 - err_sum / static_cast<double>(test.size());
    s.avg_set_size = size_sum / static_cast<double>(test.size());
  }
  if (gamma > 0.0 && !test.empty()) {
    s.bound = conformal::coverage_bound(alpha, gamma, static_cast<long>(test.size()));
    s.bound_ok =
        std::abs(err_sum / static_cast<double>(test.size()) - alpha) <= s.bound;
  } else {
    s.bound = std::numeric_limits<double>::infinity();
    s.bound_ok = true;
  }
  return result;
}

// Trailing moving average of the covered flag; NaN until the window fills.
inline std::vector<double> coverage_moving_average(
    const std::vector<conformal::StepRecord>& records, int window) {
  std::vector<double> ma(records.size(), std::numeric_limits<double>::quiet_NaN());
  double acc = 0.0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    acc += records[i].covered;
    if (i + 1 >= static_cast<std::size_t>(window)) {
      if (i + 1 > static_cast<std::size_t>(window))
        acc -= records[i - static_cast<std::size_t>(window)].covered;
      ma[i] = acc / window;
    }
  }
  return ma;
}

// RMS deviation of the windowed coverage from the target, over the steps
// where the window is full.
inline double coverage_rms_deviation(const std::vector<conformal::StepRecord>& records,
                                     int window, double target) {
  const auto ma = coverage_moving_average(records, window);
  double acc = 0.0;
  long n = 0;
  for (double v : ma) {
    if (std::isnan(v)) continue;
    acc += (v - target) * (v - target);
    ++n;
  }
  return n == 0 ? 0.0 : std::sqrt(acc / static_cast<double>(n));
}

// ---------------------------------------------------------------------------
// CSV output. Every file starts with `# config_hash=` and `# seed=` lines;
// with timing disabled reruns are byte-identical.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

}  // namespace detail

inline void write_metrics_csv(const std::string& path, const CellResult& cell,
                              int window, std::uint64_t config_hash,
                              std::uint64_t seed) {
  auto out = detail::open_out(path);
  char head[96];
  std::snprintf(head, sizeof(head), "# config_hash=%016llx\n# seed=%llu\n",
                static_cast<unsigned long long>(config_hash),
                static_cast<unsigned long long>(seed));
  out << head;
  out << "step,alpha_t,err,covered,set_size,lambda,coverage_ma,wall_time_ms\n";
  const auto ma = coverage_moving_average(cell.records, window);
  for (std::size_t i = 0; i < cell.records.size(); ++i) {
    const auto& r = cell.records[i];
    out << r.step << ',' << detail::fmt(r.alpha_t) << ',' << r.err << ',' << r.covered
        << ',' << detail::fmt(r.set_size) << ',' << detail::fmt(r.lambda) << ',';
    if (!std::isnan(ma[i])) out << detail::fmt(ma[i]);
    out << ',';
    if (i < cell.wall_ms.size()) out << detail::fmt(cell.wall_ms[i]);
    out << "\n";
  }
}

inline void write_summary_csv(const std::string& path,
                              const std::vector<CellSummary>& summaries,
                              std::uint64_t config_hash, std::uint64_t seed) {
  auto out = detail::open_out(path);
  char head[96];
  std::snprintf(head, sizeof(head), "# config_hash=%016llx\n# seed=%llu\n",
                static_cast<unsigned long long>(config_hash),
                static_cast<unsigned long long>(seed));
  out << head;
  out << "gamma,score,n_test,avg_coverage,avg_set_size,bound,bound_satisfied\n";
  for (const auto& s : summaries) {
    out << detail::fmt(s.gamma) << ',' << s.score << ',' << s.n_test << ','
        << detail::fmt(s.avg_coverage) << ',' << detail::fmt(s.avg_set_size) << ','
        << detail::fmt(s.bound) << ',' << (s.bound_ok ? 1 : 0) << "\n";
  }
}

// File-name fragment for a gamma value (dots are awkward in file names).
inline std::string gamma_tag(double gamma) {
  std::string s = detail::fmt(gamma);
  for (char& c : s)
    if (c == '.') c = 'p';
  return s;
}

// ---------------------------------------------------------------------------
// Experiment drivers shared by the CLI and the acceptance suite.
// ---------------------------------------------------------------------------

struct RunOutput {
  std::vector<CellSummary> summaries;
  bool all_bounds_ok = true;
};

inline conformal::ScoreSpec make_score_spec(const ExperimentConfig& config,
                                            const std::string& name) {
  conformal::ScoreSpec spec;
  spec.variant = conformal::score_variant_from_name(name);
  spec.hdr_grid.domain_lo = config.grid_lo;
  spec.hdr_grid.domain_hi = config.grid_hi;
  return spec;
}

inline conformal::CandidateGrid make_grid(const ExperimentConfig& config) {
  return conformal::CandidateGrid{config.grid_lo, config.grid_hi, config.grid_points};
}

// Shot stream for a sample stream: simulator-backed, or file replay when
// shots_file is set. Replay validates the x alignment per sample index.
inline std::vector<model::ShotMultiset> shot_stream(
    const ExperimentConfig& config, const model::PqcModel& pqc,
    std::span<const data::LabelledPoint> points, int m) {
  if (!config.shots_file.empty()) {
    auto by_index = model::load_shots_file(config.shots_file, config.qubits);
    std::vector<model::ShotMultiset> shots(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto it = by_index.find(static_cast<long>(i));
      if (it == by_index.end())
        throw std::runtime_error("shots file is missing sample_index " +
                                 std::to_string(i));
      if (std::abs(it->second.x - points[i].x) > 1e-9)
        throw std::runtime_error("shots file x mismatch at sample_index " +
                                 std::to_string(i));
      shots[i] = it->second;
    }
    return shots;
  }
  const double duration =
      stream_duration(points.size(), m, config.dt_shot, config.batch_gap);
  const qsim::NoiseSchedule schedule = build_schedule(config, duration);
  return collect_shots(pqc, schedule, model::sampler_mode_from_name(config.sampler),
                       points, m, config.dt_shot, config.batch_gap, config.seed,
                       config.threads);
}

inline data::DatasetSplit load_or_generate_data(const ExperimentConfig& config) {
  if (!config.data_file.empty() && std::filesystem::exists(config.data_file))
    return data::load_dataset_csv(config.data_file);
  return data::generate(config.seed, config.n_train, config.n_cal, config.n_test);
}

// Coverage experiment: one metrics CSV per (gamma, score) cell plus a
// summary CSV; returns the summaries and the overall bound verdict.
inline RunOutput run_experiment(const ExperimentConfig& config,
                                const model::PqcModel& pqc) {
  config.validate();
  const data::DatasetSplit split = load_or_generate_data(config);
  std::vector<data::LabelledPoint> streamed = split.calibration;
  streamed.insert(streamed.end(), split.test.begin(), split.test.end());
  const auto shots = shot_stream(config, pqc, streamed, config.m_shots);
  const auto grid = make_grid(config);
  std::filesystem::create_directories(config.out_dir);

  RunOutput output;
  for (std::size_t gi = 0; gi < config.gamma_list.size(); ++gi) {
    for (std::size_t si = 0; si < config.scores.size(); ++si) {
      const double gamma = config.gamma_list[gi];
      const auto spec = make_score_spec(config, config.scores[si]);
      const std::uint64_t cell_seed = util::derive_seed(config.seed, gi + 1, si + 1);
      const CellResult cell =
          run_cell(shots, split.calibration, split.test, spec, gamma, config.alpha,
                   grid, cell_seed, config.timing != 0);
      const std::string path = config.out_dir + "/metrics_g" + gamma_tag(gamma) + "_" +
                               config.scores[si] + ".csv";
      write_metrics_csv(path, cell, config.window, config.hash(), config.seed);
      output.summaries.push_back(cell.summary);
      output.all_bounds_ok = output.all_bounds_ok && cell.summary.bound_ok;
    }
  }
  write_summary_csv(config.out_dir + "/summary.csv", output.summaries, config.hash(),
                    config.seed);
  return output;
}

struct EfficiencyRow {
  int m = 0;
  std::string score;
  double avg_coverage = 0.0;
  double avg_set_size = 0.0;
  double oracle_avg_set_size = 0.0;
};

// Average optimal-set size over the test inputs, in the same grid measure
// as sampled prediction sets.
inline double oracle_average_size(std::span<const data::LabelledPoint> test,
                                  double alpha, const conformal::CandidateGrid& grid) {
  const oracle::TaskDensity task;
  if (test.empty()) return 0.0;
  std::vector<double> sizes(test.size());
  util::parallel_for(test.size(), [&](std::size_t i) {
    sizes[i] = oracle::optimal_set(task, test[i].x, alpha).to_grid_set(grid).size_measure();
  });
  double acc = 0.0;
  for (double s : sizes) acc += s;
  return acc / static_cast<double>(test.size());
}

// Set-size study across shot counts. The adaptation step size is the first
// positive entry of gamma_list.
inline std::vector<EfficiencyRow> efficiency_experiment(const ExperimentConfig& config,
                                                        const model::PqcModel& pqc) {
  config.validate();
  if (!config.shots_file.empty())
    throw std::invalid_argument(
        "efficiency resamples per shot count; shots_file replay is not supported");
  double gamma = 0.0;
  for (double g : config.gamma_list)
    if (g > 0.0) {
      gamma = g;
      break;
    }
  if (gamma == 0.0)
    throw std::invalid_argument("efficiency: gamma_list needs a positive entry");

  const data::DatasetSplit split = load_or_generate_data(config);
  std::vector<data::LabelledPoint> streamed = split.calibration;
  streamed.insert(streamed.end(), split.test.begin(), split.test.end());
  const auto grid = make_grid(config);
  const double oracle_avg = oracle_average_size(split.test, config.alpha, grid);

  std::vector<EfficiencyRow> rows;
  for (std::size_t mi = 0; mi < config.m_list.size(); ++mi) {
    const int m = config.m_list[mi];
    const auto shots = shot_stream(config, pqc, streamed, m);
    for (std::size_t si = 0; si < config.scores.size(); ++si) {
      const auto spec = make_score_spec(config, config.scores[si]);
      const std::uint64_t cell_seed =
          util::derive_seed(config.seed, 0x4d00 + mi, si + 1);
      const CellResult cell = run_cell(shots, split.calibration, split.test, spec,
                                       gamma, config.alpha, grid, cell_seed);
      rows.push_back({m, config.scores[si], cell.summary.avg_coverage,
                      cell.summary.avg_set_size, oracle_avg});
    }
  }
  return rows;
}

inline void write_efficiency_csv(const std::string& path,
                                 const std::vector<EfficiencyRow>& rows,
                                 std::uint64_t config_hash, std::uint64_t seed) {
  auto out = detail::open_out(path);
  char head[96];
  std::snprintf(head, sizeof(head), "# config_hash=%016llx\n# seed=%llu\n",
                static_cast<unsigned long long>(config_hash),
                static_cast<unsigned long long>(seed));
  out << head;
  out << "# oracle_aggregation=mean optimal-set size over the test x draws\n";
  out << "M,score,avg_coverage,avg_set_size,oracle_avg_set_size\n";
  for (const auto& r : rows)
    out << r.m << ',' << r.score << ',' << detail::fmt(r.avg_coverage) << ','
        << detail::fmt(r.avg_set_size) << ',' << detail::fmt(r.oracle_avg_set_size)
        << "\n";
}

// Optimal-set sizes per test input plus their average.
inline void oracle_experiment(const ExperimentConfig& config, const std::string& path) {
  config.validate();
  const data::DatasetSplit split = load_or_generate_data(config);
  const auto grid = make_grid(config);
  const oracle::TaskDensity task;
  std::vector<double> sizes(split.test.size());
  util::parallel_for(
      split.test.size(),
      [&](std::size_t i) {
        sizes[i] = oracle::optimal_set(task, split.test[i].x, config.alpha)
                       .to_grid_set(grid)
                       .size_measure();
      },
      config.threads);

  auto out = detail::open_out(path);
  char head[96];
  std::snprintf(head, sizeof(head), "# config_hash=%016llx\n# seed=%llu\n",
                static_cast<unsigned long long>(config.hash()),
                static_cast<unsigned long long>(config.seed));
  out << head;
  out << "x,optimal_set_size\n";
  double acc = 0.0;
  for (std::size_t i = 0; i < split.test.size(); ++i) {
    out << detail::fmt(split.test[i].x) << ',' << detail::fmt(sizes[i]) << "\n";
    acc += sizes[i];
  }
  if (!sizes.empty())
    out << "# average_set_size=" << detail::fmt(acc / static_cast<double>(sizes.size()))
        << "\n";
}

// Trains the angle encoder on the generated task and writes the model plus
// a per-epoch loss CSV.
inline model::TrainResult train_experiment(const ExperimentConfig& config,
                                           model::PqcModel& pqc) {
  config.validate();
  const data::DatasetSplit split = load_or_generate_data(config);
  std::vector<double> xs, ys;
  for (const auto& p : split.train) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  model::TrainOptions options;
  options.epochs = config.epochs;
  options.lr = config.lr;
  options.batch_size = config.batch_size;
  options.shuffle_seed = config.seed;
  options.threads = config.threads;
  return model::train(xs, ys, pqc.encoder, pqc.ansatz, pqc.grid, options);
}

inline void write_loss_csv(const std::string& path, const model::TrainResult& result,
                           std::uint64_t config_hash, std::uint64_t seed) {
  auto out = detail::open_out(path);
  char head[96];
  std::snprintf(head, sizeof(head), "# config_hash=%016llx\n# seed=%llu\n",
                static_cast<unsigned long long>(config_hash),
                static_cast<unsigned long long>(seed));
  out << head;
  out << "epoch,loss\n";
  for (std::size_t e = 0; e < result.loss_history.size(); ++e)
    out << (e + 1) << ',' << detail::fmt(result.loss_history[e]) << "\n";
}

inline model::PqcModel fresh_model(const ExperimentConfig& config) {
  model::PqcModel pqc;
  pqc.ansatz = model::AnsatzConfig{config.qubits, config.layers,
                                   model::entangler_from_name(config.entangler)};
  pqc.grid = model::GridMap{config.grid_lo, config.grid_hi, config.qubits};
  pqc.encoder = model::AngleEncoder::random_init(
      model::AngleEncoder::default_layer_sizes(pqc.ansatz.parameter_count()),
      config.seed);
  return pqc;
}

}  // namespace aqcp::harness
