// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "aqcp/conformal/prediction_set.hpp"
#include "aqcp/conformal/quantile.hpp"
#include "aqcp/conformal/scores.hpp"
#include "aqcp/data/dataset.hpp"

namespace aqcp::conformal {

// Deterministic bound on |avg err - alpha1| over N online steps:
// (max{alpha1, 1-alpha1} + gamma) / (N gamma).
inline double coverage_bound(double alpha1, double gamma, long n) {
  if (!(gamma > 0.0)) throw std::invalid_argument("coverage_bound: gamma must be > 0");
  if (n < 1) throw std::invalid_argument("coverage_bound: N must be >= 1");
  return (std::max(alpha1, 1.0 - alpha1) + gamma) /
         (static_cast<double>(n) * gamma);
}

// Online state: the growing calibration ledger plus the adapted miscoverage
// level. alpha_t is confined to [-gamma, 1+gamma]. The ledger grows without
// bound by default; max_ledger > 0 evicts the oldest scores instead.
struct AqcpState {
  double alpha_target = 0.1;
  double alpha_t = 0.1;
  double gamma = 0.03;
  std::vector<double> scores;
  std::vector<std::uint8_t> err_history;
  long t_index = 0;
  std::size_t n_initial = 0;
  std::size_t max_ledger = 0;  // 0 = unbounded
  std::uint64_t tiebreak_seed = 0;

  static AqcpState initial(double alpha, double gamma, std::vector<double> cal_scores,
                           std::uint64_t tiebreak_seed = 0) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
      throw std::invalid_argument("alpha must lie in [0, 1]");
    if (gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
    AqcpState s;
    s.alpha_target = alpha;
    s.alpha_t = alpha;
    s.gamma = gamma;
    s.n_initial = cal_scores.size();
    s.scores = std::move(cal_scores);
    s.tiebreak_seed = tiebreak_seed;
    return s;
  }

  void check_invariants() const {
    if (alpha_t < -gamma - 1e-12 || alpha_t > 1.0 + gamma + 1e-12)
      throw std::runtime_error("aqcp: alpha_t left [-gamma, 1+gamma]");
    std::size_t expected = n_initial + static_cast<std::size_t>(t_index);
    if (max_ledger > 0) expected = std::min(expected, max_ledger);
    if (scores.size() != expected)
      throw std::runtime_error("aqcp: score ledger size mismatch");
  }
};

inline double current_threshold(const AqcpState& state) {
  return calibration_threshold(state.scores, state.alpha_t);
}

// Records the outcome of one step: err compares the true score against
// lambda, alpha moves by gamma*(alpha1 - err), and the score joins the
// ledger.
inline int aqcp_observe(AqcpState& state, double true_score, double lambda) {
  const int err = true_score > lambda ? 1 : 0;
  state.alpha_t += state.gamma * (state.alpha_target - err);
  state.scores.push_back(true_score);
  if (state.max_ledger > 0 && state.scores.size() > state.max_ledger)
    state.scores.erase(state.scores.begin());
  state.err_history.push_back(static_cast<std::uint8_t>(err));
  ++state.t_index;
  state.check_invariants();
  return err;
}

struct StepOutcome {
  PredictionSet set;
  double lambda = 0.0;
  int err = 0;
  double alpha_used = 0.0;
  double true_score = 0.0;
};

// One online step against a prepared score engine (shared by the candidate
// sweep and the true-label score).
inline StepOutcome aqcp_step(AqcpState& state, const ScoreEngine& engine, double y_true,
                             const CandidateGrid& grid) {
  StepOutcome out;
  out.alpha_used = state.alpha_t;
  out.lambda = current_threshold(state);
  const Tiebreak tiebreak{state.tiebreak_seed,
                          state.n_initial + static_cast<std::size_t>(state.t_index),
                          engine.spec().tiebreak_sigma};
  out.set = generate_prediction_set(engine, out.lambda, grid, tiebreak);
  out.true_score = engine.score(y_true, tiebreak);
  out.err = aqcp_observe(state, out.true_score, out.lambda);
  return out;
}

inline StepOutcome aqcp_step(AqcpState& state, double x, double y_true,
                             const model::ShotMultiset& shots, const ScoreSpec& spec,
                             const CandidateGrid& grid) {
  (void)x;  // scores depend on x only through the shots
  return aqcp_step(state, ScoreEngine(spec, shots), y_true, grid);
}

struct StepRecord {
  long step = 0;          // 1-based test index
  double alpha_t = 0.0;   // level used for this step's set
  int err = 0;
  int covered = 0;
  double set_size = 0.0;
  double lambda = 0.0;
};

using ShotSource = std::function<model::ShotMultiset(long sample_index, double x)>;

struct AqcpRunResult {
  std::vector<StepRecord> records;
  AqcpState final_state;

  double average_error() const {
    if (records.empty()) return 0.0;
    double s = 0.0;
    for (const auto& r : records) s += r.err;
    return s / static_cast<double>(records.size());
  }

  double average_set_size() const {
    if (records.empty()) return 0.0;
    double s = 0.0;
    for (const auto& r : records) s += r.set_size;
    return s / static_cast<double>(records.size());
  }
};

// Full online loop: calibrate on the initial set, then process the labelled
// test stream sequentially. Shot collection is delegated so simulator and
// file-replay sources share this path.
inline AqcpRunResult run_aqcp(std::span<const data::LabelledPoint> calibration,
                              std::span<const data::LabelledPoint> test_stream,
                              const ScoreSpec& spec, double gamma, double alpha,
                              const ShotSource& shots_for, const CandidateGrid& grid,
                              std::uint64_t tiebreak_seed = 0) {
  if (calibration.empty())
    throw std::invalid_argument("run_aqcp: calibration set must be nonempty");
  spec.validate();
  grid.validate();

  std::vector<double> cal_scores;
  cal_scores.reserve(calibration.size());
  for (std::size_t i = 0; i < calibration.size(); ++i) {
    const auto& point = calibration[i];
    const model::ShotMultiset shots = shots_for(static_cast<long>(i), point.x);
    const Tiebreak tiebreak{tiebreak_seed, i, spec.tiebreak_sigma};
    cal_scores.push_back(score(spec, point.x, point.y, shots, tiebreak));
  }

  AqcpState state = AqcpState::initial(alpha, gamma, std::move(cal_scores), tiebreak_seed);
  AqcpRunResult result;
  result.records.reserve(test_stream.size());
  for (std::size_t j = 0; j < test_stream.size(); ++j) {
    const auto& point = test_stream[j];
    const long index = static_cast<long>(calibration.size() + j);
    const model::ShotMultiset shots = shots_for(index, point.x);
    const StepOutcome out = aqcp_step(state, point.x, point.y, shots, spec, grid);
    result.records.push_back({static_cast<long>(j + 1), out.alpha_used, out.err,
                              1 - out.err, out.set.size_measure(), out.lambda});
  }
  result.final_state = std::move(state);
  return result;
}

// Same update dynamics driven by an externally supplied score stream; used
// to exercise the deterministic bound on synthetic and adversarial inputs.
inline AqcpRunResult run_aqcp_on_scores(std::vector<double> initial_scores,
                                        const std::function<double(long)>& score_at,
                                        long steps, double alpha, double gamma) {
  if (initial_scores.empty())
    throw std::invalid_argument("run_aqcp_on_scores: calibration scores required");
  AqcpState state = AqcpState::initial(alpha, gamma, std::move(initial_scores));
  AqcpRunResult result;
  result.records.reserve(static_cast<std::size_t>(steps));
  for (long i = 0; i < steps; ++i) {
    const double lambda = current_threshold(state);
    const double alpha_used = state.alpha_t;
    const int err = aqcp_observe(state, score_at(i), lambda);
    result.records.push_back({i + 1, alpha_used, err, 1 - err, 0.0, lambda});
  }
  result.final_state = std::move(state);
  return result;
}

}  // namespace aqcp::conformal
