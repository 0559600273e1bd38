// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "aqcp/conformal/quantile.hpp"
#include "aqcp/conformal/scores.hpp"

namespace aqcp::conformal {

// Uniform candidate label grid over the target interval.
struct CandidateGrid {
  double lo = -1.5;
  double hi = 1.5;
  int points = 301;

  void validate() const {
    if (points < 2 || !(hi > lo))
      throw std::invalid_argument("candidate grid needs hi > lo and >= 2 points");
  }

  double spacing() const { return (hi - lo) / (points - 1); }
  double point(int i) const { return lo + spacing() * i; }

  int nearest_index(double y) const {
    const double idx = std::round((y - lo) / spacing());
    if (idx < 0.0) return 0;
    if (idx > points - 1) return points - 1;
    return static_cast<int>(idx);
  }
};

// Grid mask with size reported as a length (count times spacing).
struct PredictionSet {
  CandidateGrid grid;
  std::vector<char> mask;

  int count() const {
    int c = 0;
    for (char m : mask) c += m != 0;
    return c;
  }

  double size_measure() const { return count() * grid.spacing(); }
  bool contains(double y) const {
    return mask[static_cast<std::size_t>(grid.nearest_index(y))] != 0;
  }
};

// Keeps every candidate whose score is at most lambda. One tie-break stream
// covers the whole call.
inline PredictionSet generate_prediction_set(const ScoreEngine& engine, double lambda,
                                             const CandidateGrid& grid,
                                             const Tiebreak& tiebreak) {
  grid.validate();
  PredictionSet set;
  set.grid = grid;
  set.mask.resize(static_cast<std::size_t>(grid.points));
  for (int i = 0; i < grid.points; ++i)
    set.mask[static_cast<std::size_t>(i)] = engine.score(grid.point(i), tiebreak) <= lambda;
  return set;
}

inline PredictionSet generate_prediction_set(const ScoreSpec& spec,
                                             [[maybe_unused]] double x, double lambda,
                                             const model::ShotMultiset& shots,
                                             const CandidateGrid& grid,
                                             const Tiebreak& tiebreak) {
  return generate_prediction_set(ScoreEngine(spec, shots), lambda, grid, tiebreak);
}

// Non-exchangeable split-CP set: threshold from the weighted quantile with
// the +infinity test atom, then the usual level-set construction.
inline PredictionSet weighted_prediction_set(std::span<const double> calibration_scores,
                                             const WeightVector& weights, double x,
                                             const model::ShotMultiset& shots,
                                             const ScoreSpec& spec, double alpha,
                                             const CandidateGrid& grid,
                                             const Tiebreak& tiebreak) {
  const double lambda = weighted_threshold(calibration_scores, weights, alpha);
  return generate_prediction_set(spec, x, lambda, shots, grid, tiebreak);
}

}  // namespace aqcp::conformal
