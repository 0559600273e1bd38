// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace aqcp::conformal {

namespace detail {

inline double kth_smallest(std::span<const double> values, std::size_t k) {
  std::vector<double> copy(values.begin(), values.end());
  std::nth_element(copy.begin(), copy.begin() + static_cast<std::ptrdiff_t>(k - 1),
                   copy.end());
  return copy[k - 1];
}

}  // namespace detail

// Empirical quantile over a finite score multiset:
//   inf { q : (1/|S|) sum_i 1{s_i <= q} >= 1 - alpha }.
// alpha may leave [0,1] during adaptation; levels above 1 yield +inf
// (nothing qualifies), levels at or below 0 yield -inf.
inline double get_quantile(std::span<const double> scores, double alpha) {
  if (scores.empty()) throw std::invalid_argument("get_quantile: empty score multiset");
  const double level = 1.0 - alpha;
  if (level <= 0.0) return -std::numeric_limits<double>::infinity();
  if (level > 1.0) return std::numeric_limits<double>::infinity();
  const auto n = static_cast<double>(scores.size());
  const auto k = static_cast<std::size_t>(std::ceil(n * level));
  return detail::kth_smallest(scores, std::max<std::size_t>(k, 1));
}

// Split-CP threshold: the ceil((n+1)(1-alpha))-th smallest value of the
// calibration scores with a +infinity atom appended. This is the quantile
// actually used when generating prediction sets.
inline double calibration_threshold(std::span<const double> scores, double alpha) {
  if (scores.empty())
    throw std::invalid_argument("calibration_threshold: empty score multiset");
  const double level = 1.0 - alpha;
  if (level <= 0.0) return -std::numeric_limits<double>::infinity();
  const auto n = scores.size();
  const auto rank =
      static_cast<std::size_t>(std::ceil(static_cast<double>(n + 1) * level));
  if (rank > n) return std::numeric_limits<double>::infinity();
  return detail::kth_smallest(scores, std::max<std::size_t>(rank, 1));
}

// Per-point weights in [0,1]; normalised so the calibration masses plus the
// +infinity test mass sum to one.
struct WeightVector {
  std::vector<double> raw;

  struct Normalised {
    std::vector<double> calibration;
    double test_mass = 0.0;
  };

  void validate() const {
    for (double w : raw)
      if (!(w >= 0.0 && w <= 1.0))
        throw std::invalid_argument("weights must lie in [0, 1]");
  }

  Normalised normalised() const {
    validate();
    const double total = std::accumulate(raw.begin(), raw.end(), 0.0) + 1.0;
    Normalised out;
    out.calibration.reserve(raw.size());
    for (double w : raw) out.calibration.push_back(w / total);
    out.test_mass = 1.0 / total;
    return out;
  }
};

// Quantile(1-alpha) of sum_i w~_i delta_{s_i} + w~_{n+1} delta_{+inf}.
// Returns +inf when the finite atoms cannot reach the level.
inline double weighted_threshold(std::span<const double> scores,
                                 const WeightVector& weights, double alpha) {
  if (scores.size() != weights.raw.size())
    throw std::invalid_argument("weighted_threshold: weights/scores length mismatch");
  const double level = 1.0 - alpha;
  if (level <= 0.0) return -std::numeric_limits<double>::infinity();
  const auto norm = weights.normalised();

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Slack absorbs accumulation rounding so exact-mass levels (for example
  // equal weights at integer ranks) resolve the same way as exact arithmetic.
  constexpr double kMassSlack = 1e-12;
  double cumulative = 0.0;
  for (std::size_t idx : order) {
    cumulative += norm.calibration[idx];
    if (cumulative >= level - kMassSlack) return scores[idx];
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace aqcp::conformal
