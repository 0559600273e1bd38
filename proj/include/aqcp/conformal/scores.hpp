// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "aqcp/model/sampler.hpp"
#include "aqcp/util/rng.hpp"

namespace aqcp::conformal {

enum class ScoreVariant { Euc, Knn, Kde, Hdr };

inline const char* score_variant_name(ScoreVariant v) {
  switch (v) {
    case ScoreVariant::Euc: return "euc";
    case ScoreVariant::Knn: return "knn";
    case ScoreVariant::Kde: return "kde";
    case ScoreVariant::Hdr: return "hdr";
  }
  return "?";
}

inline ScoreVariant score_variant_from_name(const std::string& name) {
  if (name == "euc") return ScoreVariant::Euc;
  if (name == "knn") return ScoreVariant::Knn;
  if (name == "kde") return ScoreVariant::Kde;
  if (name == "hdr") return ScoreVariant::Hdr;
  throw std::invalid_argument("unknown score variant: " + name);
}

// Riemann grid for the HDR superlevel mass. When no fixed range is given
// the grid spans [domain_lo - 3h, domain_hi + 3h] at evaluation time.
struct HdrGridSpec {
  double domain_lo = -1.5;
  double domain_hi = 1.5;
  int points = 512;
  std::optional<std::pair<double, double>> fixed_range;
};

struct ScoreSpec {
  ScoreVariant variant = ScoreVariant::Euc;
  double tiebreak_sigma = 1e-4;
  std::optional<int> k_override;            // default: ceil(sqrt(M)), clamped to M
  std::optional<double> bandwidth_override; // default: Silverman
  HdrGridSpec hdr_grid;

  void validate() const {
    if (!(tiebreak_sigma > 0.0))
      throw std::invalid_argument("tiebreak sigma must be positive");
    if (hdr_grid.points < 64)
      throw std::invalid_argument("hdr grid needs at least 64 points");
  }
};

// h = 0.9 min(sigma_hat, IQR/1.34) M^{-1/5}, floored at 1e-4 so degenerate
// samples (all equal) still give a usable kernel width.
inline double silverman_bandwidth(std::span<const double> samples) {
  const std::size_t m = samples.size();
  if (m == 0) throw std::invalid_argument("silverman_bandwidth: empty sample set");
  double h = 0.0;
  if (m > 1) {
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= static_cast<double>(m);
    double ss = 0.0;
    for (double v : samples) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(m - 1));

    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    auto quantile = [&](double p) {
      const double idx = p * static_cast<double>(m - 1);
      const std::size_t lo = static_cast<std::size_t>(idx);
      const std::size_t hi = std::min(lo + 1, m - 1);
      const double frac = idx - static_cast<double>(lo);
      return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
    };
    const double iqr = quantile(0.75) - quantile(0.25);
    h = 0.9 * std::min(sd, iqr / 1.34) * std::pow(static_cast<double>(m), -0.2);
  }
  return std::max(h, 1e-4);
}

inline double gaussian_kernel(double u) {
  return std::exp(-0.5 * u * u) * 0.3989422804014326779;  // 1/sqrt(2 pi)
}

inline double kde_density(std::span<const double> samples, double bandwidth, double y) {
  if (samples.empty()) throw std::invalid_argument("kde_density: empty sample set");
  if (!(bandwidth > 0.0)) throw std::invalid_argument("kde_density: bandwidth must be > 0");
  double acc = 0.0;
  for (double s : samples) acc += gaussian_kernel((y - s) / bandwidth);
  return acc / (static_cast<double>(samples.size()) * bandwidth);
}

// Deterministic tie-break noise: N(0, sigma^2) keyed on (run seed, step,
// candidate value), so the same candidate scored twice in one step sees the
// same draw while distinct candidates get independent draws.
struct Tiebreak {
  std::uint64_t seed = 0;
  std::uint64_t step = 0;
  double sigma = 1e-4;

  double noise(double y) const {
    return sigma * util::keyed_gaussian(seed, step, std::bit_cast<std::uint64_t>(y));
  }
};

// Precomputed per-sample scorer. Construction sorts the samples and, for
// HDR, evaluates the kernel density on the Riemann grid once; raw_score is
// then cheap across many candidate labels.
class ScoreEngine {
 public:
  ScoreEngine(const ScoreSpec& spec, std::vector<double> samples)
      : spec_(spec), sorted_(std::move(samples)) {
    spec_.validate();
    if (sorted_.empty()) throw std::invalid_argument("score: empty shot multiset");
    std::sort(sorted_.begin(), sorted_.end());
    const std::size_t m = sorted_.size();
    mean_ = 0.0;
    for (double v : sorted_) mean_ += v;
    mean_ /= static_cast<double>(m);

    const int k_rule = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(m))));
    k_ = spec_.k_override ? *spec_.k_override : k_rule;
    k_ = std::max(1, std::min<int>(k_, static_cast<int>(m)));

    if (spec_.variant == ScoreVariant::Kde || spec_.variant == ScoreVariant::Hdr) {
      bandwidth_ = spec_.bandwidth_override ? *spec_.bandwidth_override
                                            : silverman_bandwidth(sorted_);
      if (spec_.variant == ScoreVariant::Hdr) prepare_hdr();
    }
  }

  ScoreEngine(const ScoreSpec& spec, const model::ShotMultiset& shots)
      : ScoreEngine(spec, shots.values()) {}

  const ScoreSpec& spec() const { return spec_; }
  double sample_mean() const { return mean_; }
  double bandwidth() const { return bandwidth_; }
  int k() const { return k_; }

  double density(double y) const { return kde_density(sorted_, bandwidth_, y); }

  double raw_score(double y) const {
    switch (spec_.variant) {
      case ScoreVariant::Euc:
        return std::abs(y - mean_);
      case ScoreVariant::Knn:
        return knn_distance(y);
      case ScoreVariant::Kde:
        return -density(y);
      case ScoreVariant::Hdr:
        return hdr_mass_above(density(y));
    }
    return 0.0;
  }

  double score(double y, const Tiebreak& tiebreak) const {
    return raw_score(y) + tiebreak.noise(y);
  }

 private:
  // k-th smallest |y - sample|, expanding outward from the insertion point.
  double knn_distance(double y) const {
    const auto begin = sorted_.begin();
    const auto end = sorted_.end();
    auto right = std::lower_bound(begin, end, y);
    auto left = right;
    double d = 0.0;
    for (int taken = 0; taken < k_; ++taken) {
      const double dl = left == begin ? std::numeric_limits<double>::infinity()
                                      : y - *(left - 1);
      const double dr = right == end ? std::numeric_limits<double>::infinity()
                                     : *right - y;
      if (dl <= dr) {
        d = dl;
        --left;
      } else {
        d = dr;
        ++right;
      }
    }
    return d;
  }

  void prepare_hdr() {
    double lo, hi;
    if (spec_.hdr_grid.fixed_range) {
      lo = spec_.hdr_grid.fixed_range->first;
      hi = spec_.hdr_grid.fixed_range->second;
    } else {
      lo = spec_.hdr_grid.domain_lo - 3.0 * bandwidth_;
      hi = spec_.hdr_grid.domain_hi + 3.0 * bandwidth_;
    }
    const int points = spec_.hdr_grid.points;
    hdr_step_ = (hi - lo) / (points - 1);
    std::vector<double> densities(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
      densities[static_cast<std::size_t>(i)] = density(lo + hdr_step_ * i);
    std::sort(densities.begin(), densities.end(), std::greater<>());
    hdr_sorted_desc_ = std::move(densities);
    hdr_mass_prefix_.assign(hdr_sorted_desc_.size() + 1, 0.0);
    for (std::size_t i = 0; i < hdr_sorted_desc_.size(); ++i)
      hdr_mass_prefix_[i + 1] = hdr_mass_prefix_[i] + hdr_sorted_desc_[i] * hdr_step_;
  }

  // Riemann mass of { y' : p_hat(y') > p_hat(y) } over the prepared grid.
  double hdr_mass_above(double density_at_y) const {
    const auto it = std::lower_bound(hdr_sorted_desc_.begin(), hdr_sorted_desc_.end(),
                                     density_at_y, std::greater<>());
    const std::size_t count =
        static_cast<std::size_t>(it - hdr_sorted_desc_.begin());
    return hdr_mass_prefix_[count];
  }

  ScoreSpec spec_;
  std::vector<double> sorted_;
  double mean_ = 0.0;
  int k_ = 1;
  double bandwidth_ = 0.0;
  double hdr_step_ = 0.0;
  std::vector<double> hdr_sorted_desc_;
  std::vector<double> hdr_mass_prefix_;
};

// Conformity score of candidate y given the sampled output distribution.
// x is part of the contract but every variant here depends on it only
// through the shots.
inline double score(const ScoreSpec& spec, [[maybe_unused]] double x, double y,
                    const model::ShotMultiset& shots, const Tiebreak& tiebreak) {
  return ScoreEngine(spec, shots).score(y, tiebreak);
}

inline double score(const ScoreSpec& spec, [[maybe_unused]] double x, double y,
                    const model::ShotMultiset& shots, util::Rng& rng) {
  return ScoreEngine(spec, shots).raw_score(y) + spec.tiebreak_sigma * rng.normal();
}

}  // namespace aqcp::conformal
