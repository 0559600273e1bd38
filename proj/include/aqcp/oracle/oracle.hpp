// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "aqcp/conformal/prediction_set.hpp"

namespace aqcp::oracle {

inline double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) * 0.3989422804014326779;
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z * M_SQRT1_2); }

// Synthetic task: Y | X=x ~ 1/2 N(-mu(x), sigma^2) + 1/2 N(mu(x), sigma^2)
// with mu(x) = sin(4x/5)/2 + x/20.
struct TaskDensity {
  double sigma = 0.05;

  double mu(double x) const { return 0.5 * std::sin(0.8 * x) + x / 20.0; }

  double density(double x, double y) const {
    const double m = mu(x);
    return 0.5 * (normal_pdf((y + m) / sigma) + normal_pdf((y - m) / sigma)) / sigma;
  }

  // Closed-form conditional mass of [a, b]; the independent cross-check for
  // the quadrature-based superlevel masses.
  double interval_mass(double x, double a, double b) const {
    const double m = mu(x);
    return 0.5 * (normal_cdf((b + m) / sigma) - normal_cdf((a + m) / sigma)) +
           0.5 * (normal_cdf((b - m) / sigma) - normal_cdf((a - m) / sigma));
  }
};

inline double true_density(const TaskDensity& task, double x, double y) {
  return task.density(x, y);
}

// ---------------------------------------------------------------------------
// Numeric machinery: composite trapezoid plus superlevel-set extraction with
// root-refined interval endpoints.
// ---------------------------------------------------------------------------

inline constexpr int kQuadraturePoints = 4096;
inline constexpr double kOracleDomainLo = -2.0;
inline constexpr double kOracleDomainHi = 2.0;

inline double trapezoid(const std::function<double(double)>& f, double a, double b,
                        int points = kQuadraturePoints) {
  if (points < 2) throw std::invalid_argument("trapezoid: need at least 2 points");
  if (!(b > a)) return 0.0;
  const double h = (b - a) / (points - 1);
  double acc = 0.5 * (f(a) + f(b));
  for (int i = 1; i + 1 < points; ++i) acc += f(a + h * i);
  return acc * h;
}

// Maximal intervals of {y in [a,b] : f(y) >= level}; crossings located by a
// scan and tightened by bisection. Bumps narrower than one scan cell are
// recovered by lifting discrete local maxima to the true peak first.
inline std::vector<std::pair<double, double>> superlevel_intervals(
    const std::function<double(double)>& f, double level, double a, double b,
    int scan_points = kQuadraturePoints) {
  const double h = (b - a) / (scan_points - 1);
  auto above = [&](double y) { return f(y) >= level; };
  auto refine = [&](double lo, double hi) {
    // invariant: above(lo) != above(hi)
    for (int i = 0; i < 80; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (above(mid) == above(lo))
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  };

  std::vector<double> ys(static_cast<std::size_t>(scan_points));
  std::vector<double> fs(static_cast<std::size_t>(scan_points));
  for (int i = 0; i < scan_points; ++i) {
    ys[static_cast<std::size_t>(i)] = (i + 1 == scan_points) ? b : a + h * i;
    fs[static_cast<std::size_t>(i)] = f(ys[static_cast<std::size_t>(i)]);
  }

  std::vector<std::pair<double, double>> intervals;
  bool open = fs[0] >= level;
  double start = a;
  for (int i = 1; i < scan_points; ++i) {
    const bool now = fs[static_cast<std::size_t>(i)] >= level;
    if (now && !open) {
      start = refine(ys[static_cast<std::size_t>(i - 1)], ys[static_cast<std::size_t>(i)]);
      open = true;
    } else if (!now && open) {
      intervals.emplace_back(
          start, refine(ys[static_cast<std::size_t>(i - 1)], ys[static_cast<std::size_t>(i)]));
      open = false;
    }
  }
  if (open) intervals.emplace_back(start, b);

  // Sub-cell bumps: a discrete local maximum below the level may hide a true
  // peak above it. Locate the peak by ternary search and refine both flanks.
  for (int i = 1; i + 1 < scan_points; ++i) {
    const double fi = fs[static_cast<std::size_t>(i)];
    if (fi >= level) continue;
    if (fi < fs[static_cast<std::size_t>(i - 1)] || fi < fs[static_cast<std::size_t>(i + 1)])
      continue;
    double lo = ys[static_cast<std::size_t>(i - 1)], hi = ys[static_cast<std::size_t>(i + 1)];
    for (int it = 0; it < 100; ++it) {
      const double m1 = lo + (hi - lo) / 3.0;
      const double m2 = hi - (hi - lo) / 3.0;
      if (f(m1) < f(m2))
        lo = m1;
      else
        hi = m2;
    }
    const double peak = 0.5 * (lo + hi);
    if (f(peak) < level) continue;
    intervals.emplace_back(refine(ys[static_cast<std::size_t>(i - 1)], peak),
                           refine(peak, ys[static_cast<std::size_t>(i + 1)]));
  }
  std::sort(intervals.begin(), intervals.end());
  return intervals;
}

inline double superlevel_mass(const std::function<double(double)>& f, double level,
                              double a, double b, int scan_points = kQuadraturePoints) {
  double mass = 0.0;
  for (const auto& [lo, hi] : superlevel_intervals(f, level, a, b, scan_points))
    mass += trapezoid(f, lo, hi);
  return mass;
}

// ---------------------------------------------------------------------------
// Optimal prediction sets: highest-density regions of the true conditional.
// ---------------------------------------------------------------------------

struct OracleSet {
  std::vector<std::pair<double, double>> intervals;
  double threshold = 0.0;
  double mass = 0.0;

  double total_length() const {
    double len = 0.0;
    for (const auto& [lo, hi] : intervals) len += hi - lo;
    return len;
  }

  bool contains(double y) const {
    for (const auto& [lo, hi] : intervals)
      if (y >= lo && y <= hi) return true;
    return false;
  }

  // Same count-times-spacing measure as sampled prediction sets.
  conformal::PredictionSet to_grid_set(const conformal::CandidateGrid& grid) const {
    conformal::PredictionSet set;
    set.grid = grid;
    set.mask.resize(static_cast<std::size_t>(grid.points));
    for (int i = 0; i < grid.points; ++i)
      set.mask[static_cast<std::size_t>(i)] = contains(grid.point(i));
    return set;
  }
};

// Smallest set with conditional mass 1-alpha: bisection on the density
// threshold, mass evaluated by interval-refined trapezoid quadrature.
inline OracleSet optimal_set(const TaskDensity& task, double x, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("optimal_set: alpha must lie in (0, 1)");
  const auto f = [&](double y) { return task.density(x, y); };
  const double target = 1.0 - alpha;

  // true density maximum: discrete argmax lifted by ternary search, so the
  // bisection bracket [0, peak] always contains the target mass
  const double h = (kOracleDomainHi - kOracleDomainLo) / (kQuadraturePoints - 1);
  double arg_peak = kOracleDomainLo;
  double peak = f(arg_peak);
  for (int i = 1; i < kQuadraturePoints; ++i) {
    const double y = kOracleDomainLo + h * i;
    const double fy = f(y);
    if (fy > peak) {
      peak = fy;
      arg_peak = y;
    }
  }
  {
    double lo = arg_peak - h, hi = arg_peak + h;
    for (int it = 0; it < 200; ++it) {
      const double m1 = lo + (hi - lo) / 3.0;
      const double m2 = hi - (hi - lo) / 3.0;
      if (f(m1) < f(m2))
        lo = m1;
      else
        hi = m2;
    }
    peak = std::max(peak, f(0.5 * (lo + hi)));
  }

  double lo = 0.0, hi = peak;
  double mid = 0.0, mass = 0.0;
  bool converged = false;
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    mass = superlevel_mass(f, mid, kOracleDomainLo, kOracleDomainHi);
    if (std::abs(mass - target) <= 1e-10) {
      converged = true;
      break;
    }
    if (mass > target)
      lo = mid;
    else
      hi = mid;
  }
  if (!converged)
    throw std::runtime_error("optimal_set: threshold bisection did not converge");

  OracleSet set;
  set.threshold = mid;
  set.mass = mass;
  set.intervals = superlevel_intervals(f, mid, kOracleDomainLo, kOracleDomainHi);
  return set;
}

// ---------------------------------------------------------------------------
// Score-theory checks.
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= n;
  mb /= n;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (va == 0.0 || vb == 0.0) return 1.0;  // all tied: vacuously monotone
  return cov / std::sqrt(va * vb);
}

}  // namespace detail

// True when ranking candidates by distance-to-mean reproduces the ranking by
// negative density, i.e. the Euclidean score's level sets coincide with the
// density's. Holds for symmetric unimodal models, fails for separated
// mixtures. Candidates carrying less than 1e-12 of the peak density are
// left out of the comparison: their values underflow into ties that say
// nothing about the level sets.
inline bool check_s1_equivalence(const std::function<double(double)>& density,
                                 double lo, double hi, int points = 401) {
  std::vector<double> ys, ps;
  ys.reserve(static_cast<std::size_t>(points));
  ps.reserve(static_cast<std::size_t>(points));
  const double step = (hi - lo) / (points - 1);
  double mass = 0.0, mean = 0.0, peak = 0.0;
  for (int i = 0; i < points; ++i) {
    const double y = lo + step * i;
    const double p = density(y);
    ys.push_back(y);
    ps.push_back(p);
    peak = std::max(peak, p);
    mass += p;
    mean += y * p;
  }
  mean /= mass;
  std::vector<double> euc, neg_density;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (ps[i] < 1e-12 * peak) continue;
    euc.push_back(std::abs(ys[i] - mean));
    neg_density.push_back(-ps[i]);
  }
  // 1e-3 absorbs rank noise from floating-point tie splitting around exact
  // symmetry; genuine multimodality costs orders of magnitude more
  return detail::spearman(euc, neg_density) >= 1.0 - 1e-3;
}

// |(2 Phi(|y-mu|/sigma) - 1) - numeric superlevel mass| for a Gaussian
// conditional; the closed form and the quadrature must agree.
inline double check_s2_gaussian_residual(double mu, double sigma, double y) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  const double closed = 2.0 * normal_cdf(std::abs(y - mu) / sigma) - 1.0;
  const auto f = [&](double v) { return normal_pdf((v - mu) / sigma) / sigma; };
  const double numeric =
      superlevel_mass(f, f(y), mu - 8.0 * sigma, mu + 8.0 * sigma);
  return std::abs(closed - numeric);
}

// k/(2 M d_k): the k-NN density estimate the kNN score is a proxy for.
inline double brute_force_knn_density(std::vector<double> samples, double y, int k) {
  const int m = static_cast<int>(samples.size());
  if (k < 1 || k > m) throw std::invalid_argument("knn density: k must lie in [1, M]");
  for (double& s : samples) s = std::abs(s - y);
  std::nth_element(samples.begin(), samples.begin() + (k - 1), samples.end());
  const double dk = samples[static_cast<std::size_t>(k - 1)];
  if (dk == 0.0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(k) / (2.0 * static_cast<double>(m) * dk);
}

}  // namespace aqcp::oracle
