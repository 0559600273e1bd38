// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "aqcp/qsim/channel.hpp"
#include "aqcp/util/rng.hpp"

namespace aqcp::qsim {

// Time -> channel-parameter map. Four primitive shapes plus a burst overlay
// that replaces the base value inside burst windows (used for drifting
// schedules with sporadic error spikes).
class ParamFn {
 public:
  static ParamFn constant(double p) {
    ParamFn f(Kind::Constant);
    f.a_ = p;
    return f;
  }

  static ParamFn linear_drift(double p0, double p1, double t_end) {
    if (t_end <= 0.0) throw std::invalid_argument("linear_drift: t_end must be > 0");
    ParamFn f(Kind::LinearDrift);
    f.a_ = p0;
    f.b_ = p1;
    f.c_ = t_end;
    return f;
  }

  static ParamFn sinusoid(double p_mean, double p_amp, double period) {
    if (period <= 0.0) throw std::invalid_argument("sinusoid: period must be > 0");
    if (p_amp < 0.0) throw std::invalid_argument("sinusoid: amplitude must be >= 0");
    ParamFn f(Kind::Sinusoid);
    f.a_ = p_mean;
    f.b_ = p_amp;
    f.c_ = period;
    return f;
  }

  static ParamFn burst(double p_base, double p_burst, std::vector<double> burst_times,
                       double burst_width) {
    ParamFn f = burst_overlay(constant(p_base), p_burst, std::move(burst_times), burst_width);
    return f;
  }

  static ParamFn burst_overlay(ParamFn base, double p_burst,
                               std::vector<double> burst_times, double burst_width) {
    if (burst_width <= 0.0) throw std::invalid_argument("burst: width must be > 0");
    ParamFn f(Kind::Burst);
    f.base_ = std::make_shared<ParamFn>(std::move(base));
    f.a_ = p_burst;
    f.c_ = burst_width;
    f.times_ = std::move(burst_times);
    return f;
  }

  double at(double t) const {
    switch (kind_) {
      case Kind::Constant:
        return a_;
      case Kind::LinearDrift: {
        const double frac = std::min(std::max(t / c_, 0.0), 1.0);
        return a_ + (b_ - a_) * frac;
      }
      case Kind::Sinusoid:
        return a_ + b_ * std::sin(util::kTwoPi * t / c_);
      case Kind::Burst: {
        for (double tb : times_)
          if (std::abs(t - tb) <= 0.5 * c_) return a_;
        return base_->at(t);
      }
    }
    return a_;
  }

  // Validates that every reachable value lies in [lo, hi]. Exact for all
  // shapes (extremes occur at endpoints / burst levels).
  void validate_range(double lo, double hi) const {
    auto check = [&](double v) {
      if (v < lo || v > hi)
        throw std::invalid_argument("noise parameter out of valid range");
    };
    switch (kind_) {
      case Kind::Constant:
        check(a_);
        break;
      case Kind::LinearDrift:
        check(a_);
        check(b_);
        break;
      case Kind::Sinusoid:
        check(a_ - b_);
        check(a_ + b_);
        break;
      case Kind::Burst:
        check(a_);
        base_->validate_range(lo, hi);
        break;
    }
  }

 private:
  enum class Kind { Constant, LinearDrift, Sinusoid, Burst };
  explicit ParamFn(Kind k) : kind_(k) {}

  Kind kind_;
  double a_ = 0.0, b_ = 0.0, c_ = 0.0;
  std::vector<double> times_;
  std::shared_ptr<const ParamFn> base_;
};

// Channel parameters and readout flip probability as functions of the shot
// timestamp. One schedule instance drives a whole experiment stream.
struct NoiseSchedule {
  ChannelFamily family = ChannelFamily::Depolarising;
  ParamFn param = ParamFn::constant(0.0);
  bool applies_after_each_gate = true;
  ParamFn readout_flip = ParamFn::constant(0.0);

  NoiseSchedule() { validate(); }
  NoiseSchedule(ChannelFamily f, ParamFn p, ParamFn readout = ParamFn::constant(0.0),
                bool after_each_gate = true)
      : family(f), param(std::move(p)), applies_after_each_gate(after_each_gate),
        readout_flip(std::move(readout)) {
    validate();
  }

  void validate() const {
    param.validate_range(0.0, 1.0);
    readout_flip.validate_range(0.0, 1.0);
  }

  KrausChannel channel_at(double t) const { return make_channel(family, param.at(t)); }
  double readout_at(double t) const { return readout_flip.at(t); }
};

}  // namespace aqcp::qsim
