// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "aqcp/model/ansatz.hpp"
#include "aqcp/model/encoder.hpp"
#include "aqcp/model/grid.hpp"
#include "aqcp/qsim/circuit.hpp"
#include "aqcp/util/rng.hpp"

namespace aqcp::model {

struct ShotRecord {
  double t = 0.0;      // seconds
  int bitstring = 0;   // denary value, qubit 0 = MSB
  double y = 0.0;      // f(bitstring)
};

// Timestamped measurement samples for one input x. Duplicates are expected
// and counted.
struct ShotMultiset {
  double x = 0.0;
  std::vector<ShotRecord> records;

  std::vector<double> values() const {
    std::vector<double> v;
    v.reserve(records.size());
    for (const auto& r : records) v.push_back(r.y);
    return v;
  }
};

// Shot m of a batch executes at t0 + m*dt; batches are separated by a gap.
class ShotClock {
 public:
  explicit ShotClock(double t0 = 0.0, double dt_shot = 1e-3, double batch_gap = 0.1)
      : t_(t0), dt_shot_(dt_shot), batch_gap_(batch_gap) {
    if (dt_shot < 0.0 || batch_gap < 0.0)
      throw std::invalid_argument("clock increments must be nonnegative");
  }

  double next_shot() {
    const double t = t_;
    t_ += dt_shot_;
    return t;
  }

  void end_batch() { t_ += batch_gap_; }
  double now() const { return t_; }

 private:
  double t_;
  double dt_shot_;
  double batch_gap_;
};

struct PqcModel {
  AngleEncoder encoder;
  AnsatzConfig ansatz;
  GridMap grid;

  void validate() const {
    if (encoder.output_size() != ansatz.parameter_count())
      throw std::invalid_argument("encoder output size must equal 3*L*Q");
    if (grid.num_qubits != ansatz.num_qubits)
      throw std::invalid_argument("grid and ansatz qubit counts must match");
  }
};

// DensityExact runs the full density-matrix simulation per distinct channel
// parameter value and samples from the exact outcome distribution.
// Trajectory samples one Kraus branch per channel application on a
// statevector; each shot is an exact draw from the same distribution at a
// fraction of the cost, which matters for schedules that drift between
// consecutive shots.
enum class SamplerMode { DensityExact, Trajectory };

inline SamplerMode sampler_mode_from_name(const std::string& name) {
  if (name == "density") return SamplerMode::DensityExact;
  if (name == "trajectory") return SamplerMode::Trajectory;
  throw std::invalid_argument("unknown sampler mode: " + name);
}

namespace detail {

inline int sample_index(const std::vector<double>& probs, util::Rng& rng) {
  double u = rng.uniform();
  for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
    u -= probs[i];
    if (u < 0.0) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size()) - 1;
}

// One noisy-circuit trajectory: Kraus branches are sampled with their Born
// weights, so the marginal over branches equals the channel action.
inline int run_trajectory(const qsim::Circuit& circuit, int num_qubits,
                          const qsim::KrausChannel& channel, double readout_q,
                          util::Rng& rng) {
  using qsim::Complex;
  qsim::StateVector psi(num_qubits);
  const std::size_t num_ops = channel.operators.size();
  std::vector<double> branch_weights(num_ops);
  for (const qsim::Gate& g : circuit) {
    psi = qsim::apply_gate(psi, g);
    for (int q : g.targets) {
      const int stride = qsim::bit_stride(q, num_qubits);
      Complex* a = psi.amplitudes().data();
      const int d = psi.dim();
      if (num_ops > 1) {
        for (std::size_t k = 0; k < num_ops; ++k) {
          const auto& e = channel.operators[k];
          double w = 0.0;
          for (int base = 0; base < d; base += 2 * stride)
            for (int i = base; i < base + stride; ++i) {
              w += std::norm(e(0, 0) * a[i] + e(0, 1) * a[i + stride]);
              w += std::norm(e(1, 0) * a[i] + e(1, 1) * a[i + stride]);
            }
          branch_weights[k] = w;
        }
        const std::size_t pick =
            static_cast<std::size_t>(rng.categorical(branch_weights));
        const auto& e = channel.operators[pick];
        const double scale = 1.0 / std::sqrt(branch_weights[pick]);
        for (int base = 0; base < d; base += 2 * stride)
          for (int i = base; i < base + stride; ++i) {
            const Complex a0 = a[i];
            const Complex a1 = a[i + stride];
            a[i] = scale * (e(0, 0) * a0 + e(0, 1) * a1);
            a[i + stride] = scale * (e(1, 0) * a0 + e(1, 1) * a1);
          }
      }
    }
  }
  int outcome = sample_index(psi.probabilities(), rng);
  if (readout_q > 0.0) {
    for (int q = 0; q < num_qubits; ++q)
      if (rng.uniform() < readout_q) outcome ^= qsim::bit_stride(q, num_qubits);
  }
  return outcome;
}

}  // namespace detail

class ShotSampler {
 public:
  ShotSampler(const PqcModel& model, qsim::NoiseSchedule schedule,
              SamplerMode mode = SamplerMode::DensityExact)
      : model_(&model), schedule_(std::move(schedule)), mode_(mode) {
    model.validate();
  }

  const qsim::NoiseSchedule& schedule() const { return schedule_; }
  SamplerMode mode() const { return mode_; }

  // Exact outcome distribution at shot time t, including readout noise.
  std::vector<double> shot_probabilities(double x, double t) const {
    const qsim::Circuit circuit = build_circuit(x, model_->encoder, model_->ansatz);
    return probabilities_for(circuit, schedule_.param.at(t), schedule_.readout_at(t), t);
  }

  ShotMultiset sample(double x, int M, ShotClock& clock, util::Rng& rng) const {
    if (M < 1) throw std::invalid_argument("sample_shots: M must be >= 1");
    const qsim::Circuit circuit = build_circuit(x, model_->encoder, model_->ansatz);
    ShotMultiset shots;
    shots.x = x;
    shots.records.reserve(static_cast<std::size_t>(M));

    if (mode_ == SamplerMode::DensityExact) {
      // Consecutive shots with identical channel parameters reuse the same
      // outcome distribution; constant schedules hit this on every shot.
      double last_p = -1.0, last_q = -1.0;
      std::vector<double> probs;
      for (int m = 0; m < M; ++m) {
        const double t = clock.next_shot();
        const double p = schedule_.param.at(t);
        const double q = schedule_.readout_at(t);
        if (probs.empty() || p != last_p || q != last_q) {
          probs = probabilities_for(circuit, p, q, t);
          last_p = p;
          last_q = q;
        }
        const int idx = detail::sample_index(probs, rng);
        shots.records.push_back({t, idx, model_->grid.map_index(idx)});
      }
    } else {
      for (int m = 0; m < M; ++m) {
        const double t = clock.next_shot();
        const qsim::KrausChannel channel =
            qsim::make_channel(schedule_.family, schedule_.param.at(t));
        const int idx = detail::run_trajectory(circuit, model_->ansatz.num_qubits,
                                               channel, schedule_.readout_at(t), rng);
        shots.records.push_back({t, idx, model_->grid.map_index(idx)});
      }
    }
    clock.end_batch();
    return shots;
  }

 private:
  std::vector<double> probabilities_for(const qsim::Circuit& circuit, double p,
                                        double readout_q, double t) const {
    const qsim::NoiseSchedule frozen(schedule_.family, qsim::ParamFn::constant(p),
                                     qsim::ParamFn::constant(readout_q),
                                     schedule_.applies_after_each_gate);
    const qsim::DensityMatrix rho =
        qsim::run_noisy_circuit(circuit, model_->ansatz.num_qubits, frozen, t);
    return qsim::apply_readout_flip(qsim::measure_probabilities(rho), readout_q,
                                    model_->ansatz.num_qubits);
  }

  const PqcModel* model_;
  qsim::NoiseSchedule schedule_;
  SamplerMode mode_;
};

}  // namespace aqcp::model
