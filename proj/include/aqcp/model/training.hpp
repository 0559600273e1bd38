// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "aqcp/model/ansatz.hpp"
#include "aqcp/model/encoder.hpp"
#include "aqcp/model/grid.hpp"
#include "aqcp/qsim/gate.hpp"
#include "aqcp/util/parallel.hpp"
#include "aqcp/util/rng.hpp"

namespace aqcp::model {

inline constexpr double kLossProbabilityClamp = 1e-12;

inline std::vector<double> noiseless_probabilities(const VectorXd& angles,
                                                   const AnsatzConfig& config) {
  return qsim::run_circuit(build_circuit(angles, config), config.num_qubits)
      .probabilities();
}

// Cross-entropy of the noiseless model against the grid cell of y (snapped
// to the nearest lattice point).
inline double model_loss(double x, double y, const AngleEncoder& encoder,
                         const AnsatzConfig& config, const GridMap& grid) {
  const auto probs = noiseless_probabilities(encoder.forward(x), config);
  const double p = probs[static_cast<std::size_t>(grid.snap_index(y))];
  return -std::log(std::max(p, kLossProbabilityClamp));
}

namespace detail {

inline double cell_probability(const qsim::StateVector& psi, int cell) {
  return std::norm(psi.amp(cell));
}

// Gate position of rotation parameter j inside the built circuit.
inline std::size_t rotation_gate_position(int j, const AnsatzConfig& config) {
  const int per_layer_rot = 3 * config.num_qubits;
  const auto pairs_per_layer = entangler_pairs(config).size();
  const int layer = j / per_layer_rot;
  const int offset = j % per_layer_rot;
  return static_cast<std::size_t>(layer) *
             (static_cast<std::size_t>(per_layer_rot) + pairs_per_layer) +
         static_cast<std::size_t>(offset);
}

}  // namespace detail

// d P(cell) / d theta_j for every rotation angle, by the parameter-shift
// rule: evaluate at theta_j +- pi/2 and halve the difference. States before
// each gate are cached once, so each shifted evaluation only replays the
// circuit suffix.
inline VectorXd cell_probability_gradient(const VectorXd& angles,
                                          const AnsatzConfig& config, int cell) {
  const qsim::Circuit circuit = build_circuit(angles, config);
  const int nq = config.num_qubits;
  std::vector<qsim::StateVector> prefix;
  prefix.reserve(circuit.size() + 1);
  prefix.emplace_back(nq);
  for (const auto& g : circuit) prefix.push_back(qsim::apply_gate(prefix.back(), g));

  VectorXd grad(config.parameter_count());
  for (int j = 0; j < config.parameter_count(); ++j) {
    const std::size_t pos = detail::rotation_gate_position(j, config);
    double shifted[2];
    for (int s = 0; s < 2; ++s) {
      qsim::Gate g = circuit[pos];
      g.angle += (s == 0 ? 0.5 : -0.5) * M_PI;
      qsim::StateVector psi = qsim::apply_gate(prefix[pos], g);
      for (std::size_t k = pos + 1; k < circuit.size(); ++k)
        psi = qsim::apply_gate(psi, circuit[k]);
      shifted[s] = detail::cell_probability(psi, cell);
    }
    grad(j) = 0.5 * (shifted[0] - shifted[1]);
  }
  return grad;
}

struct TrainOptions {
  int epochs = 30;
  double lr = 0.01;
  int batch_size = 0;  // 0 = full batch
  std::uint64_t shuffle_seed = 1;
  int threads = 0;
};

struct TrainResult {
  std::vector<double> loss_history;  // per-epoch empirical risk
};

// Gradient descent on the encoder weights. The circuit gradient comes from
// the parameter-shift rule; the encoder Jacobian from manual backprop.
inline TrainResult train(const std::vector<double>& xs, const std::vector<double>& ys,
                         AngleEncoder& encoder, const AnsatzConfig& config,
                         const GridMap& grid, const TrainOptions& options) {
  if (xs.empty() || xs.size() != ys.size())
    throw std::invalid_argument("train: dataset must be nonempty with matching sizes");
  if (encoder.output_size() != config.parameter_count())
    throw std::invalid_argument("train: encoder output size must equal 3*L*Q");

  const std::size_t n = xs.size();
  const std::size_t batch =
      options.batch_size <= 0 ? n : std::min<std::size_t>(n, options.batch_size);
  util::Rng shuffle_rng(util::derive_seed(options.shuffle_seed, 0x747261696e));

  TrainResult result;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  struct SampleGrad {
    EncoderGradients grads;
    double loss = 0.0;
  };

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    if (batch < n) {
      for (std::size_t i = n; i-- > 1;) {
        const std::size_t j = shuffle_rng.next_u64() % (i + 1);
        std::swap(order[i], order[j]);
      }
    }
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t end = std::min(n, start + batch);
      std::vector<SampleGrad> per_sample(end - start);
      util::parallel_for(
          end - start,
          [&](std::size_t k) {
            const std::size_t i = order[start + k];
            AngleEncoder::ForwardTrace trace;
            const VectorXd angles = encoder.forward(xs[i], &trace);
            const int cell = grid.snap_index(ys[i]);
            const auto probs = noiseless_probabilities(angles, config);
            const double p = probs[static_cast<std::size_t>(cell)];
            per_sample[k].loss = -std::log(std::max(p, kLossProbabilityClamp));
            VectorXd upstream;
            if (p > kLossProbabilityClamp) {
              upstream = cell_probability_gradient(angles, config, cell) * (-1.0 / p);
            } else {
              upstream = VectorXd::Zero(config.parameter_count());
            }
            per_sample[k].grads = encoder.backward(trace, upstream);
          },
          options.threads);

      EncoderGradients acc = encoder.zero_gradients();
      double batch_loss = 0.0;
      for (const auto& s : per_sample) {
        acc.add_scaled(s.grads, 1.0 / static_cast<double>(end - start));
        batch_loss += s.loss;
      }
      epoch_loss += batch_loss;
      if (!std::isfinite(batch_loss))
        throw std::runtime_error("train: non-finite loss at epoch " +
                                 std::to_string(epoch));
      encoder.apply_update(acc, options.lr);
    }
    result.loss_history.push_back(epoch_loss / static_cast<double>(n));
  }
  return result;
}

}  // namespace aqcp::model
