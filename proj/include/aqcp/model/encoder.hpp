// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "aqcp/util/rng.hpp"

namespace aqcp::model {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline double elu(double z) { return z >= 0.0 ? z : std::expm1(z); }
inline double elu_prime(double z) { return z >= 0.0 ? 1.0 : std::exp(z); }

struct EncoderGradients {
  std::vector<MatrixXd> weights;
  std::vector<VectorXd> biases;

  void add_scaled(const EncoderGradients& other, double scale) {
    for (std::size_t l = 0; l < weights.size(); ++l) {
      weights[l] += scale * other.weights[l];
      biases[l] += scale * other.biases[l];
    }
  }
};

// Feed-forward angle encoder. ELU on hidden layers, linear output layer;
// the output nodes are used directly as circuit rotation angles.
class AngleEncoder {
 public:
  AngleEncoder() = default;

  explicit AngleEncoder(std::vector<int> layer_sizes) {
    set_layer_sizes(std::move(layer_sizes));
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      weights_[l].setZero();
      biases_[l].setZero();
    }
  }

  // Uniform init in [-1/sqrt(fan_in), 1/sqrt(fan_in)], seeded.
  static AngleEncoder random_init(std::vector<int> layer_sizes, std::uint64_t seed) {
    AngleEncoder enc(std::move(layer_sizes));
    util::Rng rng(util::derive_seed(seed, 0x656e63));
    for (std::size_t l = 0; l < enc.weights_.size(); ++l) {
      const double bound = 1.0 / std::sqrt(static_cast<double>(enc.weights_[l].cols()));
      for (Eigen::Index r = 0; r < enc.weights_[l].rows(); ++r)
        for (Eigen::Index c = 0; c < enc.weights_[l].cols(); ++c)
          enc.weights_[l](r, c) = rng.uniform(-bound, bound);
      for (Eigen::Index r = 0; r < enc.biases_[l].size(); ++r)
        enc.biases_[l](r) = rng.uniform(-bound, bound);
    }
    return enc;
  }

  static std::vector<int> default_layer_sizes(int parameter_count) {
    return {1, 10, 10, parameter_count};
  }

  const std::vector<int>& layer_sizes() const { return sizes_; }
  int output_size() const { return sizes_.back(); }
  std::size_t num_layers() const { return weights_.size(); }
  std::vector<MatrixXd>& weights() { return weights_; }
  const std::vector<MatrixXd>& weights() const { return weights_; }
  std::vector<VectorXd>& biases() { return biases_; }
  const std::vector<VectorXd>& biases() const { return biases_; }

  struct ForwardTrace {
    std::vector<VectorXd> inputs;          // activation entering each layer
    std::vector<VectorXd> preactivations;  // z = W a + b per layer
  };

  VectorXd forward(double x, ForwardTrace* trace = nullptr) const {
    VectorXd a(1);
    a(0) = x;
    if (trace) {
      trace->inputs.clear();
      trace->preactivations.clear();
    }
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      if (trace) trace->inputs.push_back(a);
      VectorXd z = weights_[l] * a + biases_[l];
      if (trace) trace->preactivations.push_back(z);
      if (l + 1 < weights_.size())
        for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = elu(z(i));
      a = std::move(z);
    }
    return a;
  }

  // Gradient of upstream . theta(x) with respect to all weights and biases.
  EncoderGradients backward(const ForwardTrace& trace, const VectorXd& upstream) const {
    if (trace.inputs.size() != weights_.size())
      throw std::invalid_argument("backward: trace does not match encoder");
    EncoderGradients grads;
    grads.weights.resize(weights_.size());
    grads.biases.resize(weights_.size());
    VectorXd delta = upstream;  // output layer is linear
    for (std::size_t li = weights_.size(); li-- > 0;) {
      if (li + 1 < weights_.size()) {
        const VectorXd& z = trace.preactivations[li];
        for (Eigen::Index i = 0; i < delta.size(); ++i) delta(i) *= elu_prime(z(i));
      }
      grads.weights[li] = delta * trace.inputs[li].transpose();
      grads.biases[li] = delta;
      if (li > 0) delta = weights_[li].transpose() * delta;
    }
    return grads;
  }

  void apply_update(const EncoderGradients& grads, double lr) {
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      weights_[l] -= lr * grads.weights[l];
      biases_[l] -= lr * grads.biases[l];
    }
  }

  EncoderGradients zero_gradients() const {
    EncoderGradients g;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      g.weights.push_back(MatrixXd::Zero(weights_[l].rows(), weights_[l].cols()));
      g.biases.push_back(VectorXd::Zero(biases_[l].size()));
    }
    return g;
  }

 private:
  void set_layer_sizes(std::vector<int> sizes) {
    if (sizes.size() < 2) throw std::invalid_argument("encoder needs >= 2 layers");
    for (int s : sizes)
      if (s < 1) throw std::invalid_argument("encoder layer sizes must be positive");
    sizes_ = std::move(sizes);
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
      weights_.emplace_back(sizes_[l + 1], sizes_[l]);
      biases_.emplace_back(sizes_[l + 1]);
    }
  }

  std::vector<int> sizes_;
  std::vector<MatrixXd> weights_;
  std::vector<VectorXd> biases_;
};

}  // namespace aqcp::model
