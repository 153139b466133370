#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "scjitai/rng.hpp"

namespace scjitai {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Head { linear, softmax };

struct MlpSpec {
  int input_dim = 1;
  std::vector<int> hidden;
  int output_dim = 1;
  Head head = Head::linear;
  // Start the last layer at zero (a uniform softmax policy).
  bool zero_output_layer = false;

  void validate() const;  // throws ConfigError
};

/// Fully connected network, ReLU on every hidden layer.
///
/// Batches are column-major: one sample per column. All weights and biases
/// live in one flat vector, so optimizers and target-network syncs act on it
/// directly. Layer i occupies W_i (out x in, column-major) followed by b_i.
class Mlp {
 public:
  struct Tape {
    std::vector<Matrix> activations;  // input, then each hidden layer post-ReLU
    Matrix logits;
    Matrix output;
  };

  // Fan-in uniform init U(-1/sqrt(in), 1/sqrt(in)) for weights and biases.
  Mlp(MlpSpec spec, RngState& rng);

  const MlpSpec& spec() const { return spec_; }
  std::size_t num_params() const { return static_cast<std::size_t>(params_.size()); }
  std::size_t num_layers() const { return layers_.size(); }

  Vector& params() { return params_; }
  const Vector& params() const { return params_; }

  Eigen::Map<const Matrix> weights(std::size_t layer) const;
  Eigen::Map<Matrix> weights(std::size_t layer);
  Eigen::Map<const Vector> bias(std::size_t layer) const;
  Eigen::Map<Vector> bias(std::size_t layer);

  Matrix forward(const Matrix& inputs) const;
  Matrix forward(const Matrix& inputs, Tape& tape) const;
  Vector forward(std::span<const double> input) const;

  /// Accumulates into `grads` the gradient of sum(upstream .* output).
  void backward(const Tape& tape, const Matrix& upstream, Vector& grads) const;
  /// Same, with the upstream taken at the pre-softmax logits.
  void backward_logits(const Tape& tape, const Matrix& upstream_logits, Vector& grads) const;

  /// Gradient of <upstream, forward(input)> for one sample.
  Vector gradients(std::span<const double> input, std::span<const double> upstream) const;

 private:
  struct Layer {
    int in;
    int out;
    std::size_t offset;
  };

  MlpSpec spec_;
  std::vector<Layer> layers_;
  Vector params_;
};

// Row-wise softmax over each column (each column is one sample).
Matrix softmax_columns(const Matrix& logits);

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Adam with bias correction.
class AdamState {
 public:
  AdamState(std::size_t num_params, AdamConfig config);

  void step(Vector& params, const Vector& grads);

  long steps() const { return steps_; }
  const Vector& first_moment() const { return m_; }
  const Vector& second_moment() const { return v_; }
  const AdamConfig& config() const { return config_; }

 private:
  AdamConfig config_;
  long steps_ = 0;
  Vector m_;
  Vector v_;
};

}  // namespace scjitai
