#include "scjitai/mlp.hpp"

#include <cmath>
#include <string>

#include "scjitai/errors.hpp"

namespace scjitai {

void MlpSpec::validate() const {
  if (input_dim <= 0 || output_dim <= 0) throw ConfigError("MLP dimensions must be positive");
  for (int h : hidden)
    if (h <= 0) throw ConfigError("MLP hidden widths must be positive");
  if (head == Head::softmax && output_dim < 2)
    throw ConfigError("softmax head needs at least 2 outputs");
}

Mlp::Mlp(MlpSpec spec, RngState& rng) : spec_(std::move(spec)) {
  spec_.validate();
  std::size_t offset = 0;
  int in = spec_.input_dim;
  auto add = [&](int out) {
    layers_.push_back({in, out, offset});
    offset += static_cast<std::size_t>(in) * out + out;
    in = out;
  };
  for (int h : spec_.hidden) add(h);
  add(spec_.output_dim);

  params_.resize(static_cast<Eigen::Index>(offset));
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& L = layers_[i];
    const double bound = 1.0 / std::sqrt(static_cast<double>(L.in));
    const std::size_t n = static_cast<std::size_t>(L.in) * L.out + L.out;
    const bool zero = spec_.zero_output_layer && i + 1 == layers_.size();
    for (std::size_t k = 0; k < n; ++k)
      params_[static_cast<Eigen::Index>(L.offset + k)] = zero ? 0.0 : bound * (2.0 * rng.uniform01() - 1.0);
  }
}

Eigen::Map<const Matrix> Mlp::weights(std::size_t layer) const {
  const auto& L = layers_.at(layer);
  return {params_.data() + L.offset, L.out, L.in};
}

Eigen::Map<Matrix> Mlp::weights(std::size_t layer) {
  const auto& L = layers_.at(layer);
  return {params_.data() + L.offset, L.out, L.in};
}

Eigen::Map<const Vector> Mlp::bias(std::size_t layer) const {
  const auto& L = layers_.at(layer);
  return {params_.data() + L.offset + static_cast<std::size_t>(L.in) * L.out, L.out};
}

Eigen::Map<Vector> Mlp::bias(std::size_t layer) {
  const auto& L = layers_.at(layer);
  return {params_.data() + L.offset + static_cast<std::size_t>(L.in) * L.out, L.out};
}

Matrix softmax_columns(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Eigen::Index j = 0; j < logits.cols(); ++j) {
    const double m = logits.col(j).maxCoeff();
    out.col(j) = (logits.col(j).array() - m).exp();
    out.col(j) /= out.col(j).sum();
  }
  return out;
}

Matrix Mlp::forward(const Matrix& inputs, Tape& tape) const {
  if (inputs.rows() != spec_.input_dim)
    throw ShapeError("MLP input has " + std::to_string(inputs.rows()) + " rows, expected " +
                     std::to_string(spec_.input_dim));
  tape.activations.resize(layers_.size());
  tape.activations[0] = inputs;
  for (std::size_t i = 0; i + 1 < layers_.size(); ++i) {
    Matrix z = weights(i) * tape.activations[i];
    z.colwise() += bias(i);
    tape.activations[i + 1] = z.cwiseMax(0.0);
  }
  const std::size_t last = layers_.size() - 1;
  tape.logits = weights(last) * tape.activations[last];
  tape.logits.colwise() += bias(last);
  tape.output = spec_.head == Head::softmax ? softmax_columns(tape.logits) : tape.logits;
  return tape.output;
}

Matrix Mlp::forward(const Matrix& inputs) const {
  Tape tape;
  return forward(inputs, tape);
}

Vector Mlp::forward(std::span<const double> input) const {
  const Eigen::Map<const Matrix> x(input.data(), static_cast<Eigen::Index>(input.size()), 1);
  return forward(Matrix(x)).col(0);
}

void Mlp::backward(const Tape& tape, const Matrix& upstream, Vector& grads) const {
  if (upstream.rows() != tape.output.rows() || upstream.cols() != tape.output.cols())
    throw ShapeError("upstream gradient shape does not match the network output");
  if (spec_.head == Head::linear) {
    backward_logits(tape, upstream, grads);
    return;
  }
  // Softmax JVP: dz = p .* (u - <u, p>), per column.
  const Matrix& p = tape.output;
  const Eigen::RowVectorXd dots = (upstream.array() * p.array()).colwise().sum();
  Matrix dz = p.array() * (upstream.rowwise() - dots).array();
  backward_logits(tape, dz, grads);
}

void Mlp::backward_logits(const Tape& tape, const Matrix& upstream_logits, Vector& grads) const {
  if (upstream_logits.rows() != spec_.output_dim || upstream_logits.cols() != tape.logits.cols())
    throw ShapeError("upstream logit gradient has the wrong shape");
  if (grads.size() != params_.size()) throw ShapeError("gradient buffer has the wrong size");

  Matrix delta = upstream_logits;
  for (std::size_t i = layers_.size(); i-- > 0;) {
    const auto& L = layers_[i];
    Eigen::Map<Matrix> gW(grads.data() + L.offset, L.out, L.in);
    Eigen::Map<Vector> gb(grads.data() + L.offset + static_cast<std::size_t>(L.in) * L.out, L.out);
    const Matrix& a = tape.activations[i];
    gW.noalias() += delta * a.transpose();
    gb += delta.rowwise().sum();
    if (i == 0) break;
    Matrix back = weights(i).transpose() * delta;
    delta = (a.array() > 0.0).select(back, 0.0);
  }
}

Vector Mlp::gradients(std::span<const double> input, std::span<const double> upstream) const {
  const Eigen::Map<const Matrix> x(input.data(), static_cast<Eigen::Index>(input.size()), 1);
  const Eigen::Map<const Matrix> u(upstream.data(), static_cast<Eigen::Index>(upstream.size()), 1);
  Tape tape;
  forward(Matrix(x), tape);
  Vector g = Vector::Zero(params_.size());
  backward(tape, Matrix(u), g);
  return g;
}

AdamState::AdamState(std::size_t num_params, AdamConfig config)
    : config_(config),
      m_(Vector::Zero(static_cast<Eigen::Index>(num_params))),
      v_(Vector::Zero(static_cast<Eigen::Index>(num_params))) {
  if (!(config_.lr > 0.0)) throw ConfigError("Adam learning rate must be > 0");
}

void AdamState::step(Vector& params, const Vector& grads) {
  if (params.size() != m_.size() || grads.size() != m_.size())
    throw ShapeError("Adam parameter/gradient size mismatch");
  ++steps_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  m_ = b1 * m_ + (1.0 - b1) * grads;
  v_ = b2 * v_ + (1.0 - b2) * grads.cwiseAbs2();
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
  params.array() -= config_.lr * (m_.array() / c1) / ((v_.array() / c2).sqrt() + config_.eps);
}

}  // namespace scjitai
