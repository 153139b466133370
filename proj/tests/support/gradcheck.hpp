#pragma once

// Central-difference verification of Mlp::backward / Mlp::backward_logits.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "scjitai/mlp.hpp"
#include "scjitai/samplers.hpp"

namespace scjitai::testing {

struct GradCheckResult {
  double rel_error;      // ||analytic - numeric|| / max(||analytic||, ||numeric||)
  std::size_t checked;   // number of coordinates compared
};

enum class GradTarget { output, logits };

// Compares the gradient of f(theta) = sum(U .* Y(theta)) for a random batch X
// and random upstream U, where Y is the network output or its logits. At most
// `max_coords` parameters are perturbed, spread evenly over the layers.
inline GradCheckResult check_mlp_gradients(MlpSpec spec, std::uint64_t seed, std::size_t max_coords,
                                           GradTarget target = GradTarget::output, double h = 1e-5,
                                           int batch = 3) {
  spec.zero_output_layer = false;  // a zero last layer would zero every hidden gradient
  RngState rng(seed);
  Mlp net(spec, rng);
  Matrix x(spec.input_dim, batch);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = sample_gaussian(rng, 0.0, 1.0);
  Matrix u(spec.output_dim, batch);
  for (Eigen::Index i = 0; i < u.size(); ++i) u.data()[i] = sample_gaussian(rng, 0.0, 1.0);

  auto objective = [&] {
    Mlp::Tape tape;
    net.forward(x, tape);
    const Matrix& y = target == GradTarget::output ? tape.output : tape.logits;
    return (u.array() * y.array()).sum();
  };

  Vector analytic = Vector::Zero(static_cast<Eigen::Index>(net.num_params()));
  {
    Mlp::Tape tape;
    net.forward(x, tape);
    if (target == GradTarget::output)
      net.backward(tape, u, analytic);
    else
      net.backward_logits(tape, u, analytic);
  }

  // Coordinates: every parameter when affordable, else an even spread per layer.
  std::vector<std::size_t> coords;
  const std::size_t n = net.num_params();
  if (n <= max_coords) {
    for (std::size_t k = 0; k < n; ++k) coords.push_back(k);
  } else {
    std::vector<std::size_t> starts;
    int in = spec.input_dim;
    std::size_t offset = 0;
    std::vector<int> widths = spec.hidden;
    widths.push_back(spec.output_dim);
    for (int out : widths) {
      starts.push_back(offset);
      offset += static_cast<std::size_t>(in) * out + out;
      in = out;
    }
    starts.push_back(offset);
    const std::size_t per_layer = std::max<std::size_t>(1, max_coords / widths.size());
    for (std::size_t l = 0; l + 1 < starts.size(); ++l) {
      const std::size_t size = starts[l + 1] - starts[l];
      for (std::size_t k = 0; k < std::min(per_layer, size); ++k) coords.push_back(starts[l] + rng.below(size));
    }
  }

  double diff2 = 0.0, a2 = 0.0, n2 = 0.0;
  for (std::size_t k : coords) {
    double& p = net.params()[static_cast<Eigen::Index>(k)];
    const double saved = p;
    p = saved + h;
    const double plus = objective();
    p = saved - h;
    const double minus = objective();
    p = saved;
    const double numeric = (plus - minus) / (2.0 * h);
    const double a = analytic[static_cast<Eigen::Index>(k)];
    diff2 += (a - numeric) * (a - numeric);
    a2 += a * a;
    n2 += numeric * numeric;
  }
  const double denom = std::max(std::sqrt(a2), std::sqrt(n2));
  return {denom == 0.0 ? 0.0 : std::sqrt(diff2) / denom, coords.size()};
}

// The four networks the learners train.
struct NamedSpec {
  const char* name;
  MlpSpec spec;
};

inline std::vector<NamedSpec> agent_architectures(int obs_dim = 3) {
  return {
      {"reinforce policy 1x128 softmax", {obs_dim, {128}, 4, Head::softmax, true}},
      {"dqn q-network 2x128 linear", {obs_dim, {128, 128}, 4, Head::linear, false}},
      {"ppo actor 2x256 softmax", {obs_dim, {256, 256}, 4, Head::softmax, true}},
      {"ppo critic 3x256 linear", {obs_dim, {256, 256, 256}, 1, Head::linear, false}},
  };
}

}  // namespace scjitai::testing
