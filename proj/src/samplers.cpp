#include "scjitai/samplers.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "scjitai/errors.hpp"

namespace scjitai {

namespace {

[[noreturn]] void domain(const std::string& what) { throw DomainError(what); }

// Uniform in (0, 1]; safe for log().
double uniform_open0(RngState& rng) { return 1.0 - rng.uniform01(); }

double standard_normal(RngState& rng) {
  const double u1 = uniform_open0(rng);
  const double u2 = rng.uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Marsaglia & Tsang (2000), shape >= 1. Returns log of the draw.
double log_gamma_mt(RngState& rng, double shape) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = standard_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open0(rng);
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return std::log(d * v);
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return std::log(d * v);
  }
}

}  // namespace

int sample_bernoulli(RngState& rng, double p) {
  if (!(p >= 0.0 && p <= 1.0)) domain("bernoulli: p must lie in [0, 1], got " + std::to_string(p));
  return rng.uniform01() < p ? 1 : 0;
}

double sample_gaussian(RngState& rng, double mean, double sd) {
  if (!(sd >= 0.0)) domain("gaussian: sd must be >= 0, got " + std::to_string(sd));
  const double z = standard_normal(rng);
  if (sd == 0.0) return mean;
  return mean + sd * z;
}

double sample_uniform_width(RngState& rng, double center, double rel_width) {
  if (!(rel_width >= 0.0)) domain("uniform: relative width must be >= 0, got " + std::to_string(rel_width));
  if (!(center >= 0.0)) domain("uniform: center must be >= 0, got " + std::to_string(center));
  const double lo = (1.0 - rel_width / 2.0) * center;
  const double hi = (1.0 + rel_width / 2.0) * center;
  return lo + (hi - lo) * rng.uniform01();
}

double sample_log_gamma(RngState& rng, double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) domain("gamma: shape must be positive, got " + std::to_string(shape));
  if (shape >= 1.0) return log_gamma_mt(rng, shape);
  const double boosted = log_gamma_mt(rng, shape + 1.0);
  return boosted + std::log(uniform_open0(rng)) / shape;
}

GammaShapeScale gamma_shape_scale(double mean, double sd) {
  if (!(mean > 0.0)) domain("gamma: mean must be > 0, got " + std::to_string(mean));
  if (!(sd > 0.0)) domain("gamma: sd must be > 0, got " + std::to_string(sd));
  const double ratio = mean / sd;
  return {ratio * ratio, sd * sd / mean};
}

double sample_gamma_mean_sd(RngState& rng, double mean, double sd) {
  const auto [shape, scale] = gamma_shape_scale(mean, sd);
  const double log_value = sample_log_gamma(rng, shape) + std::log(scale);
  const double value = std::exp(log_value);
  if (value < std::numeric_limits<double>::min()) return std::numeric_limits<double>::min();
  if (!std::isfinite(value)) return std::numeric_limits<double>::max();
  return value;
}

double sample_beta_mean_conc(RngState& rng, double mean, double conc) {
  if (!(mean > 0.0 && mean < 1.0)) domain("beta: mean must lie in (0, 1), got " + std::to_string(mean));
  if (!(conc > 0.0) || !std::isfinite(conc)) domain("beta: concentration must be > 0, got " + std::to_string(conc));
  const double log_a = sample_log_gamma(rng, conc * mean);
  const double log_b = sample_log_gamma(rng, conc * (1.0 - mean));
  // a / (a + b) = 1 / (1 + exp(log_b - log_a)); stays finite when both underflow.
  return 1.0 / (1.0 + std::exp(log_b - log_a));
}

}  // namespace scjitai
