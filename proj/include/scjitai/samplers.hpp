#pragma once

// Distribution samplers with the parameterizations used by the simulator.
// All of them throw DomainError on invalid parameters.

#include "scjitai/rng.hpp"

namespace scjitai {

int sample_bernoulli(RngState& rng, double p);

// Box-Muller, cosine branch only; one normal per two uniforms. sd == 0 returns mean.
double sample_gaussian(RngState& rng, double mean, double sd);

// Uniform((1 - w/2) * center, (1 + w/2) * center). w == 0 returns center.
double sample_uniform_width(RngState& rng, double center, double rel_width);

// Gamma with shape (mean/sd)^2 and scale sd^2/mean, so E = mean and SD = sd.
// Tiny shapes are sampled in log space; results that underflow double are
// returned as the smallest positive normal double.
double sample_gamma_mean_sd(RngState& rng, double mean, double sd);

// Beta(conc * mean, conc * (1 - mean)) via a ratio of two unit-scale Gammas.
double sample_beta_mean_conc(RngState& rng, double mean, double conc);

// Unit-scale Gamma(shape) draw returned as log(value). Marsaglia-Tsang with the
// U^(1/shape) boost for shape < 1.
double sample_log_gamma(RngState& rng, double shape);

struct GammaShapeScale {
  double shape;
  double scale;
};

GammaShapeScale gamma_shape_scale(double mean, double sd);

}  // namespace scjitai
