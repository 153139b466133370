#include "scjitai/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scjitai/errors.hpp"
#include "scjitai/samplers.hpp"

namespace scjitai {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

void DynamicsParams::validate() const {
  require(sigma > 0.0, "sigma must be > 0");
  require(in_unit(delta_h), "delta_h must lie in [0, 1]");
  require(in_unit(eps_h), "epsilon_h must lie in [0, 1]");
  require(in_unit(delta_d), "delta_d must lie in [0, 1]");
  require(in_unit(eps_d), "epsilon_d must lie in [0, 1]");
  require(rho1 > 0.0, "rho1 must be > 0");
  require(rho2 > 0.0, "rho2 must be > 0");
  require(m_s > 0.0, "m_s must be > 0");
  require(std::isfinite(d_threshold), "D_threshold must be finite");
  require(horizon >= 1, "horizon must be >= 1");
}

void StochasticityConfig::validate() const {
  require(a_hd >= 0.0, "a_hd must be >= 0");
  require(a_de >= 0.0, "a_de must be >= 0");
  require(kappa_h > 0.0 && kappa_d > 0.0 && kappa_delta_h > 0.0 && kappa_eps_h > 0.0 &&
              kappa_delta_d > 0.0 && kappa_eps_d > 0.0,
          "all kappa concentrations must be > 0");
  if (mode != NoiseMode::deterministic) require(sigma_s > 0.0, "sigma_s must be > 0");
}

std::string_view to_string(NoiseMode mode) {
  switch (mode) {
    case NoiseMode::deterministic: return "deterministic";
    case NoiseMode::uniform: return "uniform";
    case NoiseMode::beta: return "beta";
  }
  return "?";
}

NoiseMode noise_mode_from_string(std::string_view name) {
  if (name == "deterministic") return NoiseMode::deterministic;
  if (name == "uniform") return NoiseMode::uniform;
  if (name == "beta") return NoiseMode::beta;
  throw ConfigError("unknown stochasticity mode '" + std::string(name) + "'");
}

NoiseMode noise_mode_from_version(int n_version) {
  if (n_version < 0 || n_version > 2)
    throw ConfigError("n_version must be 0, 1 or 2, got " + std::to_string(n_version));
  return static_cast<NoiseMode>(n_version);
}

void check_action(int action) {
  if (action < 0 || action >= kNumActions)
    throw DomainError("action must be in {0,1,2,3}, got " + std::to_string(action));
}

double context_posterior(double x, double sigma) {
  const double z = (2.0 * x - 1.0) / (2.0 * sigma * sigma);
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

Context gen_context(double sigma, RngState& rng) {
  if (!(sigma > 0.0)) throw DomainError("context sigma must be > 0");
  Context ctx;
  ctx.c = sample_bernoulli(rng, 0.5);
  ctx.x = sample_gaussian(rng, static_cast<double>(ctx.c), sigma);
  ctx.p = context_posterior(ctx.x, sigma);
  ctx.l = ctx.p > 0.5 ? 1 : 0;
  return ctx;
}

EpisodeParams sample_episode_params(const DynamicsParams& base, const StochasticityConfig& stoch,
                                    RngState& rng) {
  const auto m = stoch.mode;
  EpisodeParams ep;
  ep.delta_h = perturb_unit(base.delta_h, stoch.a_de, stoch.kappa_delta_h, m, rng);
  ep.eps_h = perturb_unit(base.eps_h, stoch.a_de, stoch.kappa_eps_h, m, rng);
  ep.delta_d = perturb_unit(base.delta_d, stoch.a_de, stoch.kappa_delta_d, m, rng);
  ep.eps_d = perturb_unit(base.eps_d, stoch.a_de, stoch.kappa_eps_d, m, rng);
  return ep;
}

double expected_step_count(const DynamicsParams& base, int action, int context, double h) {
  if (action == 1) return base.m_s + (1.0 - h) * base.rho1;
  if (action == context + 2) return base.m_s + (1.0 - h) * base.rho2;
  return base.m_s;
}

DeterministicStep step_deterministic(const SimState& state, int action, const EpisodeParams& ep,
                                     const DynamicsParams& base, RngState& context_rng) {
  check_action(action);
  const int c = state.context.c;

  const double h_hat = action == 0 ? (1.0 - ep.delta_h) * state.h : std::min(1.0, state.h + ep.eps_h);

  double d_hat;
  if (action == 0)
    d_hat = state.d;
  else if (action == 1 || action == c + 2)
    d_hat = (1.0 - ep.delta_d) * state.d;
  else
    d_hat = std::min(1.0, state.d + ep.eps_d);

  const double s_hat = expected_step_count(base, action, c, h_hat);
  return {h_hat, d_hat, s_hat, gen_context(base.sigma, context_rng)};
}

double perturb_unit(double center, double rel_width, double kappa, NoiseMode mode, RngState& rng) {
  switch (mode) {
    case NoiseMode::deterministic:
      return center;
    case NoiseMode::uniform:
      return clamp_unit(sample_uniform_width(rng, center, rel_width));
    case NoiseMode::beta:
      // Endpoints are absorbing for the beta overlay; Beta(0, k) is undefined.
      if (center <= 0.0 || center >= 1.0) return center;
      return clamp_unit(sample_beta_mean_conc(rng, center, kappa));
  }
  return center;
}

double perturb_step_count(double s_hat, const StochasticityConfig& stoch, RngState& rng) {
  if (stoch.mode == NoiseMode::deterministic) return s_hat;
  return sample_gamma_mean_sd(rng, s_hat, stoch.sigma_s);
}

NoisyValues apply_state_noise(double h_hat, double d_hat, double s_hat,
                              const StochasticityConfig& stoch, RngState& rng) {
  NoisyValues out;
  out.h = perturb_unit(h_hat, stoch.a_hd, stoch.kappa_h, stoch.mode, rng);
  out.d = perturb_unit(d_hat, stoch.a_hd, stoch.kappa_d, stoch.mode, rng);
  out.s = perturb_step_count(s_hat, stoch, rng);
  return out;
}

SimState transition(const SimState& state, int action, const EpisodeParams& ep,
                    const DynamicsParams& base, const StochasticityConfig& stoch, RngStreams& rng) {
  const DeterministicStep det = step_deterministic(state, action, ep, base, rng.context);

  SimState next;
  next.h = perturb_unit(det.h_hat, stoch.a_hd, stoch.kappa_h, stoch.mode, rng.noise);
  next.d = perturb_unit(det.d_hat, stoch.a_hd, stoch.kappa_d, stoch.mode, rng.noise);
  const double s_mean = expected_step_count(base, action, state.context.c, next.h);
  next.s = perturb_step_count(s_mean, stoch, rng.noise);
  next.context = det.next_context;
  next.t = state.t + 1;
  return next;
}

SimState initial_state(const DynamicsParams& base, RngState& context_rng) {
  SimState s;
  s.h = 0.0;
  s.d = 0.0;
  s.s = base.m_s;
  s.t = 0;
  s.context = gen_context(base.sigma, context_rng);
  return s;
}

}  // namespace scjitai
