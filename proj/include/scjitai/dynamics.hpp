#pragma once

// State-transition law of the step-count simulator.
//
// Actions: 0 no message, 1 non-contextualized message, 2 message tailored to
// context 0, 3 message tailored to context 1.
//
// Randomness is split over two streams: context generation always draws from
// `RngStreams::context`, every other stochastic quantity (episode parameters,
// h/d/s noise) from `RngStreams::noise`. A stochastic run with zero-width noise
// therefore sees exactly the same contexts as a deterministic run.

#include <cstdint>
#include <string_view>

#include "scjitai/rng.hpp"

namespace scjitai {

inline constexpr int kNumActions = 4;

struct DynamicsParams {
  double sigma = 0.4;     // context feature noise sd
  double delta_h = 0.1;   // habituation decay
  double eps_h = 0.05;    // habituation increment
  double delta_d = 0.1;   // disengagement decay
  double eps_d = 0.4;     // disengagement increment
  double rho1 = 50.0;     // surplus for a = 1
  double rho2 = 200.0;    // surplus for a = c + 2
  double m_s = 0.1;       // baseline step count
  double d_threshold = 0.99;
  int horizon = 50;

  void validate() const;  // throws ConfigError
  friend bool operator==(const DynamicsParams&, const DynamicsParams&) = default;
};

enum class NoiseMode { deterministic = 0, uniform = 1, beta = 2 };

std::string_view to_string(NoiseMode mode);
NoiseMode noise_mode_from_string(std::string_view name);  // throws ConfigError
NoiseMode noise_mode_from_version(int n_version);         // 0/1/2, throws ConfigError

struct StochasticityConfig {
  NoiseMode mode = NoiseMode::deterministic;
  double a_hd = 0.0;
  double a_de = 0.0;
  double sigma_s = 1.0;
  double kappa_h = 100.0;
  double kappa_d = 100.0;
  double kappa_delta_h = 100.0;
  double kappa_eps_h = 100.0;
  double kappa_delta_d = 100.0;
  double kappa_eps_d = 100.0;

  void validate() const;  // throws ConfigError
  friend bool operator==(const StochasticityConfig&, const StochasticityConfig&) = default;
};

// Decay/increment values realized for one episode.
struct EpisodeParams {
  double delta_h = 0.0;
  double eps_h = 0.0;
  double delta_d = 0.0;
  double eps_d = 0.0;

  static EpisodeParams from(const DynamicsParams& base) {
    return {base.delta_h, base.eps_h, base.delta_d, base.eps_d};
  }
  friend bool operator==(const EpisodeParams&, const EpisodeParams&) = default;
};

struct Context {
  int c = 0;       // true context
  double x = 0.0;  // noisy feature
  double p = 0.5;  // P(C = 1 | x)
  int l = 0;       // most likely context, p > 0.5
  friend bool operator==(const Context&, const Context&) = default;
};

struct SimState {
  Context context;
  double h = 0.0;
  double d = 0.0;
  double s = 0.0;
  int t = 0;
  friend bool operator==(const SimState&, const SimState&) = default;
};

struct RngStreams {
  RngState context;
  RngState noise;

  explicit RngStreams(std::uint64_t seed)
      : context(derive_seed(seed, 0)), noise(derive_seed(seed, 1)) {}
  friend bool operator==(const RngStreams&, const RngStreams&) = default;
};

// Output of the noiseless update, before any state noise.
struct DeterministicStep {
  double h_hat;
  double d_hat;
  double s_hat;
  Context next_context;
};

struct NoisyValues {
  double h;
  double d;
  double s;
};

// logistic((2x - 1) / (2 sigma^2)): posterior of C = 1 under a fair prior and
// N(0, sigma^2) / N(1, sigma^2) class conditionals.
double context_posterior(double x, double sigma);

Context gen_context(double sigma, RngState& rng);

EpisodeParams sample_episode_params(const DynamicsParams& base, const StochasticityConfig& stoch,
                                    RngState& rng);

// Expected step count m_s + (1 - h) * rho for the given action and true context.
double expected_step_count(const DynamicsParams& base, int action, int context, double h);

DeterministicStep step_deterministic(const SimState& state, int action, const EpisodeParams& ep,
                                     const DynamicsParams& base, RngState& context_rng);

// Noise on h and d only (clamped to [0, 1]); identity in deterministic mode.
double perturb_unit(double center, double rel_width, double kappa, NoiseMode mode, RngState& rng);

// Gamma(mean = s_hat, sd = sigma_s) in the stochastic modes; identity otherwise.
double perturb_step_count(double s_hat, const StochasticityConfig& stoch, RngState& rng);

// h, d, then s, drawn in that order from `rng`.
NoisyValues apply_state_noise(double h_hat, double d_hat, double s_hat,
                              const StochasticityConfig& stoch, RngState& rng);

// Full transition. The step count mean is evaluated at the realized (noisy) h,
// so in deterministic mode it coincides with the s_hat of step_deterministic.
SimState transition(const SimState& state, int action, const EpisodeParams& ep,
                    const DynamicsParams& base, const StochasticityConfig& stoch, RngStreams& rng);

// Reset state: h = d = 0, s = m_s, t = 0, fresh context.
SimState initial_state(const DynamicsParams& base, RngState& context_rng);

void check_action(int action);  // throws DomainError

}  // namespace scjitai
