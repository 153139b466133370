#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scjitai/dynamics.hpp"

namespace scjitai {

enum class ObsVar { C, P, L, H, D, S };

char to_char(ObsVar v);

/// Ordered selection of observed variables, e.g. {C, H, D}.
class ObsSpec {
 public:
  /// Throws ConfigError for an empty list, unknown names or duplicates.
  explicit ObsSpec(const std::vector<std::string>& names);
  explicit ObsSpec(std::vector<ObsVar> vars);

  static ObsSpec parse(const std::string& letters);  // "CHD" or "C,H,D"

  std::size_t size() const { return vars_.size(); }
  const std::vector<ObsVar>& vars() const { return vars_; }
  std::vector<std::string> names() const;

  void project(const SimState& state, std::span<double> out) const;
  std::vector<double> project(const SimState& state) const;

  friend bool operator==(const ObsSpec&, const ObsSpec&) = default;

 private:
  std::vector<ObsVar> vars_;
};

// Everything hidden behind the observation.
struct StepInfo {
  SimState state;
  EpisodeParams params;

  // Keys: C, X, P, L, H, D, S, t, delta_h, epsilon_h, delta_d, epsilon_d.
  std::map<std::string, double> as_map() const;
};

struct ResetResult {
  std::vector<double> observation;
  StepInfo info;
};

struct StepResult {
  std::vector<double> observation;
  double reward = 0.0;
  bool terminated = false;
  bool truncated = false;
  StepInfo info;
};

struct EnvConfig {
  DynamicsParams dynamics;
  StochasticityConfig stochasticity;
  ObsSpec obs{std::vector<ObsVar>{ObsVar::C, ObsVar::H, ObsVar::D}};

  friend bool operator==(const EnvConfig&, const EnvConfig&) = default;
};

/// Gym-style step-count environment.
///
/// reset() resamples the episode parameters and returns (observation, info);
/// step() returns (observation, reward, terminated, truncated, info), where the
/// reward is the new step count. After terminated or truncated, step() throws
/// UsageError until the next reset().
class StepCountEnv {
 public:
  StepCountEnv(const DynamicsParams& dynamics, const StochasticityConfig& stochasticity,
               ObsSpec obs, std::uint64_t seed);
  StepCountEnv(const EnvConfig& config, std::uint64_t seed)
      : StepCountEnv(config.dynamics, config.stochasticity, config.obs, seed) {}

  /// A seed restarts both internal streams; without one they continue.
  ResetResult reset(std::optional<std::uint64_t> seed = std::nullopt);
  StepResult step(int action);

  double get_C() const;
  double get_P() const;
  double get_L() const;
  double get_H() const;
  double get_D() const;
  double get_S() const;

  const SimState& state() const;
  const EpisodeParams& episode_params() const;
  bool episode_over() const { return done_; }
  bool has_reset() const { return has_reset_; }

  std::size_t observation_size() const { return obs_.size(); }
  const ObsSpec& obs_spec() const { return obs_; }
  const DynamicsParams& dynamics() const { return dynamics_; }
  const StochasticityConfig& stochasticity() const { return stoch_; }
  int n_version() const { return static_cast<int>(stoch_.mode); }

 private:
  void require_reset() const;

  DynamicsParams dynamics_;
  StochasticityConfig stoch_;
  ObsSpec obs_;
  RngStreams rng_;
  SimState state_;
  EpisodeParams params_;
  bool has_reset_ = false;
  bool done_ = false;
};

}  // namespace scjitai
