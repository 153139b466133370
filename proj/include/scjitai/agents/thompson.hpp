#pragma once

#include <vector>

#include "scjitai/agents/common.hpp"
#include "scjitai/mlp.hpp"

namespace scjitai::agents {

struct TsConfig {
  double prior_mean = 0.0;   // every coordinate of mu_0a
  double prior_var = 100.0;  // Sigma_0a = prior_var * I
  double noise_var = 625.0;  // sigma_Ya^2 = 25^2
  bool intercept = true;     // append a constant-1 feature

  void validate() const;
};

/// Per-action Bayesian linear regression of the immediate reward on the
/// observation plus a constant intercept feature.
///
/// The posterior is kept in information form (precision, precision * mean);
/// every read factorizes the precision and throws NumericalError if it is not
/// positive definite.
class LinearThompson {
 public:
  LinearThompson(std::size_t obs_dim, int num_actions, const TsConfig& config, RngState& rng);

  // Samples one weight vector per action and returns the argmax prediction.
  int act(std::span<const double> obs);
  void update(std::span<const double> obs, int action, double reward);

  Vector features(std::span<const double> obs) const;
  Vector posterior_mean(int action) const;
  Matrix posterior_cov(int action) const;
  int num_actions() const { return static_cast<int>(precision_.size()); }
  std::size_t feature_dim() const { return dim_; }

 private:
  TsConfig config_;
  std::size_t dim_;
  std::vector<Matrix> precision_;
  std::vector<Vector> weighted_;  // precision * mean
  RngState rng_;
};

ReturnSeries train_ts(EpisodicEnv& env, const TsConfig& config, int episodes, RngState& rng);

}  // namespace scjitai::agents
