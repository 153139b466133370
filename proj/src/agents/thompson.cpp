#include "scjitai/agents/thompson.hpp"

#include <limits>

#include "scjitai/errors.hpp"
#include "scjitai/samplers.hpp"

namespace scjitai::agents {

void TsConfig::validate() const {
  if (!(prior_var > 0.0)) throw ConfigError("ts: prior covariance scale must be > 0");
  if (!(noise_var > 0.0)) throw ConfigError("ts: noise variance must be > 0");
}

namespace {

Eigen::LLT<Matrix> factor(const Matrix& precision) {
  Eigen::LLT<Matrix> llt(precision);
  if (llt.info() != Eigen::Success) throw NumericalError("ts: posterior precision is not positive definite");
  return llt;
}

}  // namespace

LinearThompson::LinearThompson(std::size_t obs_dim, int num_actions, const TsConfig& config, RngState& rng)
    : config_((config.validate(), config)), dim_(obs_dim + (config.intercept ? 1 : 0)), rng_(rng()) {
  const auto d = static_cast<Eigen::Index>(dim_);
  const Matrix prior_precision = Matrix::Identity(d, d) / config_.prior_var;
  const Vector prior_mean = Vector::Constant(d, config_.prior_mean);
  precision_.assign(static_cast<std::size_t>(num_actions), prior_precision);
  weighted_.assign(static_cast<std::size_t>(num_actions), prior_precision * prior_mean);
}

Vector LinearThompson::features(std::span<const double> obs) const {
  const std::size_t extra = config_.intercept ? 1 : 0;
  if (obs.size() + extra != dim_) throw ShapeError("ts: observation size mismatch");
  Vector phi(static_cast<Eigen::Index>(dim_));
  for (std::size_t i = 0; i < obs.size(); ++i) phi[static_cast<Eigen::Index>(i)] = obs[i];
  if (config_.intercept) phi[static_cast<Eigen::Index>(dim_ - 1)] = 1.0;
  return phi;
}

Vector LinearThompson::posterior_mean(int action) const {
  const auto& P = precision_.at(static_cast<std::size_t>(action));
  return factor(P).solve(weighted_[static_cast<std::size_t>(action)]);
}

Matrix LinearThompson::posterior_cov(int action) const {
  const auto& P = precision_.at(static_cast<std::size_t>(action));
  return factor(P).solve(Matrix::Identity(P.rows(), P.cols()));
}

int LinearThompson::act(std::span<const double> obs) {
  const Vector phi = features(obs);
  int best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < num_actions(); ++a) {
    const auto llt = factor(precision_[static_cast<std::size_t>(a)]);
    const Vector mean = llt.solve(weighted_[static_cast<std::size_t>(a)]);
    Vector z(mean.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = sample_gaussian(rng_, 0.0, 1.0);
    // Precision = L L^T, so L^{-T} z has covariance precision^{-1}.
    const Vector w = mean + llt.matrixU().solve(z);
    const double predicted = w.dot(phi);
    if (predicted > best_value) {
      best_value = predicted;
      best = a;
    }
  }
  return best;
}

void LinearThompson::update(std::span<const double> obs, int action, double reward) {
  if (action < 0 || action >= num_actions()) throw DomainError("ts: action out of range");
  const Vector phi = features(obs);
  const auto k = static_cast<std::size_t>(action);
  precision_[k].noalias() += phi * phi.transpose() / config_.noise_var;
  weighted_[k] += phi * (reward / config_.noise_var);
}

ReturnSeries train_ts(EpisodicEnv& env, const TsConfig& config, int episodes, RngState& rng) {
  LinearThompson agent(env.observation_size(), env.num_actions(), config, rng);
  ReturnSeries returns;
  returns.reserve(static_cast<std::size_t>(episodes));
  for (int e = 0; e < episodes; ++e) {
    auto obs = env.begin_episode();
    double total = 0.0;
    for (;;) {
      const int a = agent.act(obs);
      auto step = env.advance(a);
      agent.update(obs, a, step.reward);
      total += step.reward;
      obs = std::move(step.observation);
      if (step.done()) break;
    }
    returns.push_back(total);
  }
  return returns;
}

}  // namespace scjitai::agents
