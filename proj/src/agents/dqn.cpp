#include "scjitai/agents/dqn.hpp"

#include <algorithm>

#include "scjitai/errors.hpp"

namespace scjitai::agents {

void DqnConfig::validate() const {
  if (hidden.empty() || batch <= 0 || !(lr > 0.0) || replay_capacity < batch)
    throw ConfigError("dqn: invalid network/batch/lr/replay settings");
  if (!(eps_end <= eps_start) || eps_end < 0.0 || eps_start > 1.0 || eps_decrement < 0.0)
    throw ConfigError("dqn: epsilon schedule must satisfy 0 <= eps_end <= eps_start <= 1");
  if (target_sync < 1) throw ConfigError("dqn: target_sync must be >= 1");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("dqn: gamma must lie in [0, 1]");
}

ReplayBuffer::ReplayBuffer(std::size_t capacity, std::size_t obs_dim)
    : capacity_(capacity),
      obs_dim_(obs_dim),
      obs_(static_cast<Eigen::Index>(obs_dim), static_cast<Eigen::Index>(capacity)),
      next_obs_(static_cast<Eigen::Index>(obs_dim), static_cast<Eigen::Index>(capacity)),
      actions_(capacity),
      rewards_(capacity),
      terminal_(capacity) {}

void ReplayBuffer::push(std::span<const double> obs, int action, double reward,
                        std::span<const double> next_obs, bool terminal) {
  if (obs.size() != obs_dim_ || next_obs.size() != obs_dim_) throw ShapeError("replay: observation size");
  const auto col = static_cast<Eigen::Index>(next_);
  const auto dim = static_cast<Eigen::Index>(obs_dim_);
  obs_.col(col) = Eigen::Map<const Vector>(obs.data(), dim);
  next_obs_.col(col) = Eigen::Map<const Vector>(next_obs.data(), dim);
  actions_[next_] = action;
  rewards_[next_] = reward;
  terminal_[next_] = terminal ? 1.0 : 0.0;
  next_ = (next_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

ReplayBuffer::Batch ReplayBuffer::sample(std::size_t n, RngState& rng) const {
  if (size_ == 0) throw UsageError("replay: sampling an empty buffer");
  Batch b;
  const auto dim = static_cast<Eigen::Index>(obs_dim_);
  const auto cols = static_cast<Eigen::Index>(n);
  b.obs.resize(dim, cols);
  b.next_obs.resize(dim, cols);
  b.actions.resize(n);
  b.rewards.resize(cols);
  b.terminal.resize(cols);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = rng.below(size_);
    const auto j = static_cast<Eigen::Index>(k);
    b.obs.col(j) = obs_.col(static_cast<Eigen::Index>(i));
    b.next_obs.col(j) = next_obs_.col(static_cast<Eigen::Index>(i));
    b.actions[k] = actions_[i];
    b.rewards[j] = rewards_[i];
    b.terminal[j] = terminal_[i];
  }
  return b;
}

namespace {

MlpSpec q_spec(std::size_t obs_dim, int num_actions, const DqnConfig& c) {
  c.validate();
  return {static_cast<int>(obs_dim), c.hidden, num_actions, Head::linear, false};
}

}  // namespace

DqnAgent::DqnAgent(std::size_t obs_dim, int num_actions, const DqnConfig& config, RngState& rng)
    : config_(config),
      online_(q_spec(obs_dim, num_actions, config), rng),
      target_(online_),
      adam_(online_.num_params(), {config.lr}),
      replay_(static_cast<std::size_t>(config.replay_capacity), obs_dim),
      rng_(rng()),
      epsilon_(config.eps_start) {}

Vector DqnAgent::q_values(std::span<const double> obs) const { return online_.forward(obs); }

int DqnAgent::act(std::span<const double> obs) {
  const int n = online_.spec().output_dim;
  if (rng_.uniform01() < epsilon_) return static_cast<int>(rng_.below(static_cast<std::uint64_t>(n)));
  const Vector q = q_values(obs);
  return argmax({q.data(), static_cast<std::size_t>(q.size())});
}

void DqnAgent::observe(std::span<const double> obs, int action, double reward,
                       std::span<const double> next_obs, bool terminated) {
  replay_.push(obs, action, reward, next_obs, terminated);
  ++steps_;
  if (replay_.size() >= static_cast<std::size_t>(config_.batch)) learn();
  if (steps_ % config_.target_sync == 0) {
    target_.params() = online_.params();
    ++syncs_;
  }
  epsilon_ = std::max(config_.eps_end, epsilon_ - config_.eps_decrement);
}

void DqnAgent::learn() {
  const auto batch = replay_.sample(static_cast<std::size_t>(config_.batch), rng_);
  const Matrix next_q = target_.forward(batch.next_obs);
  Mlp::Tape tape;
  const Matrix q = online_.forward(batch.obs, tape);

  const auto n = static_cast<Eigen::Index>(config_.batch);
  Matrix upstream = Matrix::Zero(q.rows(), n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double bootstrap = (1.0 - batch.terminal[j]) * config_.gamma * next_q.col(j).maxCoeff();
    const double y = batch.rewards[j] + bootstrap;
    const int a = batch.actions[static_cast<std::size_t>(j)];
    upstream(a, j) = 2.0 * (q(a, j) - y) / static_cast<double>(n);
  }
  Vector grads = Vector::Zero(online_.params().size());
  online_.backward(tape, upstream, grads);
  adam_.step(online_.params(), grads);
}

ReturnSeries train_dqn(EpisodicEnv& env, const DqnConfig& config, int episodes, RngState& rng) {
  DqnAgent agent(env.observation_size(), env.num_actions(), config, rng);
  ReturnSeries returns;
  returns.reserve(static_cast<std::size_t>(episodes));
  for (int e = 0; e < episodes; ++e) {
    auto obs = env.begin_episode();
    double total = 0.0;
    for (;;) {
      const int a = agent.act(obs);
      auto step = env.advance(a);
      agent.observe(obs, a, step.reward, step.observation, step.terminated);
      total += step.reward;
      obs = std::move(step.observation);
      if (step.done()) break;
    }
    returns.push_back(total);
  }
  return returns;
}

}  // namespace scjitai::agents
