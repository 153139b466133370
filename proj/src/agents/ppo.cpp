#include "scjitai/agents/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "scjitai/errors.hpp"

namespace scjitai::agents {

void PpoConfig::validate() const {
  if (actor_hidden.empty() || critic_hidden.empty() || batch <= 0 || !(lr > 0.0) || horizon <= 0 ||
      epochs <= 0)
    throw ConfigError("ppo: invalid network/batch/lr/horizon/epochs settings");
  if (!(clip > 0.0 && clip < 1.0)) throw ConfigError("ppo: clip must lie in (0, 1)");
  if (!(gamma > 0.0 && gamma <= 1.0) || !(gae_lambda > 0.0 && gae_lambda <= 1.0))
    throw ConfigError("ppo: gamma and gae_lambda must lie in (0, 1]");
}

std::vector<double> compute_gae(std::span<const double> rewards, std::span<const double> values,
                                std::span<const double> next_values, std::span<const std::uint8_t> episode_end,
                                double gamma, double lambda) {
  const std::size_t n = rewards.size();
  if (values.size() != n || next_values.size() != n || episode_end.size() != n)
    throw ShapeError("gae: input lengths differ");
  std::vector<double> adv(n);
  double running = 0.0;
  for (std::size_t t = n; t-- > 0;) {
    const double delta = rewards[t] + gamma * next_values[t] - values[t];
    const bool cut = episode_end[t] || t + 1 == n;
    running = delta + (cut ? 0.0 : gamma * lambda * running);
    adv[t] = running;
  }
  return adv;
}

ClippedTerm clipped_surrogate(double ratio, double advantage, double clip) {
  const double unclipped = ratio * advantage;
  const double clipped = std::clamp(ratio, 1.0 - clip, 1.0 + clip) * advantage;
  if (unclipped <= clipped) return {unclipped, advantage};
  return {clipped, 0.0};
}

PpoAgent::PpoAgent(std::size_t obs_dim, int num_actions, const PpoConfig& config, RngState& rng)
    : config_((config.validate(), config)),
      actor_({static_cast<int>(obs_dim), config.actor_hidden, num_actions, Head::softmax, true}, rng),
      critic_({static_cast<int>(obs_dim), config.critic_hidden, 1, Head::linear, false}, rng),
      actor_adam_(actor_.num_params(), {config.lr}),
      critic_adam_(critic_.num_params(), {config.lr}),
      rng_(rng()) {}

Vector PpoAgent::action_probs(std::span<const double> obs) const { return actor_.forward(obs); }

double PpoAgent::value(std::span<const double> obs) const { return critic_.forward(obs)[0]; }

PpoAgent::Decision PpoAgent::act(std::span<const double> obs) {
  const Vector p = action_probs(obs);
  const int a = sample_categorical(rng_, {p.data(), static_cast<std::size_t>(p.size())});
  return {a, std::log(p[a]), value(obs)};
}

void PpoAgent::observe(std::span<const double> obs, const Decision& decision, double reward,
                       std::span<const double> next_obs, bool terminated, bool truncated) {
  obs_.emplace_back(obs.begin(), obs.end());
  actions_.push_back(decision.action);
  log_probs_.push_back(decision.log_prob);
  values_.push_back(decision.value);
  rewards_.push_back(reward);
  next_values_.push_back(terminated ? 0.0 : value(next_obs));
  episode_end_.push_back(terminated || truncated ? 1 : 0);
  if (static_cast<int>(rewards_.size()) >= config_.horizon) update();
}

void PpoAgent::update() {
  const std::size_t n = rewards_.size();
  const std::vector<double> adv_raw =
      compute_gae(rewards_, values_, next_values_, episode_end_, config_.gamma, config_.gae_lambda);

  std::vector<double> returns(n);
  for (std::size_t i = 0; i < n; ++i) returns[i] = adv_raw[i] + values_[i];

  std::vector<double> adv = adv_raw;
  if (config_.normalize_advantages && n > 1) {
    const double mean = std::accumulate(adv.begin(), adv.end(), 0.0) / static_cast<double>(n);
    double var = 0.0;
    for (double a : adv) var += (a - mean) * (a - mean);
    const double sd = std::sqrt(var / static_cast<double>(n));
    for (double& a : adv) a = (a - mean) / (sd + 1e-8);
  }

  const auto obs_dim = static_cast<Eigen::Index>(actor_.spec().input_dim);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < config_.epochs; ++epoch) {
    // Fisher-Yates with the agent's stream.
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng_.below(i)]);

    for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(config_.batch)) {
      const std::size_t end = std::min(n, start + static_cast<std::size_t>(config_.batch));
      const auto m = static_cast<Eigen::Index>(end - start);
      Matrix inputs(obs_dim, m);
      for (Eigen::Index j = 0; j < m; ++j)
        inputs.col(j) = Eigen::Map<const Vector>(obs_[order[start + static_cast<std::size_t>(j)]].data(), obs_dim);

      Mlp::Tape actor_tape;
      const Matrix probs = actor_.forward(inputs, actor_tape);
      Matrix actor_up = Matrix::Zero(probs.rows(), m);
      for (Eigen::Index j = 0; j < m; ++j) {
        const std::size_t i = order[start + static_cast<std::size_t>(j)];
        const int a = actions_[i];
        const double ratio = std::exp(std::log(probs(a, j)) - log_probs_[i]);
        const auto term = clipped_surrogate(ratio, adv[i], config_.clip);
        if (term.d_ratio == 0.0) continue;
        // d ratio / d logits = ratio * (onehot(a) - p); loss is the negated mean.
        const double coef = -term.d_ratio * ratio / static_cast<double>(m);
        actor_up.col(j) = -coef * probs.col(j);
        actor_up(a, j) += coef;
      }
      Vector actor_grads = Vector::Zero(actor_.params().size());
      actor_.backward_logits(actor_tape, actor_up, actor_grads);
      actor_adam_.step(actor_.params(), actor_grads);

      Mlp::Tape critic_tape;
      const Matrix v = critic_.forward(inputs, critic_tape);
      Matrix critic_up(1, m);
      for (Eigen::Index j = 0; j < m; ++j) {
        const std::size_t i = order[start + static_cast<std::size_t>(j)];
        critic_up(0, j) = 2.0 * (v(0, j) - returns[i]) / static_cast<double>(m);
      }
      Vector critic_grads = Vector::Zero(critic_.params().size());
      critic_.backward(critic_tape, critic_up, critic_grads);
      critic_adam_.step(critic_.params(), critic_grads);
    }
  }

  ++updates_;
  obs_.clear();
  actions_.clear();
  log_probs_.clear();
  values_.clear();
  rewards_.clear();
  next_values_.clear();
  episode_end_.clear();
}

ReturnSeries train_ppo(EpisodicEnv& env, const PpoConfig& config, int episodes, RngState& rng) {
  PpoAgent agent(env.observation_size(), env.num_actions(), config, rng);
  ReturnSeries returns;
  returns.reserve(static_cast<std::size_t>(episodes));
  for (int e = 0; e < episodes; ++e) {
    auto obs = env.begin_episode();
    double total = 0.0;
    for (;;) {
      const auto decision = agent.act(obs);
      auto step = env.advance(decision.action);
      agent.observe(obs, decision, step.reward, step.observation, step.terminated, step.truncated);
      total += step.reward;
      obs = std::move(step.observation);
      if (step.done()) break;
    }
    returns.push_back(total);
  }
  return returns;
}

}  // namespace scjitai::agents
