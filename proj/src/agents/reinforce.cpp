#include "scjitai/agents/reinforce.hpp"

#include <algorithm>

#include "scjitai/errors.hpp"

namespace scjitai::agents {

void ReinforceConfig::validate() const {
  if (hidden <= 0 || batch <= 0 || !(lr > 0.0))
    throw ConfigError("reinforce: hidden, batch_size and lr must be positive");
}

namespace {

MlpSpec policy_spec(std::size_t obs_dim, int num_actions, const ReinforceConfig& c) {
  c.validate();
  return {static_cast<int>(obs_dim), {c.hidden}, num_actions, Head::softmax, true};
}

}  // namespace

ReinforceAgent::ReinforceAgent(std::size_t obs_dim, int num_actions, const ReinforceConfig& config,
                               RngState& rng)
    : config_(config),
      policy_(policy_spec(obs_dim, num_actions, config), rng),
      adam_(policy_.num_params(), {config.lr}),
      action_rng_(rng()) {}

Vector ReinforceAgent::action_probs(std::span<const double> obs) const { return policy_.forward(obs); }

int ReinforceAgent::act(std::span<const double> obs) {
  const Vector p = action_probs(obs);
  return sample_categorical(action_rng_, {p.data(), static_cast<std::size_t>(p.size())});
}

void ReinforceAgent::update(const EpisodeTrace& episode) {
  const std::size_t steps = episode.actions.size();
  if (steps == 0) return;
  if (episode.observations.size() != steps || episode.rewards.size() != steps)
    throw ShapeError("reinforce: episode trace lengths differ");

  std::vector<double> rtg(steps);
  double g = 0.0;
  for (std::size_t t = steps; t-- > 0;) rtg[t] = g += episode.rewards[t];

  const auto obs_dim = static_cast<Eigen::Index>(policy_.spec().input_dim);
  const auto batch = static_cast<std::size_t>(config_.batch);
  for (std::size_t start = 0; start < steps; start += batch) {
    const std::size_t end = std::min(steps, start + batch);
    const auto m = static_cast<Eigen::Index>(end - start);
    Matrix inputs(obs_dim, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto& o = episode.observations[start + static_cast<std::size_t>(j)];
      if (static_cast<Eigen::Index>(o.size()) != obs_dim) throw ShapeError("reinforce: observation size");
      inputs.col(j) = Eigen::Map<const Vector>(o.data(), obs_dim);
    }
    Mlp::Tape tape;
    const Matrix probs = policy_.forward(inputs, tape);
    // d/dz of -G log softmax(z)_a = -G (onehot(a) - p).
    Matrix upstream = probs;
    for (Eigen::Index j = 0; j < m; ++j) {
      const std::size_t t = start + static_cast<std::size_t>(j);
      upstream(episode.actions[t], j) -= 1.0;
      upstream.col(j) *= rtg[t] / static_cast<double>(m);
    }
    Vector grads = Vector::Zero(policy_.params().size());
    policy_.backward_logits(tape, upstream, grads);
    adam_.step(policy_.params(), grads);
  }
}

ReturnSeries train_reinforce(EpisodicEnv& env, const ReinforceConfig& config, int episodes, RngState& rng) {
  ReinforceAgent agent(env.observation_size(), env.num_actions(), config, rng);
  ReturnSeries returns;
  returns.reserve(static_cast<std::size_t>(episodes));
  for (int e = 0; e < episodes; ++e) {
    EpisodeTrace trace;
    auto obs = env.begin_episode();
    double total = 0.0;
    for (;;) {
      const int a = agent.act(obs);
      auto step = env.advance(a);
      trace.observations.push_back(std::move(obs));
      trace.actions.push_back(a);
      trace.rewards.push_back(step.reward);
      total += step.reward;
      obs = std::move(step.observation);
      if (step.done()) break;
    }
    returns.push_back(total);
    agent.update(trace);
  }
  return returns;
}

}  // namespace scjitai::agents
