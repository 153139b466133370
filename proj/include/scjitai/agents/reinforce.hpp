#pragma once

#include <vector>

#include "scjitai/agents/common.hpp"
#include "scjitai/mlp.hpp"

namespace scjitai::agents {

struct ReinforceConfig {
  int hidden = 128;
  int batch = 64;  // max transitions per gradient step
  double lr = 6e-4;

  void validate() const;
};

struct EpisodeTrace {
  std::vector<std::vector<double>> observations;
  std::vector<int> actions;
  std::vector<double> rewards;
};

/// Monte Carlo policy gradient with a softmax policy, no baseline. The policy
/// is updated after every episode, in minibatches of at most `batch` steps.
class ReinforceAgent {
 public:
  ReinforceAgent(std::size_t obs_dim, int num_actions, const ReinforceConfig& config, RngState& rng);

  Vector action_probs(std::span<const double> obs) const;
  int act(std::span<const double> obs);

  // For each minibatch M of consecutive steps, one Adam step on
  // -1/|M| * sum_{t in M} G_t log pi(a_t | o_t), G_t the undiscounted return-to-go.
  void update(const EpisodeTrace& episode);

  long updates() const { return adam_.steps(); }

  const Mlp& policy() const { return policy_; }

 private:
  ReinforceConfig config_;
  Mlp policy_;
  AdamState adam_;
  RngState action_rng_;
};

ReturnSeries train_reinforce(EpisodicEnv& env, const ReinforceConfig& config, int episodes, RngState& rng);

}  // namespace scjitai::agents
