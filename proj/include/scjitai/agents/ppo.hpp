#pragma once

#include <cstdint>
#include <vector>

#include "scjitai/agents/common.hpp"
#include "scjitai/mlp.hpp"

namespace scjitai::agents {

struct PpoConfig {
  std::vector<int> actor_hidden{256, 256};
  std::vector<int> critic_hidden{256, 256, 256};
  int batch = 64;
  double lr = 5e-3;
  int horizon = 20;  // environment steps per rollout
  double clip = 0.08;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  int epochs = 4;
  bool normalize_advantages = true;

  void validate() const;
};

/// Generalized advantage estimates for one rollout.
///
/// next_values[t] is the critic's value of the state reached after step t
/// (0 when that step terminated the episode); episode_end[t] marks steps after
/// which the next entry belongs to a new episode. The recursion is cut at
/// episode ends and at the rollout end.
std::vector<double> compute_gae(std::span<const double> rewards, std::span<const double> values,
                                std::span<const double> next_values, std::span<const std::uint8_t> episode_end,
                                double gamma, double lambda);

// Clipped surrogate min(r A, clip(r, 1 - c, 1 + c) A) and its derivative in r.
struct ClippedTerm {
  double value;
  double d_ratio;
};
ClippedTerm clipped_surrogate(double ratio, double advantage, double clip);

/// PPO-clip with separate actor and critic networks.
class PpoAgent {
 public:
  PpoAgent(std::size_t obs_dim, int num_actions, const PpoConfig& config, RngState& rng);

  struct Decision {
    int action;
    double log_prob;
    double value;
  };
  Decision act(std::span<const double> obs);
  double value(std::span<const double> obs) const;
  Vector action_probs(std::span<const double> obs) const;

  // Appends one step; runs an update once `horizon` steps are buffered.
  // `next_obs` is used to bootstrap when the step did not terminate.
  void observe(std::span<const double> obs, const Decision& decision, double reward,
               std::span<const double> next_obs, bool terminated, bool truncated);

  std::size_t buffered() const { return rewards_.size(); }
  long updates() const { return updates_; }
  const Mlp& actor() const { return actor_; }
  const Mlp& critic() const { return critic_; }

 private:
  void update();

  PpoConfig config_;
  Mlp actor_;
  Mlp critic_;
  AdamState actor_adam_;
  AdamState critic_adam_;
  RngState rng_;
  long updates_ = 0;

  std::vector<std::vector<double>> obs_;
  std::vector<int> actions_;
  std::vector<double> log_probs_;
  std::vector<double> values_;
  std::vector<double> rewards_;
  std::vector<double> next_values_;
  std::vector<std::uint8_t> episode_end_;
};

ReturnSeries train_ppo(EpisodicEnv& env, const PpoConfig& config, int episodes, RngState& rng);

}  // namespace scjitai::agents
