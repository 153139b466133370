#pragma once

#include <vector>

#include "scjitai/agents/common.hpp"
#include "scjitai/mlp.hpp"

namespace scjitai::agents {

struct DqnConfig {
  std::vector<int> hidden{128, 128};
  int batch = 64;
  double lr = 5e-4;
  double eps_start = 1.0;
  double eps_end = 0.01;
  double eps_decrement = 1e-3;  // per environment step
  int target_sync = 1000;       // environment steps
  int replay_capacity = 100000;
  double gamma = 0.99;

  void validate() const;
};

/// Fixed-capacity ring buffer of transitions, sampled uniformly with replacement.
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, std::size_t obs_dim);

  void push(std::span<const double> obs, int action, double reward, std::span<const double> next_obs,
            bool terminal);

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }

  struct Batch {
    Matrix obs;
    Matrix next_obs;
    std::vector<int> actions;
    Vector rewards;
    Vector terminal;
  };
  Batch sample(std::size_t n, RngState& rng) const;

 private:
  std::size_t capacity_;
  std::size_t obs_dim_;
  std::size_t size_ = 0;
  std::size_t next_ = 0;
  Matrix obs_;
  Matrix next_obs_;
  std::vector<int> actions_;
  std::vector<double> rewards_;
  std::vector<double> terminal_;
};

/// Q-learning with experience replay, a periodically synced target network and
/// linearly decaying epsilon-greedy exploration.
class DqnAgent {
 public:
  DqnAgent(std::size_t obs_dim, int num_actions, const DqnConfig& config, RngState& rng);

  // Epsilon-greedy; does not change epsilon.
  int act(std::span<const double> obs);
  Vector q_values(std::span<const double> obs) const;

  // Stores the transition, takes one gradient step once the buffer holds a
  // minibatch, copies online into target every target_sync steps, then decays
  // epsilon.
  // Bootstraps through truncation, not through termination.
  void observe(std::span<const double> obs, int action, double reward, std::span<const double> next_obs,
               bool terminated);

  double epsilon() const { return epsilon_; }
  void set_epsilon(double eps) { epsilon_ = eps; }
  long steps() const { return steps_; }
  long syncs() const { return syncs_; }
  const Mlp& online() const { return online_; }
  const Mlp& target() const { return target_; }
  const ReplayBuffer& replay() const { return replay_; }

 private:
  void learn();

  DqnConfig config_;
  Mlp online_;
  Mlp target_;
  AdamState adam_;
  ReplayBuffer replay_;
  RngState rng_;
  double epsilon_;
  long steps_ = 0;
  long syncs_ = 0;
};

ReturnSeries train_dqn(EpisodicEnv& env, const DqnConfig& config, int episodes, RngState& rng);

}  // namespace scjitai::agents
