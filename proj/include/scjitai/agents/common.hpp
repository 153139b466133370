#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "scjitai/env.hpp"
#include "scjitai/rng.hpp"

namespace scjitai::agents {

struct EnvStep {
  std::vector<double> observation;
  double reward = 0.0;
  bool terminated = false;
  bool truncated = false;

  bool done() const { return terminated || truncated; }
};

/// What a learner needs from an environment: fixed-size real observations,
/// four discrete actions, scalar rewards.
class EpisodicEnv {
 public:
  virtual ~EpisodicEnv() = default;
  virtual std::size_t observation_size() const = 0;
  virtual int num_actions() const = 0;
  virtual std::vector<double> begin_episode() = 0;
  virtual EnvStep advance(int action) = 0;
};

class StepCountAdapter final : public EpisodicEnv {
 public:
  explicit StepCountAdapter(StepCountEnv& env) : env_(env) {}

  std::size_t observation_size() const override { return env_.observation_size(); }
  int num_actions() const override { return kNumActions; }
  std::vector<double> begin_episode() override { return env_.reset().observation; }
  EnvStep advance(int action) override {
    auto r = env_.step(action);
    return {std::move(r.observation), r.reward, r.terminated, r.truncated};
  }

 private:
  StepCountEnv& env_;
};

// Index of the first maximum.
int argmax(std::span<const double> values);

int sample_categorical(RngState& rng, std::span<const double> probs);

// Undiscounted return per episode, one entry per episode.
using ReturnSeries = std::vector<double>;

}  // namespace scjitai::agents
