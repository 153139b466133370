#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "scjitai/agents/dqn.hpp"
#include "scjitai/agents/ppo.hpp"
#include "scjitai/agents/reinforce.hpp"
#include "scjitai/agents/thompson.hpp"
#include "scjitai/env.hpp"

namespace scjitai::harness {

enum class ExperimentKind { learning_curves, traces, histograms, sigma_lookup };
enum class AgentKind { reinforce, dqn, ppo, ts };
enum class TracePolicy { always3, random };

std::string_view to_string(ExperimentKind kind);
std::string_view to_string(AgentKind kind);
std::string_view to_string(TracePolicy policy);
ExperimentKind experiment_kind_from_string(std::string_view name);
AgentKind agent_kind_from_string(std::string_view name);
TracePolicy trace_policy_from_string(std::string_view name);

inline constexpr AgentKind kAllAgents[] = {AgentKind::dqn, AgentKind::reinforce, AgentKind::ppo, AgentKind::ts};

// One labelled environment setting; used by traces (with a policy) and histograms.
struct Case {
  std::string label;
  EnvConfig env;
  TracePolicy policy = TracePolicy::always3;
};

struct HistogramSettings {
  int state_samples = 5000;
  int param_samples = 1000;
  int bins = 40;
  double h = 0.5;
  double d = 0.75;
  double s = 200.0;
};

struct LookupSettings {
  int samples = 5000;
  std::vector<double> sigmas{0.2, 0.3, 0.4, 0.8, 1.0, 2.0, 3.0, 10.0};
};

struct ExperimentConfig {
  std::string name = "custom";
  ExperimentKind kind = ExperimentKind::learning_curves;
  std::uint64_t seed = 0;

  // learning curves
  EnvConfig env;
  std::vector<AgentKind> agents{std::begin(kAllAgents), std::end(kAllAgents)};
  agents::ReinforceConfig reinforce;
  agents::DqnConfig dqn;
  agents::PpoConfig ppo;
  agents::TsConfig ts;
  int trials = 10;
  int episodes = 1500;
  int window = 100;  // trailing moving-average length

  // traces and histograms
  std::vector<Case> cases;
  int trace_steps = 30;
  HistogramSettings hist;

  LookupSettings lookup;

  void validate() const;  // throws ConfigError
};

/// Names accepted by preset(); grid presets are numbered from 1.
std::vector<std::string> preset_names();
ExperimentConfig preset(std::string_view name);  // throws ConfigError for unknown names

}  // namespace scjitai::harness
