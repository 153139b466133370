#include "scjitai/harness/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>

#include "scjitai/errors.hpp"

namespace scjitai::harness {

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::learning_curves: return "learning_curves";
    case ExperimentKind::traces: return "traces";
    case ExperimentKind::histograms: return "histograms";
    case ExperimentKind::sigma_lookup: return "sigma_lookup";
  }
  return "?";
}

std::string_view to_string(AgentKind kind) {
  switch (kind) {
    case AgentKind::reinforce: return "reinforce";
    case AgentKind::dqn: return "dqn";
    case AgentKind::ppo: return "ppo";
    case AgentKind::ts: return "ts";
  }
  return "?";
}

std::string_view to_string(TracePolicy policy) {
  return policy == TracePolicy::always3 ? "always3" : "random";
}

ExperimentKind experiment_kind_from_string(std::string_view name) {
  for (auto k : {ExperimentKind::learning_curves, ExperimentKind::traces, ExperimentKind::histograms,
                 ExperimentKind::sigma_lookup})
    if (to_string(k) == name) return k;
  throw ConfigError("unknown experiment kind '" + std::string(name) + "'");
}

AgentKind agent_kind_from_string(std::string_view name) {
  for (auto k : kAllAgents)
    if (to_string(k) == name) return k;
  throw ConfigError("unknown agent '" + std::string(name) + "'");
}

TracePolicy trace_policy_from_string(std::string_view name) {
  if (name == "always3") return TracePolicy::always3;
  if (name == "random") return TracePolicy::random;
  throw ConfigError("unknown trace policy '" + std::string(name) + "' (expected always3 or random)");
}

void ExperimentConfig::validate() const {
  auto check_env = [](const EnvConfig& e) {
    e.dynamics.validate();
    e.stochasticity.validate();
  };
  switch (kind) {
    case ExperimentKind::learning_curves:
      if (trials < 1) throw ConfigError("trials must be >= 1");
      if (episodes < 1) throw ConfigError("episodes must be >= 1");
      if (window < 1) throw ConfigError("window must be >= 1");
      if (agents.empty()) throw ConfigError("at least one agent must be selected");
      for (std::size_t i = 0; i < agents.size(); ++i)
        if (std::count(agents.begin(), agents.end(), agents[i]) > 1)
          throw ConfigError("agent '" + std::string(to_string(agents[i])) + "' selected twice");
      check_env(env);
      reinforce.validate();
      dqn.validate();
      ppo.validate();
      ts.validate();
      break;
    case ExperimentKind::traces:
    case ExperimentKind::histograms:
      if (cases.empty()) throw ConfigError("at least one case is required");
      for (const auto& c : cases) {
        if (c.label.empty() || c.label.find_first_of("/\\ ") != std::string::npos)
          throw ConfigError("case labels must be non-empty and contain no spaces or slashes");
        check_env(c.env);
      }
      if (kind == ExperimentKind::traces && trace_steps < 1) throw ConfigError("trace_steps must be >= 1");
      if (kind == ExperimentKind::histograms) {
        if (hist.state_samples < 1 || hist.param_samples < 1 || hist.bins < 1)
          throw ConfigError("histogram sample and bin counts must be >= 1");
        if (!(hist.h >= 0.0 && hist.h <= 1.0) || !(hist.d >= 0.0 && hist.d <= 1.0) || !(hist.s > 0.0))
          throw ConfigError("histogram centers need h, d in [0, 1] and s > 0");
      }
      break;
    case ExperimentKind::sigma_lookup:
      if (lookup.samples < 1000) throw ConfigError("lookup needs at least 1000 samples");
      if (lookup.sigmas.empty()) throw ConfigError("lookup needs at least one sigma");
      for (double s : lookup.sigmas)
        if (!(s > 0.0)) throw ConfigError("lookup sigmas must be > 0");
      break;
  }
}

namespace {

EnvConfig uniform_env(std::vector<ObsVar> obs, double sigma, double a_hd, double sigma_s, double a_de) {
  EnvConfig e;
  e.obs = ObsSpec(std::move(obs));
  e.dynamics.sigma = sigma;
  e.stochasticity.mode = NoiseMode::uniform;
  e.stochasticity.a_hd = a_hd;
  e.stochasticity.a_de = a_de;
  e.stochasticity.sigma_s = sigma_s;
  return e;
}

EnvConfig beta_env(std::vector<ObsVar> obs, double sigma, double kappa, double sigma_s) {
  EnvConfig e;
  e.obs = ObsSpec(std::move(obs));
  e.dynamics.sigma = sigma;
  auto& st = e.stochasticity;
  st.mode = NoiseMode::beta;
  st.sigma_s = sigma_s;
  st.kappa_h = st.kappa_d = st.kappa_delta_h = st.kappa_eps_h = st.kappa_delta_d = st.kappa_eps_d = kappa;
  return e;
}

const std::vector<ObsVar> kCHD{ObsVar::C, ObsVar::H, ObsVar::D};
const std::vector<ObsVar> kLHD{ObsVar::L, ObsVar::H, ObsVar::D};
const std::vector<ObsVar> kCPLHD{ObsVar::C, ObsVar::P, ObsVar::L, ObsVar::H, ObsVar::D};

// [sigma, a_hd, sigma_s, a_de]
constexpr std::array<std::array<double, 4>, 12> kUniformTraceGrid{{
    {0.1, 0.05, 2.5, 0.05}, {0.8, 0.05, 2.5, 0.05}, {1.0, 0.05, 2.5, 0.05}, {2.0, 0.05, 2.5, 0.05},
    {0.1, 0.2, 10.0, 0.2},  {0.8, 0.2, 10.0, 0.2},  {1.0, 0.2, 10.0, 0.2},  {2.0, 0.2, 10.0, 0.2},
    {0.1, 0.2, 20.0, 0.5},  {0.8, 0.2, 20.0, 0.5},  {1.0, 0.2, 20.0, 0.5},  {2.0, 0.2, 20.0, 0.5},
}};
constexpr std::array<double, 3> kBetaKappas{1.0, 20.0, 100.0};
constexpr std::array<double, 3> kBetaSigmaS{2.5, 10.0, 20.0};
constexpr std::array<double, 3> kBetaSigmas{0.1, 0.8, 2.0};

ExperimentConfig curves(std::string name, EnvConfig env) {
  ExperimentConfig c;
  c.name = std::move(name);
  c.kind = ExperimentKind::learning_curves;
  c.env = std::move(env);
  return c;
}

ExperimentConfig traces(std::string name, const std::vector<std::pair<std::string, EnvConfig>>& envs) {
  ExperimentConfig c;
  c.name = std::move(name);
  c.kind = ExperimentKind::traces;
  for (auto [label, env] : envs) {
    env.obs = ObsSpec(kCPLHD);
    env.dynamics.d_threshold = 1.5;
    for (auto policy : {TracePolicy::always3, TracePolicy::random})
      c.cases.push_back({label + "-" + std::string(to_string(policy)), env, policy});
  }
  return c;
}

EnvConfig deterministic_trace_env() {
  EnvConfig e;
  e.dynamics.sigma = 0.01;
  return e;
}

// Parses the numeric suffix of "prefix-<k>" with 1 <= k <= count.
int grid_index(std::string_view name, std::string_view prefix, int count) {
  if (name.size() <= prefix.size() || name.substr(0, prefix.size()) != prefix) return 0;
  const auto digits = name.substr(prefix.size());
  int k = 0;
  const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
  if (ec != std::errc() || end != digits.data() + digits.size() || k < 1 || k > count) return 0;
  return k;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names{"fig1b",       "appendix-h-a", "appendix-h-b", "appendix-h-c",
                                 "appendix-h-d", "appendix-f",   "appendix-e2",  "lookup"};
  for (std::size_t k = 1; k <= kUniformTraceGrid.size(); ++k) names.push_back("appendix-f-uniform-" + std::to_string(k));
  for (int k = 1; k <= 27; ++k) names.push_back("appendix-f-beta-" + std::to_string(k));
  return names;
}

ExperimentConfig preset(std::string_view name) {
  const std::string n(name);
  if (n == "fig1b") return curves(n, uniform_env(kCHD, 2.0, 0.2, 20.0, 0.5));
  if (n == "appendix-h-a") return curves(n, uniform_env(kLHD, 0.1, 0.05, 2.5, 0.05));
  if (n == "appendix-h-b") return curves(n, uniform_env(kLHD, 0.1, 0.2, 20.0, 0.5));
  if (n == "appendix-h-c") return curves(n, uniform_env(kLHD, 0.8, 0.05, 2.5, 0.05));
  if (n == "appendix-h-d") return curves(n, uniform_env(kLHD, 0.8, 0.2, 20.0, 0.5));

  if (n == "appendix-f")
    return traces(n, {{"deterministic", deterministic_trace_env()},
                      {"uniform", uniform_env(kCPLHD, 2.0, 0.2, 20.0, 0.5)},
                      {"beta", beta_env(kCPLHD, 2.0, 100.0, 20.0)}});
  if (int k = grid_index(n, "appendix-f-uniform-", static_cast<int>(kUniformTraceGrid.size()))) {
    const auto& g = kUniformTraceGrid[static_cast<std::size_t>(k - 1)];
    return traces(n, {{"uniform", uniform_env(kCPLHD, g[0], g[1], g[2], g[3])}});
  }
  if (int k = grid_index(n, "appendix-f-beta-", 27)) {
    // Enumerated kappa-major, then sigma_s, then sigma.
    const auto i = static_cast<std::size_t>(k - 1);
    return traces(n, {{"beta", beta_env(kCPLHD, kBetaSigmas[i % 3], kBetaKappas[i / 9], kBetaSigmaS[(i / 3) % 3])}});
  }

  if (n == "appendix-e2") {
    ExperimentConfig c;
    c.name = n;
    c.kind = ExperimentKind::histograms;
    auto wide_uniform = uniform_env(kCHD, 0.4, 0.5, 10.0, 0.5);
    auto narrow_uniform = uniform_env(kCHD, 0.4, 0.2, 2.0, 0.2);
    auto wide_beta = beta_env(kCHD, 0.4, 100.0, 10.0);
    wide_beta.stochasticity.kappa_h = wide_beta.stochasticity.kappa_d = 200.0;
    auto narrow_beta = beta_env(kCHD, 0.4, 1000.0, 2.0);
    c.cases = {{"uniform-wide", wide_uniform},
               {"uniform-narrow", narrow_uniform},
               {"beta-wide", wide_beta},
               {"beta-narrow", narrow_beta}};
    return c;
  }
  if (n == "lookup") {
    ExperimentConfig c;
    c.name = n;
    c.kind = ExperimentKind::sigma_lookup;
    return c;
  }
  throw ConfigError("unknown preset '" + n + "'");
}

}  // namespace scjitai::harness
