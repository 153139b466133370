#include "scjitai/harness/json_io.hpp"

#include <fstream>
#include <set>

#include "scjitai/errors.hpp"

namespace scjitai::harness {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value for '" + std::string(key) + "' in " + where);
  }
}

json reinforce_json(const agents::ReinforceConfig& c) {
  return {{"hidden", c.hidden}, {"batch_size", c.batch}, {"lr", c.lr}};
}

agents::ReinforceConfig reinforce_from(const json& j, agents::ReinforceConfig c) {
  reject_unknown(j, {"hidden", "batch_size", "lr"}, "reinforce");
  read(j, "hidden", c.hidden, "reinforce");
  read(j, "batch_size", c.batch, "reinforce");
  read(j, "lr", c.lr, "reinforce");
  return c;
}

json dqn_json(const agents::DqnConfig& c) {
  return {{"hidden", c.hidden},
          {"batch_size", c.batch},
          {"lr", c.lr},
          {"epsilon_start", c.eps_start},
          {"epsilon_end", c.eps_end},
          {"epsilon_decrement", c.eps_decrement},
          {"target_sync", c.target_sync},
          {"replay_capacity", c.replay_capacity},
          {"gamma", c.gamma}};
}

agents::DqnConfig dqn_from(const json& j, agents::DqnConfig c) {
  const std::string w = "dqn";
  reject_unknown(j,
                 {"hidden", "batch_size", "lr", "epsilon_start", "epsilon_end", "epsilon_decrement",
                  "target_sync", "replay_capacity", "gamma"},
                 w);
  read(j, "hidden", c.hidden, w);
  read(j, "batch_size", c.batch, w);
  read(j, "lr", c.lr, w);
  read(j, "epsilon_start", c.eps_start, w);
  read(j, "epsilon_end", c.eps_end, w);
  read(j, "epsilon_decrement", c.eps_decrement, w);
  read(j, "target_sync", c.target_sync, w);
  read(j, "replay_capacity", c.replay_capacity, w);
  read(j, "gamma", c.gamma, w);
  return c;
}

json ppo_json(const agents::PpoConfig& c) {
  return {{"actor_hidden", c.actor_hidden},
          {"critic_hidden", c.critic_hidden},
          {"batch_size", c.batch},
          {"lr", c.lr},
          {"horizon", c.horizon},
          {"clip", c.clip},
          {"gamma", c.gamma},
          {"gae_lambda", c.gae_lambda},
          {"epochs", c.epochs},
          {"normalize_advantages", c.normalize_advantages}};
}

agents::PpoConfig ppo_from(const json& j, agents::PpoConfig c) {
  const std::string w = "ppo";
  reject_unknown(j,
                 {"actor_hidden", "critic_hidden", "batch_size", "lr", "horizon", "clip", "gamma", "gae_lambda",
                  "epochs", "normalize_advantages"},
                 w);
  read(j, "actor_hidden", c.actor_hidden, w);
  read(j, "critic_hidden", c.critic_hidden, w);
  read(j, "batch_size", c.batch, w);
  read(j, "lr", c.lr, w);
  read(j, "horizon", c.horizon, w);
  read(j, "clip", c.clip, w);
  read(j, "gamma", c.gamma, w);
  read(j, "gae_lambda", c.gae_lambda, w);
  read(j, "epochs", c.epochs, w);
  read(j, "normalize_advantages", c.normalize_advantages, w);
  return c;
}

json ts_json(const agents::TsConfig& c) {
  return {{"prior_mean", c.prior_mean}, {"prior_var", c.prior_var}, {"noise_var", c.noise_var},
          {"intercept", c.intercept}};
}

agents::TsConfig ts_from(const json& j, agents::TsConfig c) {
  reject_unknown(j, {"prior_mean", "prior_var", "noise_var", "intercept"}, "ts");
  read(j, "prior_mean", c.prior_mean, "ts");
  read(j, "prior_var", c.prior_var, "ts");
  read(j, "noise_var", c.noise_var, "ts");
  read(j, "intercept", c.intercept, "ts");
  return c;
}

}  // namespace

json env_to_json(const EnvConfig& env) {
  const auto& p = env.dynamics;
  const auto& s = env.stochasticity;
  return {{"sigma", p.sigma},
          {"delta_h", p.delta_h},
          {"epsilon_h", p.eps_h},
          {"delta_d", p.delta_d},
          {"epsilon_d", p.eps_d},
          {"rho1", p.rho1},
          {"rho2", p.rho2},
          {"m_s", p.m_s},
          {"D_threshold", p.d_threshold},
          {"horizon", p.horizon},
          {"n_version", static_cast<int>(s.mode)},
          {"a_hd", s.a_hd},
          {"a_de", s.a_de},
          {"sigma_s", s.sigma_s},
          {"kappa_h", s.kappa_h},
          {"kappa_d", s.kappa_d},
          {"kappa_delta_h", s.kappa_delta_h},
          {"kappa_epsilon_h", s.kappa_eps_h},
          {"kappa_delta_d", s.kappa_delta_d},
          {"kappa_epsilon_d", s.kappa_eps_d},
          {"chosen_obs_names", env.obs.names()}};
}

EnvConfig env_from_json(const json& j, EnvConfig e) {
  const std::string w = "env";
  reject_unknown(j,
                 {"sigma", "delta_h", "epsilon_h", "delta_d", "epsilon_d", "rho1", "rho2", "m_s", "D_threshold",
                  "horizon", "n_version", "a_hd", "a_de", "sigma_s", "kappa_h", "kappa_d", "kappa_delta_h",
                  "kappa_epsilon_h", "kappa_delta_d", "kappa_epsilon_d", "chosen_obs_names"},
                 w);
  auto& p = e.dynamics;
  auto& s = e.stochasticity;
  read(j, "sigma", p.sigma, w);
  read(j, "delta_h", p.delta_h, w);
  read(j, "epsilon_h", p.eps_h, w);
  read(j, "delta_d", p.delta_d, w);
  read(j, "epsilon_d", p.eps_d, w);
  read(j, "rho1", p.rho1, w);
  read(j, "rho2", p.rho2, w);
  read(j, "m_s", p.m_s, w);
  read(j, "D_threshold", p.d_threshold, w);
  read(j, "horizon", p.horizon, w);
  if (j.contains("n_version")) {
    int v = 0;
    read(j, "n_version", v, w);
    s.mode = noise_mode_from_version(v);
  }
  read(j, "a_hd", s.a_hd, w);
  read(j, "a_de", s.a_de, w);
  read(j, "sigma_s", s.sigma_s, w);
  read(j, "kappa_h", s.kappa_h, w);
  read(j, "kappa_d", s.kappa_d, w);
  read(j, "kappa_delta_h", s.kappa_delta_h, w);
  read(j, "kappa_epsilon_h", s.kappa_eps_h, w);
  read(j, "kappa_delta_d", s.kappa_delta_d, w);
  read(j, "kappa_epsilon_d", s.kappa_eps_d, w);
  if (j.contains("chosen_obs_names")) {
    std::vector<std::string> names;
    read(j, "chosen_obs_names", names, w);
    e.obs = ObsSpec(names);
  }
  return e;
}

json to_json(const ExperimentConfig& cfg) {
  json j = {{"name", cfg.name}, {"experiment", std::string(to_string(cfg.kind))}, {"seed", cfg.seed}};
  switch (cfg.kind) {
    case ExperimentKind::learning_curves: {
      json agents = json::array();
      for (auto a : cfg.agents) agents.push_back(std::string(to_string(a)));
      j["agents"] = agents;
      j["trials"] = cfg.trials;
      j["episodes"] = cfg.episodes;
      j["window"] = cfg.window;
      j["env"] = env_to_json(cfg.env);
      j["reinforce"] = reinforce_json(cfg.reinforce);
      j["dqn"] = dqn_json(cfg.dqn);
      j["ppo"] = ppo_json(cfg.ppo);
      j["ts"] = ts_json(cfg.ts);
      break;
    }
    case ExperimentKind::traces:
    case ExperimentKind::histograms: {
      json cases = json::array();
      for (const auto& c : cfg.cases) {
        json cj = {{"label", c.label}, {"env", env_to_json(c.env)}};
        if (cfg.kind == ExperimentKind::traces) cj["policy"] = std::string(to_string(c.policy));
        cases.push_back(cj);
      }
      j["cases"] = cases;
      if (cfg.kind == ExperimentKind::traces) {
        j["trace_steps"] = cfg.trace_steps;
      } else {
        j["hist"] = {{"state_samples", cfg.hist.state_samples}, {"param_samples", cfg.hist.param_samples},
                     {"bins", cfg.hist.bins}, {"h", cfg.hist.h}, {"d", cfg.hist.d}, {"s", cfg.hist.s}};
      }
      break;
    }
    case ExperimentKind::sigma_lookup:
      j["lookup"] = {{"samples", cfg.lookup.samples}, {"sigmas", cfg.lookup.sigmas}};
      break;
  }
  return j;
}

ExperimentConfig config_from_json(const json& j, ExperimentConfig c) {
  const std::string w = "config";
  reject_unknown(j,
                 {"name", "experiment", "seed", "agents", "trials", "episodes", "window", "env", "reinforce", "dqn",
                  "ppo", "ts", "cases", "trace_steps", "hist", "lookup"},
                 w);
  read(j, "name", c.name, w);
  if (j.contains("experiment")) {
    std::string kind;
    read(j, "experiment", kind, w);
    c.kind = experiment_kind_from_string(kind);
  }
  read(j, "seed", c.seed, w);
  if (j.contains("agents")) {
    std::vector<std::string> names;
    read(j, "agents", names, w);
    c.agents.clear();
    for (const auto& n : names) c.agents.push_back(agent_kind_from_string(n));
  }
  read(j, "trials", c.trials, w);
  read(j, "episodes", c.episodes, w);
  read(j, "window", c.window, w);
  if (j.contains("env")) c.env = env_from_json(j["env"], c.env);
  if (j.contains("reinforce")) c.reinforce = reinforce_from(j["reinforce"], c.reinforce);
  if (j.contains("dqn")) c.dqn = dqn_from(j["dqn"], c.dqn);
  if (j.contains("ppo")) c.ppo = ppo_from(j["ppo"], c.ppo);
  if (j.contains("ts")) c.ts = ts_from(j["ts"], c.ts);
  if (j.contains("cases")) {
    if (!j["cases"].is_array()) throw ConfigError("'cases' must be an array");
    c.cases.clear();
    for (const auto& cj : j["cases"]) {
      reject_unknown(cj, {"label", "env", "policy"}, "case");
      Case k;
      read(cj, "label", k.label, "case");
      if (cj.contains("env")) k.env = env_from_json(cj["env"]);
      if (cj.contains("policy")) {
        std::string policy;
        read(cj, "policy", policy, "case");
        k.policy = trace_policy_from_string(policy);
      }
      c.cases.push_back(std::move(k));
    }
  }
  read(j, "trace_steps", c.trace_steps, w);
  if (j.contains("hist")) {
    const auto& h = j["hist"];
    reject_unknown(h, {"state_samples", "param_samples", "bins", "h", "d", "s"}, "hist");
    read(h, "state_samples", c.hist.state_samples, "hist");
    read(h, "param_samples", c.hist.param_samples, "hist");
    read(h, "bins", c.hist.bins, "hist");
    read(h, "h", c.hist.h, "hist");
    read(h, "d", c.hist.d, "hist");
    read(h, "s", c.hist.s, "hist");
  }
  if (j.contains("lookup")) {
    const auto& l = j["lookup"];
    reject_unknown(l, {"samples", "sigmas"}, "lookup");
    read(l, "samples", c.lookup.samples, "lookup");
    read(l, "sigmas", c.lookup.sigmas, "lookup");
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace scjitai::harness
