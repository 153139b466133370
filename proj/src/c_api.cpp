#include "scjitai/c_api.h"

#include <atomic>
#include <cstring>
#include <exception>
#include <string>

#include "scjitai/env.hpp"
#include "scjitai/errors.hpp"

struct scj_env {
  scjitai::StepCountEnv env;
};

namespace {

std::atomic<int64_t> g_live{0};
thread_local std::string g_last_error;

template <typename F>
int64_t guarded(F&& body) {
  try {
    body();
    return SCJ_OK;
  } catch (const scjitai::DomainError& e) {
    g_last_error = e.what();
    return SCJ_DOMAIN_ERROR;
  } catch (const scjitai::ConfigError& e) {
    g_last_error = e.what();
    return SCJ_CONFIG_ERROR;
  } catch (const scjitai::UsageError& e) {
    g_last_error = e.what();
    return SCJ_USAGE_ERROR;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SCJ_INTERNAL_ERROR;
  }
}

void write_info(const scjitai::StepInfo& info, double* out) {
  if (out == nullptr) return;
  const auto& s = info.state;
  const double values[SCJ_INFO_SIZE] = {
      static_cast<double>(s.context.c), s.context.x, s.context.p, static_cast<double>(s.context.l),
      s.h, s.d, s.s, static_cast<double>(s.t),
      info.params.delta_h, info.params.eps_h, info.params.delta_d, info.params.eps_d};
  std::memcpy(out, values, sizeof(values));
}

void write_obs(const std::vector<double>& obs, double* out) {
  if (out != nullptr) std::memcpy(out, obs.data(), obs.size() * sizeof(double));
}

void require_handle(const void* p) {
  if (p == nullptr) throw scjitai::UsageError("null environment handle");
}

}  // namespace

extern "C" {

void scj_default_params(scj_params* out) {
  if (out == nullptr) return;
  const scjitai::DynamicsParams d;
  const scjitai::StochasticityConfig s;
  *out = scj_params{d.sigma, d.delta_h, d.eps_h, d.delta_d, d.eps_d, d.rho1, d.rho2, d.m_s,
                    d.d_threshold, d.horizon, static_cast<int64_t>(s.mode), s.sigma_s, s.a_hd,
                    s.a_de, s.kappa_h, s.kappa_d, s.kappa_delta_h, s.kappa_eps_h, s.kappa_delta_d,
                    s.kappa_eps_d};
}

int64_t scj_env_create(const scj_params* params, const char* obs_names, uint64_t seed, scj_env** out) {
  return guarded([&] {
    if (params == nullptr || obs_names == nullptr || out == nullptr)
      throw scjitai::UsageError("scj_env_create: null argument");
    scjitai::DynamicsParams d;
    d.sigma = params->sigma;
    d.delta_h = params->delta_h;
    d.eps_h = params->epsilon_h;
    d.delta_d = params->delta_d;
    d.eps_d = params->epsilon_d;
    d.rho1 = params->rho1;
    d.rho2 = params->rho2;
    d.m_s = params->m_s;
    d.d_threshold = params->D_threshold;
    d.horizon = static_cast<int>(params->horizon);
    scjitai::StochasticityConfig s;
    s.mode = scjitai::noise_mode_from_version(static_cast<int>(params->n_version));
    s.sigma_s = params->sigma_s;
    s.a_hd = params->a_hd;
    s.a_de = params->a_de;
    s.kappa_h = params->kappa_h;
    s.kappa_d = params->kappa_d;
    s.kappa_delta_h = params->kappa_delta_h;
    s.kappa_eps_h = params->kappa_epsilon_h;
    s.kappa_delta_d = params->kappa_delta_d;
    s.kappa_eps_d = params->kappa_epsilon_d;
    *out = new scj_env{scjitai::StepCountEnv(d, s, scjitai::ObsSpec::parse(obs_names), seed)};
    ++g_live;
  });
}

void scj_env_destroy(scj_env* env) {
  if (env == nullptr) return;
  delete env;
  --g_live;
}

int64_t scj_env_obs_size(const scj_env* env) {
  return env == nullptr ? -1 : static_cast<int64_t>(env->env.observation_size());
}

int64_t scj_env_reset(scj_env* env, int64_t has_seed, uint64_t seed, double* obs, double* info) {
  return guarded([&] {
    require_handle(env);
    auto r = has_seed ? env->env.reset(seed) : env->env.reset();
    write_obs(r.observation, obs);
    write_info(r.info, info);
  });
}

int64_t scj_env_step(scj_env* env, int64_t action, double* obs, double* reward,
                     int64_t* terminated, int64_t* truncated, double* info) {
  return guarded([&] {
    require_handle(env);
    if (action < 0 || action >= scjitai::kNumActions)
      throw scjitai::DomainError("action must be in {0,1,2,3}, got " + std::to_string(action));
    auto r = env->env.step(static_cast<int>(action));
    write_obs(r.observation, obs);
    if (reward != nullptr) *reward = r.reward;
    if (terminated != nullptr) *terminated = r.terminated ? 1 : 0;
    if (truncated != nullptr) *truncated = r.truncated ? 1 : 0;
    write_info(r.info, info);
  });
}

int64_t scj_env_get(const scj_env* env, char var, double* out) {
  return guarded([&] {
    require_handle(env);
    if (out == nullptr) throw scjitai::UsageError("scj_env_get: null output");
    const auto& e = env->env;
    switch (var) {
      case 'C': *out = e.get_C(); break;
      case 'P': *out = e.get_P(); break;
      case 'L': *out = e.get_L(); break;
      case 'H': *out = e.get_H(); break;
      case 'D': *out = e.get_D(); break;
      case 'S': *out = e.get_S(); break;
      default: throw scjitai::ConfigError(std::string("unknown variable '") + var + "'");
    }
  });
}

int64_t scj_live_handles(void) { return g_live.load(); }

const char* scj_last_error(void) { return g_last_error.c_str(); }

}  // extern "C"
