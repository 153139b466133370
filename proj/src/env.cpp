#include "scjitai/env.hpp"

#include <algorithm>
#include <utility>

#include "scjitai/errors.hpp"

namespace scjitai {

namespace {

ObsVar parse_var(const std::string& name) {
  if (name == "C") return ObsVar::C;
  if (name == "P") return ObsVar::P;
  if (name == "L") return ObsVar::L;
  if (name == "H") return ObsVar::H;
  if (name == "D") return ObsVar::D;
  if (name == "S") return ObsVar::S;
  throw ConfigError("unknown observation name '" + name + "' (expected one of C, P, L, H, D, S)");
}

double value_of(const SimState& s, ObsVar v) {
  switch (v) {
    case ObsVar::C: return s.context.c;
    case ObsVar::P: return s.context.p;
    case ObsVar::L: return s.context.l;
    case ObsVar::H: return s.h;
    case ObsVar::D: return s.d;
    case ObsVar::S: return s.s;
  }
  return 0.0;
}

std::vector<ObsVar> checked(std::vector<ObsVar> vars) {
  if (vars.empty()) throw ConfigError("observation spec must name at least one variable");
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (std::find(vars.begin(), vars.begin() + static_cast<std::ptrdiff_t>(i), vars[i]) !=
        vars.begin() + static_cast<std::ptrdiff_t>(i))
      throw ConfigError(std::string("duplicate observation name '") + to_char(vars[i]) + "'");
  }
  return vars;
}

}  // namespace

char to_char(ObsVar v) { return "CPLHDS"[static_cast<int>(v)]; }

ObsSpec::ObsSpec(const std::vector<std::string>& names) {
  std::vector<ObsVar> vars;
  vars.reserve(names.size());
  for (const auto& n : names) vars.push_back(parse_var(n));
  vars_ = checked(std::move(vars));
}

ObsSpec::ObsSpec(std::vector<ObsVar> vars) : vars_(checked(std::move(vars))) {}

ObsSpec ObsSpec::parse(const std::string& letters) {
  std::vector<std::string> names;
  const bool separated = letters.find_first_of(", []'\"") != std::string::npos;
  std::string current;
  for (char ch : letters) {
    if (!separated) {
      names.emplace_back(1, ch);
    } else if (ch == ',' || ch == ' ' || ch == '[' || ch == ']' || ch == '\'' || ch == '"') {
      if (!current.empty()) names.push_back(std::exchange(current, {}));
    } else {
      current += ch;
    }
  }
  if (!current.empty()) names.push_back(current);
  return ObsSpec(names);
}

std::vector<std::string> ObsSpec::names() const {
  std::vector<std::string> out;
  for (auto v : vars_) out.emplace_back(1, to_char(v));
  return out;
}

void ObsSpec::project(const SimState& state, std::span<double> out) const {
  if (out.size() != vars_.size()) throw ShapeError("observation buffer has wrong length");
  for (std::size_t i = 0; i < vars_.size(); ++i) out[i] = value_of(state, vars_[i]);
}

std::vector<double> ObsSpec::project(const SimState& state) const {
  std::vector<double> out(vars_.size());
  project(state, out);
  return out;
}

std::map<std::string, double> StepInfo::as_map() const {
  return {
      {"C", static_cast<double>(state.context.c)},
      {"X", state.context.x},
      {"P", state.context.p},
      {"L", static_cast<double>(state.context.l)},
      {"H", state.h},
      {"D", state.d},
      {"S", state.s},
      {"t", static_cast<double>(state.t)},
      {"delta_h", params.delta_h},
      {"epsilon_h", params.eps_h},
      {"delta_d", params.delta_d},
      {"epsilon_d", params.eps_d},
  };
}

StepCountEnv::StepCountEnv(const DynamicsParams& dynamics, const StochasticityConfig& stochasticity,
                           ObsSpec obs, std::uint64_t seed)
    : dynamics_(dynamics), stoch_(stochasticity), obs_(std::move(obs)), rng_(seed) {
  dynamics_.validate();
  stoch_.validate();
}

ResetResult StepCountEnv::reset(std::optional<std::uint64_t> seed) {
  if (seed) rng_ = RngStreams(*seed);
  params_ = sample_episode_params(dynamics_, stoch_, rng_.noise);
  state_ = initial_state(dynamics_, rng_.context);
  has_reset_ = true;
  done_ = false;
  return {obs_.project(state_), {state_, params_}};
}

StepResult StepCountEnv::step(int action) {
  if (!has_reset_) throw UsageError("step() called before reset()");
  if (done_) throw UsageError("step() called after the episode ended; call reset()");
  check_action(action);

  state_ = transition(state_, action, params_, dynamics_, stoch_, rng_);

  StepResult out;
  out.reward = state_.s;
  out.terminated = state_.d > dynamics_.d_threshold;
  out.truncated = !out.terminated && state_.t >= dynamics_.horizon;
  done_ = out.terminated || out.truncated;
  out.observation = obs_.project(state_);
  out.info = {state_, params_};
  return out;
}

void StepCountEnv::require_reset() const {
  if (!has_reset_) throw UsageError("environment has not been reset");
}

double StepCountEnv::get_C() const { require_reset(); return state_.context.c; }
double StepCountEnv::get_P() const { require_reset(); return state_.context.p; }
double StepCountEnv::get_L() const { require_reset(); return state_.context.l; }
double StepCountEnv::get_H() const { require_reset(); return state_.h; }
double StepCountEnv::get_D() const { require_reset(); return state_.d; }
double StepCountEnv::get_S() const { require_reset(); return state_.s; }

const SimState& StepCountEnv::state() const { require_reset(); return state_; }
const EpisodeParams& StepCountEnv::episode_params() const { require_reset(); return params_; }

}  // namespace scjitai
