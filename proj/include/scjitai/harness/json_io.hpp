#pragma once

#include <filesystem>

#include <json.hpp>

#include "scjitai/harness/config.hpp"

namespace scjitai::harness {

// Keys follow the parameter names of the model: sigma, delta_h, epsilon_h,
// delta_d, epsilon_d, rho1, rho2, m_s, D_threshold, horizon, n_version,
// sigma_s, a_hd, a_de, kappa_*, chosen_obs_names. Missing keys keep their
// defaults; unknown keys are rejected with ConfigError.
nlohmann::json env_to_json(const EnvConfig& env);
EnvConfig env_from_json(const nlohmann::json& j, EnvConfig base = {});

nlohmann::json to_json(const ExperimentConfig& cfg);

// Fields present in `j` override `base`.
ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base = {});

// Throws IoError if unreadable, ConfigError if malformed.
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace scjitai::harness
