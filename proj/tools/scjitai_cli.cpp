// Command-line experiment runner.
//
//   scjitai curves  [--preset fig1b | --config file.json] [--trials N] [--episodes N] ...
//   scjitai traces  [--preset appendix-f] ...
//   scjitai hist    [--preset appendix-e2] ...
//   scjitai lookup  [--samples N] ...
//
// Exit codes: 0 success, 2 configuration error, 3 I/O error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "scjitai/errors.hpp"
#include "scjitai/harness/experiments.hpp"
#include "scjitai/harness/json_io.hpp"

namespace {

using namespace scjitai;
using namespace scjitai::harness;

constexpr int kConfigError = 2;
constexpr int kIoError = 3;

struct Common {
  std::string config_path;
  std::string preset_name;
  std::optional<std::uint64_t> seed;
  std::string out;
};

struct CurveFlags {
  std::optional<int> trials;
  std::optional<int> episodes;
  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::string> agents;
  bool no_svg = false;
};

void add_common(CLI::App* app, Common& c, const std::string& default_preset) {
  app->add_option("--config", c.config_path, "JSON experiment configuration file");
  app->add_option("--preset", c.preset_name, "Named preset (default " + default_preset + ")");
  app->add_option("--seed", c.seed, "Master seed");
  app->add_option("--out", c.out, "Output directory")->default_str("results/<subcommand>");
}

ExperimentConfig resolve(const Common& c, ExperimentKind kind, const std::string& default_preset) {
  if (!c.config_path.empty() && !c.preset_name.empty())
    throw ConfigError("--config and --preset are mutually exclusive");
  ExperimentConfig cfg;
  if (!c.config_path.empty()) {
    std::ifstream probe(c.config_path);
    if (!probe) throw IoError("cannot read config file " + c.config_path);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(probe);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("malformed JSON in " + c.config_path + ": " + e.what());
    }
    if (j.is_object() && j.contains("experiment") && j["experiment"] != std::string(to_string(kind)))
      throw ConfigError("config describes a '" + j["experiment"].dump() + "' experiment, not " +
                        std::string(to_string(kind)));
    ExperimentConfig base;
    base.kind = kind;
    if (kind != ExperimentKind::learning_curves && kind != ExperimentKind::sigma_lookup) {
      // Traces and histograms without explicit cases fall back to the preset's cases.
      base.cases = preset(default_preset).cases;
    }
    cfg = config_from_json(j, base);
  } else {
    cfg = preset(c.preset_name.empty() ? default_preset : c.preset_name);
    if (cfg.kind != kind)
      throw ConfigError("preset '" + cfg.name + "' is a " + std::string(to_string(cfg.kind)) + " experiment");
  }
  if (c.seed) cfg.seed = *c.seed;
  return cfg;
}

int run(const ExperimentConfig& cfg, const std::string& out, const RunOptions& options) {
  const auto files = run_experiment(cfg, out, options);
  for (const auto& f : files) std::cout << f.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Step-count simulator experiment runner"};
  app.require_subcommand(1);
  bool list_presets = false;
  app.add_flag("--list-presets", list_presets, "Print the preset names and exit");

  Common curves_c, traces_c, hist_c, lookup_c;
  CurveFlags cf;
  auto* curves = app.add_subcommand("curves", "Train agents and write learning curves");
  add_common(curves, curves_c, "fig1b");
  curves->add_option("--trials", cf.trials, "Trials per agent");
  curves->add_option("--episodes", cf.episodes, "Episodes per trial");
  curves->add_option("--workers", cf.workers, "Worker threads")->check(CLI::PositiveNumber);
  curves->add_option("--agent", cf.agents, "reinforce, dqn, ppo, ts or all (repeatable)")
      ->delimiter(',')
      ->check(CLI::IsMember({"reinforce", "dqn", "ppo", "ts", "all"}));
  curves->add_flag("--no-svg", cf.no_svg, "Skip the SVG chart");

  std::optional<int> trace_steps;
  auto* traces = app.add_subcommand("traces", "Roll out fixed policies and write state traces");
  add_common(traces, traces_c, "appendix-f");
  traces->add_option("--steps", trace_steps, "Steps per trace");

  auto* hist = app.add_subcommand("hist", "Sample the noise distributions and write histograms");
  add_common(hist, hist_c, "appendix-e2");

  std::optional<int> lookup_samples;
  auto* lookup = app.add_subcommand("lookup", "Monte Carlo context accuracy and error per sigma");
  add_common(lookup, lookup_c, "lookup");
  lookup->add_option("--samples", lookup_samples, "Draws per sigma (>= 1000)");

  if (argc > 1 && std::string(argv[1]) == "--list-presets") {
    for (const auto& n : preset_names()) std::cout << n << '\n';
    return 0;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*curves) {
      auto cfg = resolve(curves_c, ExperimentKind::learning_curves, "fig1b");
      if (cf.trials) cfg.trials = *cf.trials;
      if (cf.episodes) cfg.episodes = *cf.episodes;
      if (!cf.agents.empty()) {
        cfg.agents.clear();
        for (const auto& a : cf.agents) {
          if (a == "all") {
            cfg.agents.assign(std::begin(kAllAgents), std::end(kAllAgents));
            break;
          }
          cfg.agents.push_back(agent_kind_from_string(a));
        }
      }
      RunOptions opts;
      opts.workers = cf.workers;
      opts.svg = !cf.no_svg;
      opts.on_trial = [](const TrialResult& t) {
        const auto ma = moving_average(t.returns, 100);
        std::fprintf(stderr, "%-9s trial %2d  final moving average %8.1f  (%.1fs)\n",
                     std::string(to_string(t.agent)).c_str(), t.trial, ma.empty() ? 0.0 : ma.back(), t.wall_seconds);
      };
      return run(cfg, curves_c.out.empty() ? "results/curves" : curves_c.out, opts);
    }
    if (*traces) {
      auto cfg = resolve(traces_c, ExperimentKind::traces, "appendix-f");
      if (trace_steps) cfg.trace_steps = *trace_steps;
      return run(cfg, traces_c.out.empty() ? "results/traces" : traces_c.out, {});
    }
    if (*hist) {
      auto cfg = resolve(hist_c, ExperimentKind::histograms, "appendix-e2");
      return run(cfg, hist_c.out.empty() ? "results/hist" : hist_c.out, {});
    }
    auto cfg = resolve(lookup_c, ExperimentKind::sigma_lookup, "lookup");
    if (lookup_samples) cfg.lookup.samples = *lookup_samples;
    return run(cfg, lookup_c.out.empty() ? "results/lookup" : lookup_c.out, {});
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  }
}
