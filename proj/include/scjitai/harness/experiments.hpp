#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "scjitai/harness/config.hpp"

namespace scjitai::harness {

// Shortest decimal text that parses back to the same double.
std::string format_number(double v);

// ---- learning curves -------------------------------------------------------

// Seed of trial i: derive_seed(master, i). Within a trial the environment uses
// derive_seed(trial_seed, 0) and the learner derive_seed(trial_seed, 1), so
// every agent in trial i faces the same environment seed.
std::uint64_t trial_seed(std::uint64_t master, int trial);

agents::ReturnSeries run_trial(const ExperimentConfig& cfg, AgentKind agent, std::uint64_t seed);

struct TrialResult {
  AgentKind agent;
  int trial;
  std::uint64_t seed;
  agents::ReturnSeries returns;
  double wall_seconds;
};

struct CurvePoint {
  AgentKind agent;
  int episode;  // 1-based
  double mean_return;
  double sd_return;
};

struct RunResult {
  std::vector<TrialResult> trials;  // ordered by (agent as configured, trial)
  std::vector<CurvePoint> aggregate;
};

// Trailing mean over the last `window` values (fewer at the start).
std::vector<double> moving_average(std::span<const double> values, int window);

// Per agent and episode: mean and sample sd (n - 1) across trials of the
// trailing moving average. sd is 0 with a single trial.
std::vector<CurvePoint> aggregate_curves(const std::vector<TrialResult>& trials,
                                         const std::vector<AgentKind>& agents, int window);

// Mean over trials of the moving average at the last episode.
double final_average(const RunResult& result, AgentKind agent);

using TrialCallback = std::function<void(const TrialResult&)>;

// Runs agents x trials jobs on up to `workers` threads. The callback, if any,
// is invoked under a lock as jobs finish.
RunResult run_learning_curves(const ExperimentConfig& cfg, int workers, const TrialCallback& on_done = {});

std::string raw_curves_csv(const RunResult& result);        // agent,trial,episode,return
std::string aggregate_curves_csv(const RunResult& result);  // agent,episode,mean_return,sd_return
std::string trials_csv(const RunResult& result);
std::string curves_svg(const RunResult& result, const ExperimentConfig& cfg);

// ---- traces ---------------------------------------------------------------

struct TraceRow {
  int t;  // time index after the step, 1-based
  int c;
  double p;
  int l;
  double h;
  double d;
  int action;  // action that produced this row
  double reward;
  double cum_reward;
};

struct Trace {
  std::string label;
  SimState initial;
  std::vector<TraceRow> rows;
};

Trace run_trace(const Case& c, int steps, std::uint64_t seed);
std::vector<Trace> run_traces(const ExperimentConfig& cfg);
std::string trace_csv(const Trace& trace);  // t,c,p,l,h,d,action,reward,cum_reward

// ---- histograms -----------------------------------------------------------

struct Histogram {
  std::string case_label;
  std::string variable;  // h, d, s, delta_h, epsilon_h, delta_d, epsilon_d
  double center;         // deterministic value
  std::vector<double> edges;  // bins + 1 entries
  std::vector<long> counts;
  long samples;
  double mean;
  double sd;
};

std::vector<Histogram> run_histograms(const Case& c, const HistogramSettings& settings, std::uint64_t seed);
std::vector<Histogram> run_histograms(const ExperimentConfig& cfg);
std::string histograms_csv(const std::vector<Histogram>& hists);  // case,variable,bin_lo,bin_hi,count
std::string histogram_summary_csv(const std::vector<Histogram>& hists);

// ---- sigma lookup ---------------------------------------------------------

struct LookupRow {
  double sigma;
  double accuracy;  // fraction of draws with l == c
  double error;     // 1 - accuracy
};

std::vector<LookupRow> run_sigma_lookup(const LookupSettings& settings, std::uint64_t seed);
std::string lookup_csv(const std::vector<LookupRow>& rows);  // sigma,accuracy,error

// ---- persistence ----------------------------------------------------------

// Writes `contents` to dir/name, creating dir. Throws IoError.
void write_file(const std::filesystem::path& dir, const std::string& name, const std::string& contents);

struct RunOptions {
  int workers = 1;
  bool svg = true;
  TrialCallback on_trial;
};

// Runs the experiment named by cfg.kind and writes its artifacts plus the
// resolved config.json into `out`. Returns the list of files written.
std::vector<std::filesystem::path> run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out,
                                                  const RunOptions& options = {});

}  // namespace scjitai::harness
