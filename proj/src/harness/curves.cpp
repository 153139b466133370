#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "scjitai/errors.hpp"
#include "scjitai/harness/experiments.hpp"

namespace scjitai::harness {

std::string format_number(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_number: to_chars failed");
  return std::string(buf, end);
}

std::uint64_t trial_seed(std::uint64_t master, int trial) {
  return derive_seed(master, static_cast<std::uint64_t>(trial));
}

agents::ReturnSeries run_trial(const ExperimentConfig& cfg, AgentKind agent, std::uint64_t seed) {
  StepCountEnv env(cfg.env, derive_seed(seed, 0));
  agents::StepCountAdapter adapter(env);
  RngState rng(derive_seed(seed, 1));
  switch (agent) {
    case AgentKind::reinforce: return agents::train_reinforce(adapter, cfg.reinforce, cfg.episodes, rng);
    case AgentKind::dqn: return agents::train_dqn(adapter, cfg.dqn, cfg.episodes, rng);
    case AgentKind::ppo: return agents::train_ppo(adapter, cfg.ppo, cfg.episodes, rng);
    case AgentKind::ts: return agents::train_ts(adapter, cfg.ts, cfg.episodes, rng);
  }
  throw ConfigError("unknown agent");
}

std::vector<double> moving_average(std::span<const double> values, int window) {
  if (window < 1) throw ConfigError("moving average window must be >= 1");
  std::vector<double> out(values.size());
  const auto w = static_cast<std::size_t>(window);
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    sum += values[i];
    if (i >= w) sum -= values[i - w];
    out[i] = sum / static_cast<double>(std::min(i + 1, w));
  }
  return out;
}

std::vector<CurvePoint> aggregate_curves(const std::vector<TrialResult>& trials,
                                         const std::vector<AgentKind>& agents, int window) {
  std::vector<CurvePoint> out;
  for (auto agent : agents) {
    std::vector<std::vector<double>> smoothed;
    for (const auto& t : trials)
      if (t.agent == agent) smoothed.push_back(moving_average(t.returns, window));
    if (smoothed.empty()) continue;
    const std::size_t episodes = smoothed.front().size();
    for (const auto& s : smoothed)
      if (s.size() != episodes) throw ShapeError("aggregate: trials have different episode counts");
    const auto n = static_cast<double>(smoothed.size());
    for (std::size_t e = 0; e < episodes; ++e) {
      double mean = 0.0;
      for (const auto& s : smoothed) mean += s[e];
      mean /= n;
      double ss = 0.0;
      for (const auto& s : smoothed) ss += (s[e] - mean) * (s[e] - mean);
      const double sd = smoothed.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
      out.push_back({agent, static_cast<int>(e + 1), mean, sd});
    }
  }
  return out;
}

double final_average(const RunResult& result, AgentKind agent) {
  const CurvePoint* last = nullptr;
  for (const auto& p : result.aggregate)
    if (p.agent == agent) last = &p;
  if (!last) throw ConfigError("agent '" + std::string(to_string(agent)) + "' was not run");
  return last->mean_return;
}

RunResult run_learning_curves(const ExperimentConfig& cfg, int workers, const TrialCallback& on_done) {
  cfg.validate();
  struct Job {
    AgentKind agent;
    int trial;
  };
  std::vector<Job> jobs;
  for (auto agent : cfg.agents)
    for (int t = 0; t < cfg.trials; ++t) jobs.push_back({agent, t});

  std::vector<TrialResult> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex callback_mutex;

  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
      try {
        const auto seed = trial_seed(cfg.seed, jobs[i].trial);
        const auto start = std::chrono::steady_clock::now();
        auto returns = run_trial(cfg, jobs[i].agent, seed);
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        results[i] = {jobs[i].agent, jobs[i].trial, seed, std::move(returns), elapsed.count()};
        if (on_done) {
          std::lock_guard lock(callback_mutex);
          on_done(results[i]);
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const auto n_threads = static_cast<std::size_t>(std::clamp<long>(workers, 1, static_cast<long>(jobs.size())));
  if (n_threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(work);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  RunResult result;
  result.trials = std::move(results);
  result.aggregate = aggregate_curves(result.trials, cfg.agents, cfg.window);
  return result;
}

std::string raw_curves_csv(const RunResult& result) {
  std::ostringstream out;
  out << "agent,trial,episode,return\n";
  for (const auto& t : result.trials)
    for (std::size_t e = 0; e < t.returns.size(); ++e)
      out << to_string(t.agent) << ',' << t.trial << ',' << e + 1 << ',' << format_number(t.returns[e]) << '\n';
  return out.str();
}

std::string aggregate_curves_csv(const RunResult& result) {
  std::ostringstream out;
  out << "agent,episode,mean_return,sd_return\n";
  for (const auto& p : result.aggregate)
    out << to_string(p.agent) << ',' << p.episode << ',' << format_number(p.mean_return) << ','
        << format_number(p.sd_return) << '\n';
  return out.str();
}

std::string trials_csv(const RunResult& result) {
  std::ostringstream out;
  out << "agent,trial,seed,episodes,final_moving_average,wall_seconds\n";
  for (const auto& t : result.trials) {
    const auto ma = moving_average(t.returns, 100);
    out << to_string(t.agent) << ',' << t.trial << ',' << t.seed << ',' << t.returns.size() << ','
        << format_number(ma.empty() ? 0.0 : ma.back()) << ',' << format_number(t.wall_seconds) << '\n';
  }
  return out.str();
}

}  // namespace scjitai::harness
