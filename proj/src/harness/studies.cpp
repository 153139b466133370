// Traces, histograms and the context-error lookup table.

#include <algorithm>
#include <cmath>
#include <sstream>

#include "scjitai/harness/experiments.hpp"
#include "scjitai/samplers.hpp"

namespace scjitai::harness {

Trace run_trace(const Case& c, int steps, std::uint64_t seed) {
  StepCountEnv env(c.env, derive_seed(seed, 0));
  RngState policy_rng(derive_seed(seed, 1));
  Trace trace;
  trace.label = c.label;
  env.reset();
  trace.initial = env.state();
  double cum = 0.0;
  for (int i = 0; i < steps && !env.episode_over(); ++i) {
    const int action = c.policy == TracePolicy::always3 ? 3 : static_cast<int>(policy_rng.below(kNumActions));
    const auto r = env.step(action);
    cum += r.reward;
    const auto& s = r.info.state;
    trace.rows.push_back({s.t, s.context.c, s.context.p, s.context.l, s.h, s.d, action, r.reward, cum});
  }
  return trace;
}

std::vector<Trace> run_traces(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<Trace> out;
  for (std::size_t i = 0; i < cfg.cases.size(); ++i)
    out.push_back(run_trace(cfg.cases[i], cfg.trace_steps, derive_seed(cfg.seed, i)));
  return out;
}

std::string trace_csv(const Trace& trace) {
  std::ostringstream out;
  out << "t,c,p,l,h,d,action,reward,cum_reward\n";
  for (const auto& r : trace.rows)
    out << r.t << ',' << r.c << ',' << format_number(r.p) << ',' << r.l << ',' << format_number(r.h) << ','
        << format_number(r.d) << ',' << r.action << ',' << format_number(r.reward) << ','
        << format_number(r.cum_reward) << '\n';
  return out.str();
}

namespace {

Histogram summarize(std::string case_label, std::string variable, double center, const std::vector<double>& xs,
                    int bins) {
  Histogram h{std::move(case_label), std::move(variable), center, {}, {}, static_cast<long>(xs.size()), 0.0, 0.0};
  const auto n = static_cast<double>(xs.size());
  for (double x : xs) h.mean += x;
  h.mean /= n;
  double ss = 0.0;
  for (double x : xs) ss += (x - h.mean) * (x - h.mean);
  h.sd = xs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;

  auto [lo_it, hi_it] = std::minmax_element(xs.begin(), xs.end());
  double lo = *lo_it;
  double hi = *hi_it;
  if (hi <= lo) {  // degenerate sample: widen the range around the single value
    const double pad = lo == 0.0 ? 0.5 : std::abs(lo) * 0.5;
    lo -= pad;
    hi += pad;
  }
  const double width = (hi - lo) / bins;
  for (int b = 0; b <= bins; ++b) h.edges.push_back(b == bins ? hi : lo + b * width);
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (double x : xs) {
    auto b = static_cast<long>((x - lo) / width);
    b = std::clamp<long>(b, 0, bins - 1);
    ++h.counts[static_cast<std::size_t>(b)];
  }
  return h;
}

}  // namespace

std::vector<Histogram> run_histograms(const Case& c, const HistogramSettings& settings, std::uint64_t seed) {
  const auto& st = c.env.stochasticity;
  const auto& base = c.env.dynamics;
  RngState state_rng(derive_seed(seed, 0));
  RngState param_rng(derive_seed(seed, 1));

  const auto n_state = static_cast<std::size_t>(settings.state_samples);
  std::vector<double> hs(n_state), ds(n_state), ss(n_state);
  for (std::size_t i = 0; i < n_state; ++i) {
    const auto v = apply_state_noise(settings.h, settings.d, settings.s, st, state_rng);
    hs[i] = v.h;
    ds[i] = v.d;
    ss[i] = v.s;
  }

  const auto n_param = static_cast<std::size_t>(settings.param_samples);
  std::vector<double> dh(n_param), eh(n_param), dd(n_param), ed(n_param);
  for (std::size_t i = 0; i < n_param; ++i) {
    const auto ep = sample_episode_params(base, st, param_rng);
    dh[i] = ep.delta_h;
    eh[i] = ep.eps_h;
    dd[i] = ep.delta_d;
    ed[i] = ep.eps_d;
  }

  const int bins = settings.bins;
  return {summarize(c.label, "h", settings.h, hs, bins),
          summarize(c.label, "d", settings.d, ds, bins),
          summarize(c.label, "s", settings.s, ss, bins),
          summarize(c.label, "delta_h", base.delta_h, dh, bins),
          summarize(c.label, "epsilon_h", base.eps_h, eh, bins),
          summarize(c.label, "delta_d", base.delta_d, dd, bins),
          summarize(c.label, "epsilon_d", base.eps_d, ed, bins)};
}

std::vector<Histogram> run_histograms(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<Histogram> out;
  for (std::size_t i = 0; i < cfg.cases.size(); ++i) {
    auto part = run_histograms(cfg.cases[i], cfg.hist, derive_seed(cfg.seed, i));
    std::move(part.begin(), part.end(), std::back_inserter(out));
  }
  return out;
}

std::string histograms_csv(const std::vector<Histogram>& hists) {
  std::ostringstream out;
  out << "case,variable,bin_lo,bin_hi,count\n";
  for (const auto& h : hists)
    for (std::size_t b = 0; b < h.counts.size(); ++b)
      out << h.case_label << ',' << h.variable << ',' << format_number(h.edges[b]) << ','
          << format_number(h.edges[b + 1]) << ',' << h.counts[b] << '\n';
  return out.str();
}

std::string histogram_summary_csv(const std::vector<Histogram>& hists) {
  std::ostringstream out;
  out << "case,variable,center,samples,mean,sd\n";
  for (const auto& h : hists)
    out << h.case_label << ',' << h.variable << ',' << format_number(h.center) << ',' << h.samples << ','
        << format_number(h.mean) << ',' << format_number(h.sd) << '\n';
  return out.str();
}

std::vector<LookupRow> run_sigma_lookup(const LookupSettings& settings, std::uint64_t seed) {
  std::vector<LookupRow> rows;
  for (std::size_t i = 0; i < settings.sigmas.size(); ++i) {
    const double sigma = settings.sigmas[i];
    RngState rng(derive_seed(seed, i));
    long correct = 0;
    for (int k = 0; k < settings.samples; ++k) {
      const auto ctx = gen_context(sigma, rng);
      correct += ctx.l == ctx.c;
    }
    const double n = settings.samples;
    rows.push_back({sigma, static_cast<double>(correct) / n, static_cast<double>(settings.samples - correct) / n});
  }
  return rows;
}

std::string lookup_csv(const std::vector<LookupRow>& rows) {
  std::ostringstream out;
  out << "sigma,accuracy,error\n";
  for (const auto& r : rows)
    out << format_number(r.sigma) << ',' << format_number(r.accuracy) << ',' << format_number(r.error) << '\n';
  return out.str();
}

}  // namespace scjitai::harness
