#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include "scjitai/errors.hpp"
#include "scjitai/harness/experiments.hpp"
#include "scjitai/harness/json_io.hpp"

namespace scjitai::harness {

namespace fs = std::filesystem;

void write_file(const fs::path& dir, const std::string& name, const std::string& contents) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  const fs::path path = dir / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << contents;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

std::string curves_svg(const RunResult& result, const ExperimentConfig& cfg) {
  constexpr double kW = 800, kH = 480, kLeft = 70, kRight = 130, kTop = 30, kBottom = 50;
  constexpr std::array<const char*, 4> kColors{"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

  double y_max = 1.0;
  int episodes = 1;
  for (const auto& p : result.aggregate) {
    y_max = std::max(y_max, p.mean_return + p.sd_return);
    episodes = std::max(episodes, p.episode);
  }
  y_max = std::ceil(y_max / 500.0) * 500.0;
  const double pw = kW - kLeft - kRight;
  const double ph = kH - kTop - kBottom;
  auto x = [&](double e) { return kLeft + pw * (e - 1) / std::max(1, episodes - 1); };
  auto y = [&](double v) { return kTop + ph * (1.0 - std::clamp(v, 0.0, y_max) / y_max); };

  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(1);
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << kLeft << "\" y=\"18\">" << cfg.name << ": moving-average return (mean ± sd over "
    << cfg.trials << " trials)</text>\n";
  for (int k = 0; k <= 5; ++k) {
    const double v = y_max * k / 5.0;
    s << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + pw << "\" y1=\"" << y(v) << "\" y2=\"" << y(v)
      << "\" stroke=\"#ddd\"/>\n<text x=\"" << kLeft - 8 << "\" y=\"" << y(v) + 4 << "\" text-anchor=\"end\">" << v
      << "</text>\n";
  }
  s << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kH - 12 << "\" text-anchor=\"middle\">episode (1.."
    << episodes << ")</text>\n";

  std::size_t colour = 0;
  for (auto agent : cfg.agents) {
    std::vector<const CurvePoint*> pts;
    for (const auto& p : result.aggregate)
      if (p.agent == agent) pts.push_back(&p);
    if (pts.empty()) continue;
    const char* c = kColors[colour++ % kColors.size()];
    s << "<polygon fill=\"" << c << "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
    for (const auto* p : pts) s << x(p->episode) << ',' << y(p->mean_return + p->sd_return) << ' ';
    for (auto it = pts.rbegin(); it != pts.rend(); ++it)
      s << x((*it)->episode) << ',' << y((*it)->mean_return - (*it)->sd_return) << ' ';
    s << "\"/>\n<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
    for (const auto* p : pts) s << x(p->episode) << ',' << y(p->mean_return) << ' ';
    const double ly = kTop + 20.0 * static_cast<double>(colour);
    s << "\"/>\n<line x1=\"" << kLeft + pw + 15 << "\" x2=\"" << kLeft + pw + 40 << "\" y1=\"" << ly << "\" y2=\""
      << ly << "\" stroke=\"" << c << "\" stroke-width=\"3\"/>\n<text x=\"" << kLeft + pw + 46 << "\" y=\"" << ly + 4
      << "\">" << to_string(agent) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::vector<fs::path> run_experiment(const ExperimentConfig& cfg, const fs::path& out, const RunOptions& options) {
  cfg.validate();
  std::vector<fs::path> written;
  auto emit = [&](const std::string& name, const std::string& contents) {
    write_file(out, name, contents);
    written.push_back(out / name);
  };
  // Written first so an unwritable directory fails before any long computation.
  emit("config.json", to_json(cfg).dump(2) + "\n");

  switch (cfg.kind) {
    case ExperimentKind::learning_curves: {
      const auto result = run_learning_curves(cfg, options.workers, options.on_trial);
      emit("raw.csv", raw_curves_csv(result));
      emit("aggregate.csv", aggregate_curves_csv(result));
      emit("trials.csv", trials_csv(result));
      if (options.svg) emit("curves.svg", curves_svg(result, cfg));
      break;
    }
    case ExperimentKind::traces:
      for (const auto& trace : run_traces(cfg)) emit("trace_" + trace.label + ".csv", trace_csv(trace));
      break;
    case ExperimentKind::histograms: {
      const auto hists = run_histograms(cfg);
      emit("histograms.csv", histograms_csv(hists));
      emit("summary.csv", histogram_summary_csv(hists));
      break;
    }
    case ExperimentKind::sigma_lookup:
      emit("lookup.csv", lookup_csv(run_sigma_lookup(cfg.lookup, cfg.seed)));
      break;
  }
  return written;
}

}  // namespace scjitai::harness
