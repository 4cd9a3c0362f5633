#include "rrpm/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "rrpm/text.hpp"

namespace rrpm {

SweepSummary summarize(const SweepRow& row) {
  if (row.error) throw *row.error;
  const auto& a = row.result.value();
  SweepSummary s;
  s.patients = row.point.patients;
  s.participation = row.point.participation;
  s.n_seeds = a.n_seeds;
  s.mean_delivery = a.mean_delivery;
  s.sem_delivery = a.sem_delivery;
  s.mean_latency_min = a.mean_latency;
  s.sem_latency_min = a.sem_latency;
  if (a.max_latency) s.max_latency_min = static_cast<double>(*a.max_latency);
  s.seeds_no_delivery = a.seeds_with_no_delivery;
  return s;
}

std::vector<SweepSummary> summarize(const SweepTable& table) {
  std::vector<SweepSummary> out;
  for (const auto& row : table.rows) out.push_back(summarize(row));
  return out;
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::optional<double> parse_opt(const std::string& s, std::string_view what) {
  if (s.empty()) return std::nullopt;
  return parse_double(s, what);
}

}  // namespace

void write_sweep_csv(std::span<const SweepSummary> rows, std::ostream& out) {
  out << kSweepCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.patients << ',' << format_double(r.participation) << ',' << r.n_seeds << ','
        << format_double(r.mean_delivery) << ',' << format_double(r.sem_delivery) << ','
        << opt(r.mean_latency_min) << ',' << opt(r.sem_latency_min) << ','
        << opt(r.max_latency_min) << ',' << r.seeds_no_delivery << '\n';
  }
}

std::vector<SweepSummary> read_sweep_csv(std::istream& in) {
  const auto rows = read_csv(in);
  if (rows.empty()) throw Error(ErrorKind::ParseError, "sweep CSV is empty");
  std::ostringstream header;
  for (std::size_t i = 0; i < rows[0].size(); ++i) header << (i ? "," : "") << rows[0][i];
  if (header.str() != kSweepCsvHeader)
    throw Error(ErrorKind::ParseError, "unexpected sweep CSV header");
  std::vector<SweepSummary> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i];
    if (f.size() != 9)
      throw Error(ErrorKind::ParseError, "sweep CSV line " + std::to_string(i + 1) +
                                             " has " + std::to_string(f.size()) + " fields");
    SweepSummary s;
    s.patients = parse_int(f[0], "patients");
    s.participation = parse_double(f[1], "participation");
    s.n_seeds = parse_int(f[2], "n_seeds");
    s.mean_delivery = parse_double(f[3], "mean_delivery");
    s.sem_delivery = parse_double(f[4], "sem_delivery");
    s.mean_latency_min = parse_opt(f[5], "mean_latency_min");
    s.sem_latency_min = parse_opt(f[6], "sem_latency_min");
    s.max_latency_min = parse_opt(f[7], "max_latency_min");
    s.seeds_no_delivery = parse_int(f[8], "seeds_no_delivery");
    out.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

template <typename T>
nlohmann::json opt_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json to_json(const RunResult& run) {
  return {
      {"seed", run.seed},
      {"scenario_fingerprint", run.scenario_fingerprint},
      {"total_messages", run.total_messages},
      {"delivered_count", run.delivered_count},
      {"expired_count", run.expired_count},
      {"live_at_end", run.live_at_end},
      {"delivery_probability", run.delivery_probability},
      {"latencies_min", run.latencies},
      {"max_latency_min", opt_json(run.max_latency)},
      {"mean_latency_min", opt_json(run.mean_latency)},
      {"end_time_min", run.end_time},
  };
}

nlohmann::json to_json(const AggregateResult& agg) {
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& r : agg.runs) runs.push_back(to_json(r));
  return {
      {"scenario_fingerprint", agg.scenario_fingerprint},
      {"n_seeds", agg.n_seeds},
      {"mean_delivery", agg.mean_delivery},
      {"sem_delivery", agg.sem_delivery},
      {"mean_latency_min", opt_json(agg.mean_latency)},
      {"sem_latency_min", opt_json(agg.sem_latency)},
      {"max_latency_min", opt_json(agg.max_latency)},
      {"seeds_no_delivery", agg.seeds_with_no_delivery},
      {"runs", std::move(runs)},
  };
}

nlohmann::json to_json(const SweepTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json j = {{"patients", row.point.patients},
                        {"participation", row.point.participation}};
    if (row.result) j["aggregate"] = to_json(*row.result);
    if (row.error) j["error"] = row.error->what();
    rows.push_back(std::move(j));
  }
  return {{"rows", std::move(rows)}};
}

// ---------------------------------------------------------------------------
// SVG

PlotMetric parse_plot_metric(const std::string& s) {
  if (s == "delivery") return PlotMetric::Delivery;
  if (s == "latency") return PlotMetric::Latency;
  throw Error(ErrorKind::ParseError, "metric must be delivery or latency, got '" + s + "'");
}

PlotAxis parse_plot_axis(const std::string& s) {
  if (s == "patients") return PlotAxis::Patients;
  if (s == "participation") return PlotAxis::Participation;
  throw Error(ErrorKind::ParseError, "x must be patients or participation, got '" + s + "'");
}

namespace {

struct ChartPoint {
  double x, y, err;
};

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 72, kRight = 24, kTop = 44, kBottom = 64;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fmt(double v, int digits = 2) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

std::string tick_label(double v) {
  std::string s = fmt(v, 3);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

}  // namespace

std::string render_sweep_chart(std::span<const SweepSummary> rows, PlotMetric metric,
                               PlotAxis axis) {
  if (rows.empty()) throw Error(ErrorKind::OutOfRange, "nothing to plot");
  const bool by_patients = axis == PlotAxis::Patients;
  const bool delivery = metric == PlotMetric::Delivery;

  // Series keyed by the dimension that is not on the x axis.
  std::map<double, std::vector<ChartPoint>> series;
  std::set<double> xs;
  for (const auto& r : rows) {
    const double x = by_patients ? r.patients : r.participation;
    const double key = by_patients ? r.participation : r.patients;
    xs.insert(x);
    if (delivery) {
      series[key].push_back({x, r.mean_delivery, r.sem_delivery});
    } else if (r.mean_latency_min) {
      series[key].push_back({x, *r.mean_latency_min / 60.0, r.sem_latency_min.value_or(0) / 60.0});
    }
  }
  for (auto& [k, pts] : series)
    std::sort(pts.begin(), pts.end(), [](const ChartPoint& a, const ChartPoint& b) { return a.x < b.x; });

  double x_lo = *xs.begin(), x_hi = *xs.rbegin();
  if (x_hi == x_lo) {
    x_lo -= 1;
    x_hi += 1;
  }
  double y_hi = 1.0;
  if (!delivery) {
    y_hi = 1.0;
    for (const auto& [k, pts] : series)
      for (const auto& p : pts) y_hi = std::max(y_hi, p.y + p.err);
    y_hi = std::ceil(y_hi * 1.1);
  }
  const double plot_w = kWidth - kLeft - kRight, plot_h = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto sy = [&](double y) { return kTop + plot_h - y / y_hi * plot_h; };

  const std::string x_name = by_patients ? "Number of patients" : "Participation ratio";
  const std::string y_name = delivery ? "Mean delivery ratio" : "Mean delivery latency (h)";

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << y_name << " vs. " << x_name << "</text>\n";

  // Axes and grid.
  svg << "<g stroke=\"#333\" stroke-width=\"1\">\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w
      << "\" y2=\"" << kTop + plot_h << "\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kTop + plot_h << "\"/>\n";
  svg << "</g>\n";
  svg << "<g class=\"x-ticks\">\n";
  for (double x : xs) {
    svg << "<line x1=\"" << fmt(sx(x)) << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << fmt(sx(x))
        << "\" y2=\"" << kTop + plot_h + 5 << "\" stroke=\"#333\"/>";
    svg << "<text x=\"" << fmt(sx(x)) << "\" y=\"" << kTop + plot_h + 19
        << "\" text-anchor=\"middle\">" << tick_label(x) << "</text>\n";
  }
  svg << "</g>\n<g class=\"y-ticks\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double y = y_hi * i / 5.0;
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << fmt(sy(y)) << "\" x2=\"" << kLeft + plot_w
        << "\" y2=\"" << fmt(sy(y)) << "\" stroke=\"#ddd\"/>";
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << fmt(sy(y) + 4) << "\" text-anchor=\"end\">"
        << tick_label(y) << "</text>\n";
  }
  svg << "</g>\n";
  svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 18
      << "\" text-anchor=\"middle\">" << x_name << "</text>\n";
  svg << "<text transform=\"translate(18," << kTop + plot_h / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << y_name << "</text>\n";

  std::size_t color = 0;
  for (const auto& [key, pts] : series) {
    const char* c = kPalette[color++ % std::size(kPalette)];
    svg << "<g class=\"series\" stroke=\"" << c << "\" fill=\"" << c << "\">\n";
    svg << "<polyline fill=\"none\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i)
      svg << (i ? " " : "") << fmt(sx(pts[i].x)) << ',' << fmt(sy(pts[i].y));
    svg << "\"/>\n";
    for (const auto& p : pts) {
      const double x = sx(p.x);
      svg << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(sy(p.y - p.err)) << "\" x2=\"" << fmt(x)
          << "\" y2=\"" << fmt(sy(p.y + p.err)) << "\"/>";
      for (double e : {p.y - p.err, p.y + p.err})
        svg << "<line x1=\"" << fmt(x - 4) << "\" y1=\"" << fmt(sy(e)) << "\" x2=\"" << fmt(x + 4)
            << "\" y2=\"" << fmt(sy(e)) << "\"/>";
      svg << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(sy(p.y)) << "\" r=\"3\"/>\n";
    }
    svg << "</g>\n";
  }
  if (series.size() > 1) {
    double ly = kTop + 8;
    color = 0;
    for (const auto& [key, pts] : series) {
      const char* c = kPalette[color++ % std::size(kPalette)];
      svg << "<rect x=\"" << kLeft + plot_w - 120 << "\" y=\"" << ly - 8
          << "\" width=\"10\" height=\"10\" fill=\"" << c << "\"/><text x=\""
          << kLeft + plot_w - 105 << "\" y=\"" << ly + 1 << "\">"
          << (by_patients ? "I = " : "patients = ") << tick_label(key) << "</text>\n";
      ly += 16;
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::filesystem::path> write_sweep_plots(std::span<const SweepSummary> rows,
                                                     const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir.string() + ": " + ec.message());

  std::set<int> patients;
  std::set<double> participation;
  for (const auto& r : rows) {
    patients.insert(r.patients);
    participation.insert(r.participation);
  }
  std::vector<std::filesystem::path> written;
  auto emit = [&](PlotAxis axis, const char* axis_name) {
    for (auto [metric, name] : {std::pair{PlotMetric::Delivery, "delivery"},
                                std::pair{PlotMetric::Latency, "latency"}}) {
      const auto path = dir / (std::string(name) + "_vs_" + axis_name + ".svg");
      write_file(path, render_sweep_chart(rows, metric, axis));
      written.push_back(path);
    }
  };
  if (patients.size() > 1) emit(PlotAxis::Patients, "patients");
  if (participation.size() > 1) emit(PlotAxis::Participation, "participation");
  return written;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  out << contents;
  if (!out) throw Error(ErrorKind::IoError, "failed writing " + path.string());
}

}  // namespace rrpm
