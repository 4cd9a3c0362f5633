// rrpm: run, sweep and plot the rural opportunistic-relay simulator.

#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "rrpm/report.hpp"
#include "rrpm/simulation.hpp"
#include "rrpm/sweep.hpp"
#include "rrpm/text.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw rrpm::Error(rrpm::ErrorKind::IoError, "cannot open " + path + " for writing");
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) return parts;
    start = pos + 1;
  }
}

/// `start:step:stop` or a single value.
std::vector<double> parse_values(const std::string& text, const std::string& what) {
  const auto parts = split(text, ':');
  if (parts.size() == 1) return {rrpm::parse_double(parts[0], what)};
  if (parts.size() != 3)
    throw rrpm::Error(rrpm::ErrorKind::ParseError, what + " expects start:step:stop");
  return rrpm::expand_range(rrpm::parse_double(parts[0], what), rrpm::parse_double(parts[1], what),
                            rrpm::parse_double(parts[2], what));
}

void apply_vary(rrpm::SweepSpec& sweep, const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos)
    throw rrpm::Error(rrpm::ErrorKind::ParseError, "--vary expects name=start:step:stop");
  const std::string name = arg.substr(0, eq);
  const auto values = parse_values(arg.substr(eq + 1), name);
  if (name == "patients") {
    sweep.patients.clear();
    for (double v : values) {
      if (v != std::floor(v))
        throw rrpm::Error(rrpm::ErrorKind::ParseError, "patients must be whole numbers");
      sweep.patients.push_back(static_cast<int>(v));
    }
  } else if (name == "participation") {
    sweep.participation = values;
  } else {
    throw rrpm::Error(rrpm::ErrorKind::ParseError,
                      "--vary supports patients and participation, not '" + name + "'");
  }
}

void parse_seed_range(rrpm::SweepSpec& sweep, const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() > 2)
    throw rrpm::Error(rrpm::ErrorKind::ParseError, "--seeds expects first:last");
  sweep.first_seed = rrpm::parse_u64(parts.front(), "--seeds");
  sweep.last_seed = rrpm::parse_u64(parts.back(), "--seeds");
}

void print_warnings(const rrpm::ScenarioSpec& spec) {
  for (const auto& w : rrpm::scenario_warnings(spec)) std::cerr << "warning: " << w << '\n';
}

int cmd_run(const std::string& config, std::optional<std::uint64_t> seed, const std::string& out,
            const std::string& trace, const std::string& events) {
  const auto spec = rrpm::load_scenario(config);
  print_warnings(spec);

  std::ofstream trace_file, events_file;
  std::optional<rrpm::TrajectoryWriter> trace_writer;
  std::optional<rrpm::EventLogWriter> event_writer;
  rrpm::ObserverList observers;
  if (!trace.empty()) {
    trace_file = open_output(trace);
    observers.add(&trace_writer.emplace(trace_file));
  }
  if (!events.empty()) {
    events_file = open_output(events);
    observers.add(&event_writer.emplace(events_file));
  }

  const auto result =
      rrpm::run_simulation(spec, seed.value_or(spec.sim.seed), observers.empty() ? nullptr : &observers);
  const std::string json = rrpm::to_json(result).dump(2) + "\n";
  if (out.empty())
    std::cout << json;
  else
    rrpm::write_file(out, json);
  std::cerr << "delivered " << result.delivered_count << "/" << result.total_messages << '\n';
  return 0;
}

int cmd_sweep(const std::string& config, const std::vector<std::string>& vary,
              const std::string& seeds, const std::string& out, const std::string& json,
              const std::string& plots, unsigned jobs) {
  rrpm::SweepSpec sweep;
  sweep.base = rrpm::load_scenario(config);
  for (const auto& v : vary) apply_vary(sweep, v);
  if (!seeds.empty()) parse_seed_range(sweep, seeds);
  for (const auto& p : sweep.points()) print_warnings(sweep.scenario_for(p));

  const auto table = rrpm::run_sweep(sweep, jobs);
  bool failed = false;
  for (const auto& row : table.rows) {
    if (!row.error) continue;
    failed = true;
    std::cerr << "point patients=" << row.point.patients
              << " participation=" << rrpm::format_double(row.point.participation) << ": "
              << row.error->what() << '\n';
  }
  if (failed) return kExitValidation;

  const auto rows = rrpm::summarize(table);
  std::ostringstream csv;
  rrpm::write_sweep_csv(rows, csv);
  if (out.empty())
    std::cout << csv.str();
  else
    rrpm::write_file(out, csv.str());
  if (!json.empty()) rrpm::write_file(json, rrpm::to_json(table).dump(2) + "\n");
  if (!plots.empty())
    for (const auto& p : rrpm::write_sweep_plots(rows, plots)) std::cerr << "wrote " << p.string() << '\n';
  return 0;
}

int cmd_plot(const std::string& in_path, const std::string& metric, const std::string& x,
             const std::string& out) {
  std::ifstream in(in_path);
  if (!in) throw rrpm::Error(rrpm::ErrorKind::IoError, "cannot open " + in_path);
  const auto rows = rrpm::read_sweep_csv(in);
  rrpm::write_file(out, rrpm::render_sweep_chart(rows, rrpm::parse_plot_metric(metric),
                                                 rrpm::parse_plot_axis(x)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Opportunistic relay simulator for rural remote patient monitoring"};
  app.require_subcommand(1);

  std::string config, out, trace, events, seeds, json, plots, in_path, metric, x_axis;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> vary;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());

  auto* run = app.add_subcommand("run", "Simulate one seed");
  run->add_option("--config", config, "Scenario file")->required();
  run->add_option("--seed", seed, "Seed (defaults to sim.seed)");
  run->add_option("--out", out, "RunResult JSON (stdout when omitted)");
  run->add_option("--trace", trace, "Trajectory CSV");
  run->add_option("--events", events, "Event log CSV");

  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep over seeds");
  sweep->add_option("--config", config, "Scenario file")->required();
  sweep->add_option("--vary", vary, "patients=2:2:10 or participation=0.1:0.1:1.0 (repeatable)");
  sweep->add_option("--seeds", seeds, "Inclusive seed range first:last (default 0:99)");
  sweep->add_option("--out", out, "Sweep CSV (stdout when omitted)");
  sweep->add_option("--json", json, "Full nested results as JSON");
  sweep->add_option("--plots", plots, "Directory for SVG charts");
  sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* plot = app.add_subcommand("plot", "Chart a sweep CSV");
  plot->add_option("--in", in_path, "Sweep CSV")->required();
  plot->add_option("--metric", metric, "delivery|latency")->required();
  plot->add_option("--x", x_axis, "patients|participation")->required();
  plot->add_option("--out", out, "SVG file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*run) return cmd_run(config, seed, out, trace, events);
    if (*sweep) return cmd_sweep(config, vary, seeds, out, json, plots, jobs);
    return cmd_plot(in_path, metric, x_axis, out);
  } catch (const rrpm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == rrpm::ErrorKind::IoError ? kExitIo : kExitValidation;
  }
}
