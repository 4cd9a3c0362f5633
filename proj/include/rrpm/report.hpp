#ifndef RRPM_REPORT_HPP
#define RRPM_REPORT_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "rrpm/metrics.hpp"
#include "rrpm/sweep.hpp"

namespace rrpm {

/// One line of the sweep CSV.
struct SweepSummary {
  int patients = 0;
  double participation = 0.0;
  int n_seeds = 0;
  double mean_delivery = 0.0;
  double sem_delivery = 0.0;
  std::optional<double> mean_latency_min;
  std::optional<double> sem_latency_min;
  std::optional<double> max_latency_min;
  int seeds_no_delivery = 0;

  bool operator==(const SweepSummary&) const = default;
};

/// Throws the row's aggregation error if it has one.
SweepSummary summarize(const SweepRow& row);
std::vector<SweepSummary> summarize(const SweepTable& table);

inline constexpr const char* kSweepCsvHeader =
    "patients,participation,n_seeds,mean_delivery,sem_delivery,mean_latency_min,"
    "sem_latency_min,max_latency_min,seeds_no_delivery";

/// Shortest round-trip number formatting; undefined values are empty fields.
void write_sweep_csv(std::span<const SweepSummary> rows, std::ostream& out);
std::vector<SweepSummary> read_sweep_csv(std::istream& in);

nlohmann::json to_json(const RunResult& run);
nlohmann::json to_json(const AggregateResult& agg);
nlohmann::json to_json(const SweepTable& table);

enum class PlotMetric { Delivery, Latency };
enum class PlotAxis { Patients, Participation };

PlotMetric parse_plot_metric(const std::string& s);
PlotAxis parse_plot_axis(const std::string& s);

/// Line chart of mean delivery (fraction) or mean latency (hours) against the
/// chosen axis, one series per value of the other dimension, SEM error bars.
std::string render_sweep_chart(std::span<const SweepSummary> rows, PlotMetric metric,
                               PlotAxis axis);

/// Writes `<metric>_vs_<axis>.svg` for every axis that takes more than one
/// value. Returns the paths written.
std::vector<std::filesystem::path> write_sweep_plots(std::span<const SweepSummary> rows,
                                                     const std::filesystem::path& dir);

/// Throws IoError on failure.
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace rrpm

#endif  // RRPM_REPORT_HPP
