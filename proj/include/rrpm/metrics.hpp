#ifndef RRPM_METRICS_HPP
#define RRPM_METRICS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rrpm/model.hpp"

namespace rrpm {

struct RunResult {
  std::uint64_t seed = 0;
  std::string scenario_fingerprint;
  int total_messages = 0;
  int delivered_count = 0;
  int expired_count = 0;
  int live_at_end = 0;
  double delivery_probability = 0.0;
  std::vector<Minutes> latencies;  ///< delivered messages, ascending message id
  std::optional<Minutes> max_latency;
  std::optional<double> mean_latency;
  Minutes end_time = 0;  ///< last simulated time (earlier than the duration on early exit)

  bool operator==(const RunResult&) const = default;
};

/// |delivered| / |generated|. Throws EmptyMessageSet when nothing was generated.
double delivery_probability(int delivered_count, int total_messages);

/// Largest latency. Throws NoDeliveries on an empty list.
Minutes max_latency(std::span<const Minutes> latencies);

/// Fills the derived fields of a result from its counts and latencies.
RunResult finalize_run(RunResult r);

struct AggregateResult {
  std::string scenario_fingerprint;
  std::vector<RunResult> runs;  ///< ascending seed
  int n_seeds = 0;
  double mean_delivery = 0.0;
  double sem_delivery = 0.0;
  /// Per-seed mean latency averaged over seeds that delivered something.
  std::optional<double> mean_latency;
  /// Needs at least two seeds with deliveries.
  std::optional<double> sem_latency;
  std::optional<Minutes> max_latency;
  int seeds_with_no_delivery = 0;
};

/// Sample standard deviation (n - 1) over sqrt(n). Needs at least two values.
double standard_error(std::span<const double> values);
double mean_of(std::span<const double> values);

/// Means and SEMs across seeds. Throws InsufficientSeeds below two runs and
/// MixedScenarios when fingerprints disagree. Order of `runs` is irrelevant.
AggregateResult aggregate(std::vector<RunResult> runs);

}  // namespace rrpm

#endif  // RRPM_METRICS_HPP
