#include "rrpm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rrpm {

double delivery_probability(int delivered_count, int total_messages) {
  if (total_messages <= 0) throw Error(ErrorKind::EmptyMessageSet, "no messages were generated");
  if (delivered_count < 0 || delivered_count > total_messages)
    throw Error(ErrorKind::OutOfRange, "delivered count outside [0, total]");
  return static_cast<double>(delivered_count) / static_cast<double>(total_messages);
}

Minutes max_latency(std::span<const Minutes> latencies) {
  if (latencies.empty()) throw Error(ErrorKind::NoDeliveries, "no delivered messages");
  return *std::max_element(latencies.begin(), latencies.end());
}

RunResult finalize_run(RunResult r) {
  r.delivered_count = static_cast<int>(r.latencies.size());
  r.delivery_probability = delivery_probability(r.delivered_count, r.total_messages);
  if (r.latencies.empty()) {
    r.max_latency.reset();
    r.mean_latency.reset();
  } else {
    r.max_latency = max_latency(r.latencies);
    const double sum = std::accumulate(r.latencies.begin(), r.latencies.end(), 0.0);
    r.mean_latency = sum / static_cast<double>(r.latencies.size());
  }
  return r;
}

double mean_of(std::span<const double> values) {
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double standard_error(std::span<const double> values) {
  if (values.size() < 2)
    throw Error(ErrorKind::InsufficientSeeds, "standard error needs at least two values");
  const double mean = mean_of(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double n = static_cast<double>(values.size());
  return std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
}

AggregateResult aggregate(std::vector<RunResult> runs) {
  if (runs.size() < 2)
    throw Error(ErrorKind::InsufficientSeeds,
                "aggregation needs at least two seeds, got " + std::to_string(runs.size()));
  for (const auto& r : runs)
    if (r.scenario_fingerprint != runs.front().scenario_fingerprint)
      throw Error(ErrorKind::MixedScenarios, "runs come from different scenarios");
  // Sorting first makes every floating-point sum independent of input order.
  std::sort(runs.begin(), runs.end(),
            [](const RunResult& a, const RunResult& b) { return a.seed < b.seed; });

  AggregateResult out;
  out.scenario_fingerprint = runs.front().scenario_fingerprint;
  out.n_seeds = static_cast<int>(runs.size());

  std::vector<double> delivery, latency;
  for (const auto& r : runs) {
    delivery.push_back(r.delivery_probability);
    if (r.mean_latency)
      latency.push_back(*r.mean_latency);
    else
      ++out.seeds_with_no_delivery;
    if (r.max_latency) out.max_latency = std::max(out.max_latency.value_or(0), *r.max_latency);
  }
  out.mean_delivery = mean_of(delivery);
  out.sem_delivery = standard_error(delivery);
  if (!latency.empty()) out.mean_latency = mean_of(latency);
  if (latency.size() >= 2) out.sem_latency = standard_error(latency);
  out.runs = std::move(runs);
  return out;
}

}  // namespace rrpm
