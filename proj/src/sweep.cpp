#include "rrpm/sweep.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "rrpm/simulation.hpp"

namespace rrpm {

std::vector<SweepPoint> SweepSpec::points() const {
  const std::vector<int> ps = patients.empty() ? std::vector<int>{base.population.patients} : patients;
  const std::vector<double> is =
      participation.empty() ? std::vector<double>{base.population.participation} : participation;
  std::vector<SweepPoint> out;
  for (int p : ps)
    for (double i : is) out.push_back({p, i});
  return out;
}

ScenarioSpec SweepSpec::scenario_for(const SweepPoint& point) const {
  ScenarioSpec spec = base;
  spec.population.patients = point.patients;
  spec.population.participation = point.participation;
  if (caregivers_follow_patients && !patients.empty()) spec.population.caregivers = point.patients;
  return validate_scenario(std::move(spec));
}

std::vector<std::uint64_t> SweepSpec::seeds() const {
  if (last_seed < first_seed) throw Error(ErrorKind::OutOfRange, "seed range is empty");
  std::vector<std::uint64_t> out;
  for (std::uint64_t s = first_seed;; ++s) {
    out.push_back(s);
    if (s == last_seed) break;
  }
  return out;
}

std::vector<double> expand_range(double start, double step, double stop) {
  if (!(step > 0.0) || stop < start)
    throw Error(ErrorKind::OutOfRange, "range needs step > 0 and stop >= start");
  std::vector<double> out;
  for (long k = 0;; ++k) {
    const double v = std::round((start + static_cast<double>(k) * step) * 1e9) / 1e9;
    if (v > stop + 1e-9) break;
    out.push_back(v);
  }
  return out;
}

SweepTable run_sweep(const SweepSpec& sweep, unsigned jobs) {
  const auto points = sweep.points();
  const auto seeds = sweep.seeds();
  std::vector<ScenarioSpec> specs;
  specs.reserve(points.size());
  for (const auto& p : points) specs.push_back(sweep.scenario_for(p));

  const std::size_t total = points.size() * seeds.size();
  std::vector<RunResult> results(total);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t task = next++; task < total; task = next++) {
      try {
        const std::size_t point = task / seeds.size();
        results[task] = run_simulation(specs[point], seeds[task % seeds.size()]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(total)));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  SweepTable table;
  for (std::size_t i = 0; i < points.size(); ++i) {
    SweepRow row;
    row.point = points[i];
    std::vector<RunResult> runs(results.begin() + static_cast<std::ptrdiff_t>(i * seeds.size()),
                                results.begin() + static_cast<std::ptrdiff_t>((i + 1) * seeds.size()));
    try {
      row.result = aggregate(std::move(runs));
    } catch (const Error& e) {
      row.error = e;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace rrpm
