#ifndef RRPM_SWEEP_HPP
#define RRPM_SWEEP_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rrpm/metrics.hpp"
#include "rrpm/model.hpp"

namespace rrpm {

struct SweepPoint {
  int patients = 0;
  double participation = 0.0;

  bool operator==(const SweepPoint&) const = default;
};

struct SweepSpec {
  ScenarioSpec base;
  std::vector<int> patients;          ///< empty: keep the base value
  std::vector<double> participation;  ///< empty: keep the base value
  std::uint64_t first_seed = 0;
  std::uint64_t last_seed = 99;       ///< inclusive
  /// Caregiver count tracks the patient count when patients are swept.
  bool caregivers_follow_patients = true;

  /// Patients-major cartesian product.
  std::vector<SweepPoint> points() const;
  /// Validated scenario for one point.
  ScenarioSpec scenario_for(const SweepPoint& point) const;
  std::vector<std::uint64_t> seeds() const;
};

struct SweepRow {
  SweepPoint point;
  std::optional<AggregateResult> result;
  std::optional<Error> error;  ///< set when the point could not be aggregated
};

struct SweepTable {
  std::vector<SweepRow> rows;
};

/// Inclusive `start:step:stop` expansion; values are rounded to 1e-9 so that
/// 0.1:0.1:1.0 yields exactly 0.1, 0.2, ..., 1.0.
std::vector<double> expand_range(double start, double step, double stop);

/// Runs every (point, seed) pair on `jobs` threads. Each run draws from its
/// own seed-keyed engine, so the table does not depend on `jobs` or
/// scheduling. Every point is validated before any run starts.
SweepTable run_sweep(const SweepSpec& sweep, unsigned jobs);

}  // namespace rrpm

#endif  // RRPM_SWEEP_HPP
