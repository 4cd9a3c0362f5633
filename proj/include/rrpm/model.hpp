#ifndef RRPM_MODEL_HPP
#define RRPM_MODEL_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rrpm/error.hpp"

namespace rrpm {

using NodeId = std::uint32_t;
using MessageId = std::uint32_t;
/// Simulation time and durations, in whole minutes.
using Minutes = std::int64_t;
using Rng = std::mt19937_64;

constexpr Minutes kMinutesPerDay = 24 * 60;

/// Independent engine for one simulation run, keyed only by the run seed.
Rng make_run_rng(std::uint64_t seed);

struct Grid {
  int side_cells = 820;
  double cell_size_ft = 10.0;

  std::int64_t total_cells() const {
    return static_cast<std::int64_t>(side_cells) * side_cells;
  }
  bool operator==(const Grid&) const = default;
};

struct Position {
  int col = 0;
  int row = 0;

  auto operator<=>(const Position&) const = default;
};

bool in_bounds(const Grid& grid, Position p);

/// Euclidean distance between cell centres, in feet.
double distance_ft(const Grid& grid, Position a, Position b);

enum class NodeClass {
  Patient,
  Caregiver,
  RelayEmployed,
  RelayUnemployed,
  ClinicalStaff,
  Destination,
  PointOfInterest,
};

/// Mobility families; every member of a group shares its transition tables.
enum class ClassGroup { CUA, ES };

enum class MobilityState { Home = 0, Work = 1, Poi = 2 };

constexpr std::array<MobilityState, 3> kMobilityStates{MobilityState::Home, MobilityState::Work,
                                                       MobilityState::Poi};

std::string_view to_string(NodeClass c);
std::string_view to_string(ClassGroup g);
std::string_view to_string(MobilityState s);

bool is_stationary(NodeClass c);
/// Empty for stationary classes.
std::optional<ClassGroup> class_group(NodeClass c);

// ---------------------------------------------------------------------------
// Period clock

struct Period {
  int id = 0;
  int start_minute = 0;  ///< time of day, inclusive
  int end_minute = 0;    ///< time of day, exclusive; may be < start (wraps midnight)

  bool operator==(const Period&) const = default;
};

class PeriodSchedule {
public:
  /// Throws OutOfRange unless the periods tile [00:00, 24:00) exactly.
  explicit PeriodSchedule(std::vector<Period> periods);

  static PeriodSchedule standard();

  const std::vector<Period>& periods() const { return periods_; }
  int period_at_time_of_day(int minute_of_day) const;
  Minutes duration_of(int period_id) const;

  bool operator==(const PeriodSchedule&) const = default;

private:
  std::vector<Period> periods_;
};

/// Period in force at `time` minutes after a start at `start_time_of_day`.
int period_of(Minutes time, const PeriodSchedule& schedule, int start_time_of_day);

// ---------------------------------------------------------------------------
// Transition tables

using Distribution = std::array<double, 3>;

struct TransitionTable {
  ClassGroup group = ClassGroup::CUA;
  int period_id = 1;
  Distribution initial{};
  /// rows = current state, columns = next state, both in (Home, Work, Poi) order.
  std::array<Distribution, 3> matrix{};

  bool operator==(const TransitionTable&) const = default;
};

/// Divides each row and the initial vector by its own sum. Rows already within
/// 1e-12 of stochastic are left untouched so normalization is idempotent.
TransitionTable normalize_transition_table(const TransitionTable& raw);

bool is_normalized(const TransitionTable& table, double tolerance = 1e-9);

class TransitionTables {
public:
  TransitionTables() = default;
  explicit TransitionTables(std::vector<TransitionTable> tables);

  /// Raw values as published: two class groups by four periods.
  static TransitionTables published_raw();

  const TransitionTable& at(ClassGroup group, int period_id) const;
  const TransitionTable* find(ClassGroup group, int period_id) const;
  const std::vector<TransitionTable>& all() const { return tables_; }

  TransitionTables normalized() const;
  /// Replaces (group, period) entries present in `overrides`.
  void merge(const std::vector<TransitionTable>& overrides);

  bool operator==(const TransitionTables&) const = default;

private:
  std::vector<TransitionTable> tables_;  // sorted by (group, period)
};

/// CSV columns: class_group, period, kind(initial|row_home|row_work|row_poi),
/// p_home, p_work, p_poi. Each (group, period) that appears must list all four
/// kinds. Returned tables are raw.
std::vector<TransitionTable> parse_transition_csv(std::istream& in);

// ---------------------------------------------------------------------------
// Messages

struct Message {
  MessageId id = 0;
  NodeId source = 0;
  Minutes created_at = 0;
  Minutes ttl = kMinutesPerDay;
  std::optional<Minutes> delivered_at;
  bool expired = false;

  Minutes expires_at() const { return created_at + ttl; }
  bool delivered() const { return delivered_at.has_value(); }
  std::optional<Minutes> latency() const {
    if (!delivered_at) return std::nullopt;
    return *delivered_at - created_at;
  }
  /// Created, undelivered, unexpired and still within its TTL at `time`.
  bool live_at(Minutes time) const {
    return !delivered() && !expired && created_at <= time && time <= expires_at();
  }

  bool operator==(const Message&) const = default;
};

// ---------------------------------------------------------------------------
// Scenario

struct Population {
  int adults = 400;
  int patients = 10;
  int caregivers = 10;
  int clinical_staff = 2;
  int destinations = 1;
  int pois = 25;
  double participation = 0.3;
  double employed_ratio = 0.935;

  // Derived during validation.
  int relays = 0;
  int employed_relays = 0;

  int unemployed_relays() const { return relays - employed_relays; }
  int mobile_nodes() const { return patients + caregivers + clinical_staff + relays; }
  int total_nodes() const { return mobile_nodes() + destinations + pois; }

  bool operator==(const Population&) const = default;
};

struct RadioParams {
  double range_mean_ft = 60.0;
  double range_var_ft2 = 20.0;

  bool operator==(const RadioParams&) const = default;
};

struct MessageParams {
  double ttl_hours = 24.0;
  int per_patient_per_day = 1;
  /// Creation times are jittered uniformly by up to this many minutes,
  /// snapped down to the timestep. Zero keeps every message at its slot.
  int creation_jitter_minutes = 0;

  bool operator==(const MessageParams&) const = default;
};

struct SimParams {
  int timestep_minutes = 30;
  double duration_hours = 24.0;
  int start_time_of_day = 0;  ///< minutes after midnight
  std::uint64_t seed = 0;

  bool operator==(const SimParams&) const = default;
};

enum class SiteKind { Poi, Destination };

/// A fixed POI or destination location loaded from a coordinates file.
struct Site {
  SiteKind kind = SiteKind::Poi;
  Position cell;

  bool operator==(const Site&) const = default;
};

std::vector<Site> parse_sites_csv(std::istream& in);

struct ScenarioSpec {
  Grid grid;
  PeriodSchedule schedule = PeriodSchedule::standard();
  TransitionTables tables = TransitionTables::published_raw();  ///< normalized once validated
  Population population;
  RadioParams radio;
  MessageParams message;
  SimParams sim;
  std::vector<Site> sites;  ///< empty: draw POI/destination cells at random

  Minutes ttl() const;
  Minutes duration() const;
  Minutes timestep() const { return sim.timestep_minutes; }
  int messages_per_patient() const;
  int total_messages() const { return population.patients * messages_per_patient(); }

  bool operator==(const ScenarioSpec&) const = default;
};

using RawConfig = std::map<std::string, std::string>;

/// Parses `key = value` lines; '#' starts a comment.
RawConfig parse_key_values(std::istream& in);

/// Applies defaults for absent keys and checks every scenario invariant.
/// Transition tables start from the published values, normalized.
ScenarioSpec validate_scenario(const RawConfig& raw);

/// Re-checks a spec, recomputes derived counts and normalizes its tables.
/// validate_scenario(validate_scenario(s)) == validate_scenario(s).
ScenarioSpec validate_scenario(ScenarioSpec spec);

/// Canonical key-value view of the scalar settings (tables and sites excluded).
RawConfig to_raw_config(const ScenarioSpec& spec);

/// Reads a scenario file. The optional keys `mobility.tables_csv` and
/// `placement.sites_csv` name override files relative to the scenario file.
ScenarioSpec load_scenario(const std::string& path);

/// Human-readable notes about legal but questionable settings.
std::vector<std::string> scenario_warnings(const ScenarioSpec& spec);

/// Stable hex digest of everything except the seed.
std::string fingerprint(const ScenarioSpec& spec);

std::string format_time_of_day(int minute_of_day);
int parse_time_of_day(const std::string& text);

// ---------------------------------------------------------------------------
// Roster

struct RosterEntry {
  NodeId id = 0;
  NodeClass cls = NodeClass::Patient;
  std::optional<NodeId> paired_patient;  ///< caregivers only
};

/// Ids are dense: mobile nodes first (patients, caregivers, staff, employed
/// relays, unemployed relays), then destinations, then POIs.
struct Roster {
  std::vector<RosterEntry> nodes;

  std::size_t size() const { return nodes.size(); }
  std::vector<NodeId> ids_of(NodeClass c) const;
};

}  // namespace rrpm

#endif  // RRPM_MODEL_HPP
