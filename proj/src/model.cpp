#include "rrpm/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <numeric>
#include <set>
#include <sstream>

#include "rrpm/text.hpp"

namespace rrpm {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::MissingKey: return "MissingKey";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::CardinalityViolation: return "CardinalityViolation";
    case ErrorKind::DegenerateRow: return "DegenerateRow";
    case ErrorKind::InvalidRadioParams: return "InvalidRadioParams";
    case ErrorKind::EmptyMessageSet: return "EmptyMessageSet";
    case ErrorKind::NoDeliveries: return "NoDeliveries";
    case ErrorKind::MixedScenarios: return "MixedScenarios";
    case ErrorKind::InsufficientSeeds: return "InsufficientSeeds";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Rng make_run_rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    0x72'72'70'6du};
  return Rng(seq);
}

bool in_bounds(const Grid& grid, Position p) {
  return p.col >= 0 && p.row >= 0 && p.col < grid.side_cells && p.row < grid.side_cells;
}

double distance_ft(const Grid& grid, Position a, Position b) {
  return std::hypot(static_cast<double>(a.col - b.col), static_cast<double>(a.row - b.row)) *
         grid.cell_size_ft;
}

std::string_view to_string(NodeClass c) {
  switch (c) {
    case NodeClass::Patient: return "patient";
    case NodeClass::Caregiver: return "caregiver";
    case NodeClass::RelayEmployed: return "relay_employed";
    case NodeClass::RelayUnemployed: return "relay_unemployed";
    case NodeClass::ClinicalStaff: return "clinical_staff";
    case NodeClass::Destination: return "destination";
    case NodeClass::PointOfInterest: return "poi";
  }
  return "unknown";
}

std::string_view to_string(ClassGroup g) { return g == ClassGroup::CUA ? "CUA" : "ES"; }

std::string_view to_string(MobilityState s) {
  switch (s) {
    case MobilityState::Home: return "home";
    case MobilityState::Work: return "work";
    case MobilityState::Poi: return "poi";
  }
  return "unknown";
}

bool is_stationary(NodeClass c) {
  return c == NodeClass::Destination || c == NodeClass::PointOfInterest;
}

std::optional<ClassGroup> class_group(NodeClass c) {
  switch (c) {
    case NodeClass::Patient:
    case NodeClass::Caregiver:
    case NodeClass::RelayUnemployed: return ClassGroup::CUA;
    case NodeClass::RelayEmployed:
    case NodeClass::ClinicalStaff: return ClassGroup::ES;
    default: return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Period clock

namespace {

int period_length(const Period& p) {
  int len = p.end_minute - p.start_minute;
  return len <= 0 ? len + static_cast<int>(kMinutesPerDay) : len;
}

bool period_contains(const Period& p, int minute) {
  if (p.start_minute < p.end_minute) return minute >= p.start_minute && minute < p.end_minute;
  return minute >= p.start_minute || minute < p.end_minute;
}

}  // namespace

PeriodSchedule::PeriodSchedule(std::vector<Period> periods) : periods_(std::move(periods)) {
  if (periods_.empty()) throw Error(ErrorKind::OutOfRange, "period schedule is empty");
  std::set<int> ids;
  long total = 0;
  for (const auto& p : periods_) {
    if (p.start_minute < 0 || p.start_minute >= kMinutesPerDay || p.end_minute < 0 ||
        p.end_minute >= kMinutesPerDay)
      throw Error(ErrorKind::OutOfRange, "period bounds must lie in [00:00, 24:00)");
    if (!ids.insert(p.id).second)
      throw Error(ErrorKind::OutOfRange, "duplicate period id " + std::to_string(p.id));
    total += period_length(p);
  }
  if (total != kMinutesPerDay)
    throw Error(ErrorKind::OutOfRange, "periods do not cover the day exactly");
  for (int minute = 0; minute < kMinutesPerDay; ++minute) {
    int hits = 0;
    for (const auto& p : periods_) hits += period_contains(p, minute) ? 1 : 0;
    if (hits != 1)
      throw Error(ErrorKind::OutOfRange, "periods overlap or leave a gap at " +
                                             format_time_of_day(minute));
  }
}

PeriodSchedule PeriodSchedule::standard() {
  return PeriodSchedule({{1, 19 * 60, 6 * 60 + 30},
                         {2, 6 * 60 + 30, 9 * 60 + 30},
                         {3, 9 * 60 + 30, 16 * 60 + 30},
                         {4, 16 * 60 + 30, 19 * 60}});
}

int PeriodSchedule::period_at_time_of_day(int minute_of_day) const {
  for (const auto& p : periods_)
    if (period_contains(p, minute_of_day)) return p.id;
  throw Error(ErrorKind::OutOfRange, "no period at " + std::to_string(minute_of_day));
}

Minutes PeriodSchedule::duration_of(int period_id) const {
  for (const auto& p : periods_)
    if (p.id == period_id) return period_length(p);
  throw Error(ErrorKind::OutOfRange, "unknown period " + std::to_string(period_id));
}

int period_of(Minutes time, const PeriodSchedule& schedule, int start_time_of_day) {
  Minutes tod = (start_time_of_day + time) % kMinutesPerDay;
  if (tod < 0) tod += kMinutesPerDay;
  return schedule.period_at_time_of_day(static_cast<int>(tod));
}

std::string format_time_of_day(int minute_of_day) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d:%02d", minute_of_day / 60, minute_of_day % 60);
  return buf;
}

int parse_time_of_day(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw Error(ErrorKind::ParseError, "expected HH:MM, got '" + text + "'");
  const int h = parse_int(text.substr(0, colon), "hours");
  const int m = parse_int(text.substr(colon + 1), "minutes");
  if (h < 0 || h > 23 || m < 0 || m > 59)
    throw Error(ErrorKind::OutOfRange, "time of day out of range: '" + text + "'");
  return h * 60 + m;
}

// ---------------------------------------------------------------------------
// Transition tables

namespace {

Distribution normalize_row(const Distribution& row, const char* what) {
  for (double v : row)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw Error(ErrorKind::OutOfRange, std::string(what) + " has a negative or non-finite entry");
  const double sum = row[0] + row[1] + row[2];
  if (sum <= 0.0) throw Error(ErrorKind::DegenerateRow, std::string(what) + " sums to zero");
  if (std::abs(sum - 1.0) <= 1e-12) return row;
  return {row[0] / sum, row[1] / sum, row[2] / sum};
}

bool row_ok(const Distribution& row, double tolerance) {
  for (double v : row)
    if (v < 0.0 || v > 1.0) return false;
  return std::abs(row[0] + row[1] + row[2] - 1.0) <= tolerance;
}

}  // namespace

TransitionTable normalize_transition_table(const TransitionTable& raw) {
  TransitionTable out = raw;
  out.initial = normalize_row(raw.initial, "initial vector");
  static constexpr const char* kRowNames[] = {"home row", "work row", "poi row"};
  for (std::size_t i = 0; i < 3; ++i) out.matrix[i] = normalize_row(raw.matrix[i], kRowNames[i]);
  return out;
}

bool is_normalized(const TransitionTable& table, double tolerance) {
  if (!row_ok(table.initial, tolerance)) return false;
  return std::all_of(table.matrix.begin(), table.matrix.end(),
                     [&](const Distribution& r) { return row_ok(r, tolerance); });
}

TransitionTables::TransitionTables(std::vector<TransitionTable> tables) {
  merge(tables);
}

TransitionTables TransitionTables::published_raw() {
  using G = ClassGroup;
  // clang-format off
  return TransitionTables({
      {G::CUA, 1, {0.85, 0, 0.015}, {{{0.94, 0, 0.064}, {0, 1, 0}, {0.37, 0, 0.63}}}},
      {G::CUA, 2, {0.93, 0, 0.070}, {{{0.97, 0, 0.032}, {0, 1, 0}, {0.59, 0, 0.41}}}},
      {G::CUA, 3, {0.76, 0, 0.24},  {{{0.89, 0, 0.11},  {0, 1, 0}, {0.36, 0, 0.64}}}},
      {G::CUA, 4, {0.77, 0, 0.23},  {{{0.91, 0, 0.086}, {0, 1, 0}, {0.30, 0, 0.70}}}},
      {G::ES, 1, {0.70, 0.079, 0.22},
       {{{0.85, 0.019, 0.13}, {0.14, 0.81, 0.043}, {0.39, 0.32, 0.58}}}},
      {G::ES, 2, {0.71, 0.16, 0.13},
       {{{0.86, 0.079, 0.061}, {0.17, 0.61, 0.21}, {0.51, 0.18, 0.31}}}},
      {G::ES, 3, {0.50, 0.33, 0.13},
       {{{0.80, 0.083, 0.12}, {0.063, 0.90, 0.037}, {0.30, 0.057, 0.64}}}},
      {G::ES, 4, {0.48, 0.20, 0.32},
       {{{0.80, 0.027, 0.17}, {0.042, 0.88, 0.78}, {0.28, 0.058, 0.66}}}},
  });
  // clang-format on
}

const TransitionTable* TransitionTables::find(ClassGroup group, int period_id) const {
  for (const auto& t : tables_)
    if (t.group == group && t.period_id == period_id) return &t;
  return nullptr;
}

const TransitionTable& TransitionTables::at(ClassGroup group, int period_id) const {
  if (const auto* t = find(group, period_id)) return *t;
  throw Error(ErrorKind::MissingKey, "no transition table for group " +
                                         std::string(to_string(group)) + " period " +
                                         std::to_string(period_id));
}

TransitionTables TransitionTables::normalized() const {
  TransitionTables out;
  out.tables_.reserve(tables_.size());
  for (const auto& t : tables_) out.tables_.push_back(normalize_transition_table(t));
  return out;
}

void TransitionTables::merge(const std::vector<TransitionTable>& overrides) {
  for (const auto& o : overrides) {
    auto it = std::find_if(tables_.begin(), tables_.end(), [&](const TransitionTable& t) {
      return t.group == o.group && t.period_id == o.period_id;
    });
    if (it != tables_.end())
      *it = o;
    else
      tables_.push_back(o);
  }
  std::sort(tables_.begin(), tables_.end(), [](const TransitionTable& a, const TransitionTable& b) {
    return std::pair(a.group, a.period_id) < std::pair(b.group, b.period_id);
  });
}

std::vector<TransitionTable> parse_transition_csv(std::istream& in) {
  struct Partial {
    TransitionTable table;
    std::array<bool, 4> seen{};
  };
  std::map<std::pair<ClassGroup, int>, Partial> partial;
  const auto rows = read_csv(in);
  bool header = true;
  for (const auto& row : rows) {
    if (header) {
      header = false;
      if (!row.empty() && row[0] == "class_group") continue;
    }
    if (row.size() != 6)
      throw Error(ErrorKind::ParseError, "transition CSV rows need 6 columns");
    ClassGroup group;
    if (row[0] == "CUA")
      group = ClassGroup::CUA;
    else if (row[0] == "ES")
      group = ClassGroup::ES;
    else
      throw Error(ErrorKind::ParseError, "unknown class group '" + row[0] + "'");
    const int period = parse_int(row[1], "period");
    int kind;
    if (row[2] == "initial")
      kind = 0;
    else if (row[2] == "row_home")
      kind = 1;
    else if (row[2] == "row_work")
      kind = 2;
    else if (row[2] == "row_poi")
      kind = 3;
    else
      throw Error(ErrorKind::ParseError, "unknown row kind '" + row[2] + "'");
    const Distribution values{parse_double(row[3], "p_home"), parse_double(row[4], "p_work"),
                              parse_double(row[5], "p_poi")};
    auto& p = partial[{group, period}];
    p.table.group = group;
    p.table.period_id = period;
    if (kind == 0)
      p.table.initial = values;
    else
      p.table.matrix[kind - 1] = values;
    p.seen[kind] = true;
  }
  std::vector<TransitionTable> out;
  for (const auto& [key, p] : partial) {
    if (!std::all_of(p.seen.begin(), p.seen.end(), [](bool b) { return b; }))
      throw Error(ErrorKind::MissingKey, "transition CSV is missing rows for group " +
                                             std::string(to_string(key.first)) + " period " +
                                             std::to_string(key.second));
    out.push_back(p.table);
  }
  return out;
}

std::vector<Site> parse_sites_csv(std::istream& in) {
  std::vector<Site> out;
  bool header = true;
  for (const auto& row : read_csv(in)) {
    if (header) {
      header = false;
      if (!row.empty() && row[0] == "kind") continue;
    }
    if (row.size() != 3) throw Error(ErrorKind::ParseError, "site CSV rows need 3 columns");
    Site s;
    if (row[0] == "poi")
      s.kind = SiteKind::Poi;
    else if (row[0] == "destination")
      s.kind = SiteKind::Destination;
    else
      throw Error(ErrorKind::ParseError, "unknown site kind '" + row[0] + "'");
    s.cell = {parse_int(row[1], "col"), parse_int(row[2], "row")};
    out.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scenario

Minutes ScenarioSpec::ttl() const { return std::llround(message.ttl_hours * 60.0); }

Minutes ScenarioSpec::duration() const { return std::llround(sim.duration_hours * 60.0); }

int ScenarioSpec::messages_per_patient() const {
  const Minutes interval = kMinutesPerDay / message.per_patient_per_day;
  return static_cast<int>((duration() + interval - 1) / interval);
}

RawConfig parse_key_values(std::istream& in) {
  RawConfig out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(trimmed.substr(0, eq));
    std::string value = trim(trimmed.substr(eq + 1));
    if (key.empty())
      throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": empty key");
    if (value.empty())
      throw Error(ErrorKind::MissingKey, "line " + std::to_string(lineno) + ": no value for " + key);
    if (!out.emplace(key, value).second)
      throw Error(ErrorKind::ParseError, "duplicate key " + key);
  }
  return out;
}

namespace {

class KeyReader {
public:
  explicit KeyReader(const RawConfig& raw) : raw_(raw) {}

  template <typename T>
  void read(const std::string& key, T& target) {
    used_.insert(key);
    auto it = raw_.find(key);
    if (it == raw_.end()) return;
    if constexpr (std::is_same_v<T, double>)
      target = parse_double(it->second, key);
    else if constexpr (std::is_same_v<T, std::uint64_t>)
      target = parse_u64(it->second, key);
    else
      target = parse_int(it->second, key);
  }

  void read_time(const std::string& key, int& target) {
    used_.insert(key);
    if (auto it = raw_.find(key); it != raw_.end()) target = parse_time_of_day(it->second);
  }

  void reject_unknown() const {
    for (const auto& [key, value] : raw_)
      if (!used_.count(key)) throw Error(ErrorKind::ParseError, "unknown key '" + key + "'");
  }

private:
  const RawConfig& raw_;
  std::set<std::string> used_;
};

void require(bool ok, ErrorKind kind, const std::string& what) {
  if (!ok) throw Error(kind, what);
}

}  // namespace

ScenarioSpec validate_scenario(const RawConfig& raw) {
  ScenarioSpec spec;
  KeyReader r(raw);
  r.read("grid.side_cells", spec.grid.side_cells);
  r.read("grid.cell_size_ft", spec.grid.cell_size_ft);
  r.read("population.adults", spec.population.adults);
  r.read("population.patients", spec.population.patients);
  r.read("population.caregivers", spec.population.caregivers);
  r.read("population.clinical_staff", spec.population.clinical_staff);
  r.read("population.destinations", spec.population.destinations);
  r.read("population.pois", spec.population.pois);
  r.read("population.participation", spec.population.participation);
  r.read("population.employed_ratio", spec.population.employed_ratio);
  r.read("radio.range_mean_ft", spec.radio.range_mean_ft);
  r.read("radio.range_var_ft2", spec.radio.range_var_ft2);
  r.read("message.ttl_hours", spec.message.ttl_hours);
  r.read("message.per_patient_per_day", spec.message.per_patient_per_day);
  r.read("message.creation_jitter_minutes", spec.message.creation_jitter_minutes);
  r.read("sim.timestep_minutes", spec.sim.timestep_minutes);
  r.read("sim.duration_hours", spec.sim.duration_hours);
  r.read_time("sim.start_time", spec.sim.start_time_of_day);
  r.read("sim.seed", spec.sim.seed);
  r.reject_unknown();
  return validate_scenario(std::move(spec));
}

ScenarioSpec validate_scenario(ScenarioSpec spec) {
  using K = ErrorKind;
  require(spec.grid.side_cells >= 1, K::OutOfRange, "grid.side_cells must be >= 1");
  require(spec.grid.cell_size_ft > 0 && std::isfinite(spec.grid.cell_size_ft), K::OutOfRange,
          "grid.cell_size_ft must be > 0");

  auto& pop = spec.population;
  require(pop.adults >= 1, K::OutOfRange, "population.adults must be >= 1");
  require(pop.patients >= 1, K::OutOfRange, "population.patients must be >= 1");
  require(pop.caregivers >= 0, K::OutOfRange, "population.caregivers must be >= 0");
  require(pop.clinical_staff >= 0 && pop.clinical_staff <= 2, K::OutOfRange,
          "population.clinical_staff must be in [0, 2]");
  require(pop.destinations >= 1, K::OutOfRange, "population.destinations must be >= 1");
  require(pop.pois >= 1, K::OutOfRange, "population.pois must be >= 1");
  require(pop.participation > 0.0 && pop.participation <= 1.0, K::OutOfRange,
          "population.participation must be in (0, 1]");
  require(pop.employed_ratio >= 0.0 && pop.employed_ratio <= 1.0, K::OutOfRange,
          "population.employed_ratio must be in [0, 1]");
  require(pop.pois + pop.destinations <= spec.grid.total_cells(), K::OutOfRange,
          "more stationary sites than grid cells");

  const long participants = std::lround(pop.participation * pop.adults);
  pop.relays = static_cast<int>(participants - (pop.patients + pop.caregivers + pop.clinical_staff));
  require(pop.relays >= 1, K::CardinalityViolation,
          "participation leaves " + std::to_string(pop.relays) + " relays; at least 1 is required");
  require(pop.destinations <= pop.patients, K::CardinalityViolation,
          "destinations (" + std::to_string(pop.destinations) + ") exceed patients (" +
              std::to_string(pop.patients) + ")");
  require(pop.patients < pop.relays, K::CardinalityViolation,
          "patients (" + std::to_string(pop.patients) + ") must be fewer than relays (" +
              std::to_string(pop.relays) + ")");
  pop.employed_relays = static_cast<int>(std::lround(pop.employed_ratio * pop.relays));

  require(spec.radio.range_var_ft2 >= 0.0, K::InvalidRadioParams,
          "radio.range_var_ft2 must be >= 0");
  require(spec.radio.range_mean_ft >= 0.0 && std::isfinite(spec.radio.range_mean_ft),
          K::InvalidRadioParams, "radio.range_mean_ft must be >= 0");

  require(spec.message.ttl_hours > 0.0 && spec.ttl() >= 1, K::OutOfRange,
          "message.ttl_hours must be > 0");
  require(spec.message.per_patient_per_day >= 1 &&
              spec.message.per_patient_per_day <= kMinutesPerDay,
          K::OutOfRange, "message.per_patient_per_day must be in [1, 1440]");
  require(spec.message.creation_jitter_minutes >= 0, K::OutOfRange,
          "message.creation_jitter_minutes must be >= 0");

  require(spec.sim.timestep_minutes >= 1, K::OutOfRange, "sim.timestep_minutes must be >= 1");
  require(spec.sim.duration_hours > 0.0 && spec.duration() >= 1, K::OutOfRange,
          "sim.duration_hours must be > 0");
  require(spec.sim.start_time_of_day >= 0 && spec.sim.start_time_of_day < kMinutesPerDay,
          K::OutOfRange, "sim.start_time out of range");

  for (ClassGroup g : {ClassGroup::CUA, ClassGroup::ES})
    for (const auto& p : spec.schedule.periods()) (void)spec.tables.at(g, p.id);
  spec.tables = spec.tables.normalized();
  // CUA nodes have no work site, so their tables must never lead into Work.
  for (const auto& t : spec.tables.all()) {
    if (t.group != ClassGroup::CUA) continue;
    require(t.initial[1] == 0.0 && t.matrix[0][1] == 0.0 && t.matrix[2][1] == 0.0,
            K::OutOfRange,
            "CUA period " + std::to_string(t.period_id) + " assigns probability to Work");
  }

  if (!spec.sites.empty()) {
    int pois = 0, dests = 0;
    std::set<Position> seen;
    for (const auto& s : spec.sites) {
      (s.kind == SiteKind::Poi ? pois : dests)++;
      require(in_bounds(spec.grid, s.cell), K::OutOfRange, "site outside the grid");
      require(seen.insert(s.cell).second, K::OutOfRange, "two sites share a cell");
    }
    require(pois == pop.pois && dests == pop.destinations, K::OutOfRange,
            "site file lists " + std::to_string(pois) + " POIs and " + std::to_string(dests) +
                " destinations; the scenario needs " + std::to_string(pop.pois) + " and " +
                std::to_string(pop.destinations));
  }
  return spec;
}

RawConfig to_raw_config(const ScenarioSpec& spec) {
  RawConfig raw;
  raw["grid.side_cells"] = std::to_string(spec.grid.side_cells);
  raw["grid.cell_size_ft"] = format_double(spec.grid.cell_size_ft);
  raw["population.adults"] = std::to_string(spec.population.adults);
  raw["population.patients"] = std::to_string(spec.population.patients);
  raw["population.caregivers"] = std::to_string(spec.population.caregivers);
  raw["population.clinical_staff"] = std::to_string(spec.population.clinical_staff);
  raw["population.destinations"] = std::to_string(spec.population.destinations);
  raw["population.pois"] = std::to_string(spec.population.pois);
  raw["population.participation"] = format_double(spec.population.participation);
  raw["population.employed_ratio"] = format_double(spec.population.employed_ratio);
  raw["radio.range_mean_ft"] = format_double(spec.radio.range_mean_ft);
  raw["radio.range_var_ft2"] = format_double(spec.radio.range_var_ft2);
  raw["message.ttl_hours"] = format_double(spec.message.ttl_hours);
  raw["message.per_patient_per_day"] = std::to_string(spec.message.per_patient_per_day);
  raw["message.creation_jitter_minutes"] = std::to_string(spec.message.creation_jitter_minutes);
  raw["sim.timestep_minutes"] = std::to_string(spec.sim.timestep_minutes);
  raw["sim.duration_hours"] = format_double(spec.sim.duration_hours);
  raw["sim.start_time"] = format_time_of_day(spec.sim.start_time_of_day);
  raw["sim.seed"] = std::to_string(spec.sim.seed);
  return raw;
}

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  return in;
}

}  // namespace

ScenarioSpec load_scenario(const std::string& path) {
  auto in = open_input(path);
  RawConfig raw = parse_key_values(in);
  const auto base = std::filesystem::path(path).parent_path();

  std::optional<std::filesystem::path> tables_csv, sites_csv;
  if (auto it = raw.find("mobility.tables_csv"); it != raw.end()) {
    tables_csv = base / it->second;
    raw.erase(it);
  }
  if (auto it = raw.find("placement.sites_csv"); it != raw.end()) {
    sites_csv = base / it->second;
    raw.erase(it);
  }
  ScenarioSpec spec = validate_scenario(raw);
  if (!tables_csv && !sites_csv) return spec;

  if (tables_csv) {
    auto tin = open_input(*tables_csv);
    spec.tables = TransitionTables::published_raw();
    spec.tables.merge(parse_transition_csv(tin));
  }
  if (sites_csv) {
    auto sin = open_input(*sites_csv);
    spec.sites = parse_sites_csv(sin);
  }
  return validate_scenario(std::move(spec));
}

std::vector<std::string> scenario_warnings(const ScenarioSpec& spec) {
  std::vector<std::string> out;
  const auto& pop = spec.population;
  if (pop.relays < 5 * pop.patients)
    out.push_back("relays (" + std::to_string(pop.relays) +
                  ") are fewer than five times the patients (" + std::to_string(pop.patients) +
                  "); patients are expected to be a small minority");
  return out;
}

std::string fingerprint(const ScenarioSpec& spec) {
  std::ostringstream canon;
  for (const auto& [k, v] : to_raw_config(spec))
    if (k != "sim.seed") canon << k << '=' << v << '\n';
  char buf[64];
  for (const auto& p : spec.schedule.periods())
    canon << "period " << p.id << ' ' << p.start_minute << ' ' << p.end_minute << '\n';
  for (const auto& t : spec.tables.all()) {
    canon << to_string(t.group) << ' ' << t.period_id;
    auto put = [&](const Distribution& d) {
      for (double v : d) {
        std::snprintf(buf, sizeof buf, " %a", v);
        canon << buf;
      }
    };
    put(t.initial);
    for (const auto& row : t.matrix) put(row);
    canon << '\n';
  }
  for (const auto& s : spec.sites)
    canon << (s.kind == SiteKind::Poi ? "poi " : "destination ") << s.cell.col << ' '
          << s.cell.row << '\n';

  // FNV-1a, 64 bit.
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : canon.str()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<NodeId> Roster::ids_of(NodeClass c) const {
  std::vector<NodeId> out;
  for (const auto& n : nodes)
    if (n.cls == c) out.push_back(n.id);
  return out;
}

}  // namespace rrpm
