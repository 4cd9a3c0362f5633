// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "oracles.hpp"
#include "rrpm/simulation.hpp"
#include "rrpm/sweep.hpp"

namespace {

using namespace rrpm;
namespace fs = std::filesystem;

// Tolerances.
constexpr double kHeadlineDeliveryLo = 0.80, kHeadlineDeliveryHi = 1.00;
constexpr double kHeadlineLatencyLoH = 9.0, kHeadlineLatencyHiH = 17.0;
constexpr double kRangeLowCeiling = 0.40, kRangeHighFloor = 0.99;
constexpr double kGrandMeanLo = 0.75, kGrandMeanHi = 0.97;
constexpr double kSpearmanFloor = 0.9;
constexpr double kLatencyWindowLoH = 2.0, kLatencyWindowHiH = 20.0;
constexpr int kOracleInstances = 200;
constexpr long kInvariantNodeSteps = 1'000'000;
constexpr double kRowSumTolerance = 1e-9;
constexpr double kStationaryL1 = 0.02;
constexpr int kStationaryChains = 20000;
constexpr int kStationarySteps = 200;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string num(double v, int digits = 3) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

ScenarioSpec base_spec() { return load_scenario(RRPM_DEFAULT_CONFIG); }

SweepTable sweep_over(std::vector<int> patients, std::vector<double> participation) {
  SweepSpec s;
  s.base = base_spec();
  s.patients = std::move(patients);
  s.participation = std::move(participation);
  s.first_seed = 0;
  s.last_seed = 99;
  return run_sweep(s, std::max(1u, std::thread::hardware_concurrency()));
}

double hours(const AggregateResult& a) { return a.mean_latency.value_or(NAN) / 60.0; }

const SweepTable& participation_sweep() {
  static const SweepTable t = sweep_over({}, expand_range(0.1, 0.1, 1.0));
  return t;
}

const SweepTable& patients_sweep() {
  static const SweepTable t = sweep_over({2, 4, 6, 8, 10}, {0.3});
  return t;
}

const AggregateResult& at_participation(double i) {
  for (const auto& row : participation_sweep().rows)
    if (std::abs(row.point.participation - i) < 1e-9) return row.result.value();
  throw std::logic_error("participation point missing");
}

const AggregateResult& at_patients(int a) {
  for (const auto& row : patients_sweep().rows)
    if (row.point.patients == a) return row.result.value();
  throw std::logic_error("patients point missing");
}

Outcome headline() {
  const auto& a = at_participation(0.3);
  const double d = a.mean_delivery, z = hours(a);
  const bool ok = d >= kHeadlineDeliveryLo && d <= kHeadlineDeliveryHi && z >= kHeadlineLatencyLoH &&
                  z <= kHeadlineLatencyHiH;
  return {ok, "I=0.30 |A|=10 seeds 0..99: mean delivery " + num(d) + " (want [0.80, 1.00]), mean latency " +
                  num(z, 2) + " h (want [9, 17])"};
}

Outcome delivery_range() {
  double lo = 1, hi = 0, sum = 0;
  int n = 0;
  for (const auto& row : participation_sweep().rows) {
    const double d = row.result.value().mean_delivery;
    lo = std::min(lo, d);
    hi = std::max(hi, d);
    sum += d;
    ++n;
  }
  const double grand = sum / n;
  const bool ok = lo <= kRangeLowCeiling && hi >= kRangeHighFloor && grand >= kGrandMeanLo &&
                  grand <= kGrandMeanHi;
  return {ok, "per-point delivery spans [" + num(lo) + ", " + num(hi) +
                  "] (want min <= 0.40, max >= 0.99), grand mean " + num(grand) + " (want [0.75, 0.97])"};
}

Outcome trends() {
  const double z_low = hours(at_participation(0.1)), z_full = hours(at_participation(1.0));
  const double z_a2 = hours(at_patients(2)), z_a10 = hours(at_patients(10));
  std::vector<double> xs, ys;
  for (const auto& row : participation_sweep().rows) {
    xs.push_back(row.point.participation);
    ys.push_back(row.result.value().mean_delivery);
  }
  const double rho = oracle::spearman(xs, ys);
  const bool a = z_full < z_low, b = z_a10 >= z_a2, c = rho >= kSpearmanFloor;
  return {a && b && c, std::string("latency I=1.0 ") + num(z_full, 2) + " h < I=0.1 " + num(z_low, 2) +
                           " h [" + (a ? "ok" : "no") + "]; |A|=10 " + num(z_a10, 2) + " h >= |A|=2 " +
                           num(z_a2, 2) + " h [" + (b ? "ok" : "no") + "]; Spearman(I, delivery) " +
                           num(rho) + " >= 0.9 [" + (c ? "ok" : "no") + "]"};
}

Outcome latency_window() {
  bool ok = true;
  std::string detail = "I=0.30 patients sweep latency (h):";
  for (const auto& row : patients_sweep().rows) {
    const double z = hours(row.result.value());
    ok = ok && z >= kLatencyWindowLoH && z <= kLatencyWindowHiH;
    detail += " " + std::to_string(row.point.patients) + "->" + num(z, 2);
  }
  return {ok, detail + " (want each in [2, 20])"};
}

Outcome oracle_equivalence() {
  std::mt19937_64 gen(20240601);
  long mismatches = 0, comparisons = 0;
  for (int instance = 0; instance < kOracleInstances; ++instance) {
    const int n = std::uniform_int_distribution<int>(2, 10)(gen);
    const int rounds = std::uniform_int_distribution<int>(1, 10)(gen);
    const Grid grid{std::uniform_int_distribution<int>(1, 12)(gen), 10.0};
    std::uniform_int_distribution<int> cell(0, grid.side_cells - 1);
    std::normal_distribution<double> range(60.0, 15.0);
    std::uniform_int_distribution<NodeId> any(0, n - 1);

    std::vector<double> ranges(n);
    for (auto& r : ranges) r = std::max(0.0, range(gen));
    std::set<NodeId> dest_ids{any(gen)};
    std::vector<bool> is_dest(n, false);
    for (NodeId d : dest_ids) is_dest[d] = true;

    std::vector<Message> msgs;
    std::vector<oracle::EpidemicReference::Msg> ref_msgs;
    for (MessageId m = 0; m < 3; ++m) {
      NodeId src;
      do src = any(gen);
      while (dest_ids.count(src) && n > 1);
      Message msg;
      msg.id = m;
      msg.source = src;
      msg.created_at = 30 * std::uniform_int_distribution<int>(0, rounds - 1)(gen);
      msg.ttl = 30 * std::uniform_int_distribution<int>(0, rounds)(gen);
      msgs.push_back(msg);
      ref_msgs.push_back({src, msg.created_at, msg.ttl});
    }
    oracle::EpidemicReference ref(n, dest_ids, ref_msgs);
    MessageStores stores(n, msgs.size());

    for (int r = 0; r < rounds; ++r) {
      const Minutes t = 30 * r;
      std::vector<Position> pos(n);
      for (auto& p : pos) p = {cell(gen), cell(gen)};
      for (auto& m : msgs)
        if (m.created_at == t) stores.add(m.source, m.id);

      const auto contacts = detect_contacts(grid, pos, ranges, t);
      const auto expected = oracle::all_pairs_contacts(grid, pos, ranges);
      std::set<std::pair<NodeId, NodeId>> pairs(expected.begin(), expected.end());
      ++comparisons;
      bool same = contacts.size() == expected.size();
      for (std::size_t i = 0; same && i < contacts.size(); ++i)
        same = contacts[i].node_a == expected[i].first && contacts[i].node_b == expected[i].second;
      mismatches += !same;

      exchange(contacts, stores, msgs, is_dest, t);
      expire(msgs, stores, t);
      ref.round(t, pairs);
      for (MessageId m = 0; m < msgs.size(); ++m) {
        for (NodeId v = 0; v < static_cast<NodeId>(n); ++v) {
          ++comparisons;
          mismatches += stores.holds(v, m) != ref.holds(v, m);
        }
        ++comparisons;
        mismatches += msgs[m].delivered_at.value_or(-1) != ref.delivered_at(m);
      }
    }
  }
  return {mismatches == 0, std::to_string(kOracleInstances) + " instances (<= 10 nodes, <= 10 rounds), " +
                               std::to_string(comparisons) + " comparisons, " +
                               std::to_string(mismatches) + " mismatches"};
}

class InvariantObserver : public SimulationObserver {
public:
  explicit InvariantObserver(const ScenarioSpec& spec) : spec_(spec) {}

  void on_step(const StepView& v) override {
    node_steps += static_cast<long>(v.mobile.size());
    for (const auto& n : v.mobile) {
      check(position_consistent(n, v.pois), "state/position");
      check(n.group != ClassGroup::CUA || n.state != MobilityState::Work, "CUA at work");
    }
    if (previous_.empty()) previous_.assign(v.messages.size(), std::vector<bool>(v.stores.node_count()));
    check(v.stores.node_count() == v.roster.size(), "partition covers every node");
    for (MessageId m = 0; m < v.messages.size(); ++m) {
      const auto& msg = v.messages[m];
      std::size_t holders = 0;
      for (NodeId n = 0; n < v.stores.node_count(); ++n) {
        const bool h = v.stores.holds(n, m);
        holders += h;
        if (msg.live_at(v.time) || msg.delivered())
          check(!previous_[m][n] || h, "replica set shrank");
        previous_[m][n] = h;
      }
      check(holders <= v.stores.node_count(), "partition");
      if (v.time < msg.created_at) check(holders == 0, "held before creation");
      if (msg.expired) check(holders == 0 && !msg.delivered(), "expired copies remain");
      if (msg.live_at(v.time)) check(v.stores.holds(msg.source, m), "source lost its copy");
      if (msg.delivered()) {
        const Minutes z = *msg.latency();
        check(z >= 0 && z <= spec_.ttl(), "latency outside [0, TTL]");
      }
    }
  }

  void check(bool ok, const char* what) {
    if (!ok && violations++ < 5) first_failures += std::string(" ") + what + ";";
  }

  long node_steps = 0;
  long violations = 0;
  std::string first_failures;

private:
  const ScenarioSpec& spec_;
  std::vector<std::vector<bool>> previous_;
};

Outcome invariants() {
  long node_steps = 0, violations = 0, runs = 0;
  std::string failures;
  const auto base = base_spec();
  for (const auto& g : {ClassGroup::CUA, ClassGroup::ES})
    for (int p = 1; p <= 4; ++p) {
      const auto& t = base.tables.at(g, p);
      auto row_ok = [&](const Distribution& d) { return std::abs(d[0] + d[1] + d[2] - 1.0) <= kRowSumTolerance; };
      auto note = [&](bool ok) {
        if (!ok && violations++ < 5) failures += " row sum;";
      };
      note(row_ok(t.initial));
      for (const auto& row : t.matrix) note(row_ok(row));
    }
  for (std::uint64_t seed = 0; node_steps < kInvariantNodeSteps; ++seed) {
    auto spec = base;
    spec.population.participation = 0.1 * static_cast<double>(1 + seed % 10);
    spec = validate_scenario(spec);
    InvariantObserver obs(spec);
    const auto r = run_simulation(spec, seed, &obs);
    ++runs;
    node_steps += obs.node_steps;
    violations += obs.violations;
    failures += obs.first_failures;
    const bool eq3 = r.delivery_probability >= 0.0 && r.delivery_probability <= 1.0 &&
                     r.delivered_count + r.expired_count + r.live_at_end == r.total_messages &&
                     r.delivery_probability == static_cast<double>(r.delivered_count) / r.total_messages;
    if (!eq3 && violations++ < 5) failures += " delivery ratio bounds (seed " + std::to_string(seed) + ");";
  }
  return {violations == 0, std::to_string(node_steps) + " node-steps over " + std::to_string(runs) +
                               " runs, " + std::to_string(violations) + " violations" + failures};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const auto dir = fs::temp_directory_path() / "rrpm_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto sweep = [&](const std::string& name, int jobs) {
    const auto out = dir / name;
    const std::string cmd = std::string(RRPM_CLI) + " sweep --config " + RRPM_DEFAULT_CONFIG +
                            " --vary participation=0.1:0.1:1.0 --seeds 0:99 --jobs " +
                            std::to_string(jobs) + " --out " + out.string() + " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    return rc == 0 ? slurp(out) : std::string();
  };
  const auto a = sweep("a.csv", 1), b = sweep("b.csv", 1), c = sweep("c.csv", 8);
  fs::remove_all(dir);
  const bool ok = !a.empty() && a == b && a == c;
  return {ok, "participation sweep CSV (" + std::to_string(a.size()) + " bytes): rerun " +
                  (a == b ? "identical" : "differs") + ", --jobs 1 vs 8 " + (a == c ? "identical" : "differs")};
}

Outcome stationary() {
  const auto spec = base_spec();
  std::vector<StationarySite> pois;
  for (int i = 0; i < spec.population.pois; ++i)
    pois.push_back({static_cast<NodeId>(i), NodeClass::PointOfInterest, {i, i}});
  double worst = 0;
  std::string where;
  for (const auto g : {ClassGroup::CUA, ClassGroup::ES})
    for (int period = 1; period <= 4; ++period) {
      const auto& t = spec.tables.at(g, period);
      Rng rng = make_run_rng(static_cast<std::uint64_t>(period * 10 + static_cast<int>(g)));
      std::vector<MobileNode> nodes(kStationaryChains);
      for (auto& n : nodes) {
        n.group = g;
        n.cls = g == ClassGroup::CUA ? NodeClass::RelayUnemployed : NodeClass::RelayEmployed;
        n.assignment.home = {400, 400};
        if (g == ClassGroup::ES) n.assignment.work = pois[0].cell;
        enter_state(n, sample_categorical(t.initial, rng), pois, rng);
      }
      for (int s = 0; s < kStationarySteps; ++s)
        for (auto& n : nodes) n = step_mobility(std::move(n), period, spec.tables, pois, rng);
      Distribution freq{};
      for (const auto& n : nodes) freq[static_cast<int>(n.state)] += 1.0 / kStationaryChains;
      const auto pi = oracle::power_iterate(t.initial, t.matrix);
      const double l1 = std::abs(freq[0] - pi[0]) + std::abs(freq[1] - pi[1]) + std::abs(freq[2] - pi[2]);
      if (l1 >= worst) {
        worst = l1;
        where = std::string(to_string(g)) + " P" + std::to_string(period);
      }
    }
  return {worst <= kStationaryL1, "worst L1 " + num(worst, 4) + " at " + where + " (want <= 0.02 for all 8)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 headline", headline},
      {"2 delivery range", delivery_range},
      {"3 trends", trends},
      {"4 latency window", latency_window},
      {"5 oracle equivalence", oracle_equivalence},
      {"6 invariants", invariants},
      {"7 determinism", determinism},
      {"8 stationary occupancy", stationary},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << name << ": " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
