#ifndef RRPM_SIMULATION_HPP
#define RRPM_SIMULATION_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "rrpm/metrics.hpp"
#include "rrpm/mobility.hpp"
#include "rrpm/model.hpp"
#include "rrpm/network.hpp"

namespace rrpm {

/// Patients, caregivers, clinical staff, employed then unemployed relays,
/// destinations, POIs, with dense ids in that order. Caregiver i is paired
/// with patient i mod |A|, which is a bijection when the counts match.
Roster synthesize_population(const ScenarioSpec& spec);

/// Everything an observer can see at the end of one round.
struct StepView {
  Minutes time = 0;
  int period_id = 0;
  const Roster& roster;
  std::span<const MobileNode> mobile;
  std::span<const StationarySite> pois;
  std::span<const StationarySite> destinations;
  std::span<const RadioProfile> radios;
  const MessageStores& stores;
  std::span<const Message> messages;
  std::span<const ContactEvent> contacts;
  const ExchangeOutcome& exchange;
  std::span<const MessageId> expired;
};

class SimulationObserver {
public:
  virtual ~SimulationObserver() = default;
  virtual void on_step(const StepView& view) = 0;
};

/// Creation times for every message, by (patient, slot).
std::vector<Message> schedule_messages(const ScenarioSpec& spec, const Roster& roster, Rng& rng);

/// One seeded run. Rounds happen at t = 0, dt, 2dt, ... up to the duration;
/// each round moves nodes (except at t = 0), creates due messages, detects
/// contacts, exchanges, then expires. Stops early once every message is
/// delivered or expired.
RunResult run_simulation(const ScenarioSpec& spec, std::uint64_t seed,
                         SimulationObserver* observer = nullptr);

/// CSV: time_min,node_id,class,state,col,row for every mobile node each round.
class TrajectoryWriter : public SimulationObserver {
public:
  explicit TrajectoryWriter(std::ostream& out);
  void on_step(const StepView& view) override;

private:
  std::ostream& out_;
};

/// CSV: time_min,event,node_a,node_b,message_id with event one of
/// contact|transfer|delivery|expiry. Unused columns are left empty.
class EventLogWriter : public SimulationObserver {
public:
  explicit EventLogWriter(std::ostream& out);
  void on_step(const StepView& view) override;

private:
  std::ostream& out_;
};

/// Fans one callback out to several observers.
class ObserverList : public SimulationObserver {
public:
  void add(SimulationObserver* o) { observers_.push_back(o); }
  bool empty() const { return observers_.empty(); }
  void on_step(const StepView& view) override {
    for (auto* o : observers_) o->on_step(view);
  }

private:
  std::vector<SimulationObserver*> observers_;
};

}  // namespace rrpm

#endif  // RRPM_SIMULATION_HPP
