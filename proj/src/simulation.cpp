#include "rrpm/simulation.hpp"

#include <algorithm>
#include <ostream>

namespace rrpm {

Roster synthesize_population(const ScenarioSpec& spec) {
  const auto& pop = spec.population;
  Roster roster;
  roster.nodes.reserve(static_cast<std::size_t>(pop.total_nodes()));
  auto add = [&](NodeClass cls, int count) {
    for (int i = 0; i < count; ++i)
      roster.nodes.push_back({static_cast<NodeId>(roster.nodes.size()), cls, std::nullopt});
  };
  add(NodeClass::Patient, pop.patients);
  for (int i = 0; i < pop.caregivers; ++i)
    roster.nodes.push_back({static_cast<NodeId>(roster.nodes.size()), NodeClass::Caregiver,
                            static_cast<NodeId>(i % pop.patients)});
  add(NodeClass::ClinicalStaff, pop.clinical_staff);
  add(NodeClass::RelayEmployed, pop.employed_relays);
  add(NodeClass::RelayUnemployed, pop.unemployed_relays());
  add(NodeClass::Destination, pop.destinations);
  add(NodeClass::PointOfInterest, pop.pois);
  return roster;
}

std::vector<Message> schedule_messages(const ScenarioSpec& spec, const Roster& roster, Rng& rng) {
  const Minutes step = spec.timestep();
  const Minutes last_round = (spec.duration() / step) * step;
  const Minutes interval = kMinutesPerDay / spec.message.per_patient_per_day;
  const int per_patient = spec.messages_per_patient();
  std::uniform_int_distribution<int> jitter(0, spec.message.creation_jitter_minutes);

  std::vector<Message> out;
  for (NodeId patient : roster.ids_of(NodeClass::Patient)) {
    for (int k = 0; k < per_patient; ++k) {
      Minutes at = k * interval;
      if (spec.message.creation_jitter_minutes > 0) at += jitter(rng);
      at = std::min((at / step) * step, last_round);
      Message m;
      m.id = static_cast<MessageId>(out.size());
      m.source = patient;
      m.created_at = at;
      m.ttl = spec.ttl();
      out.push_back(m);
    }
  }
  return out;
}

RunResult run_simulation(const ScenarioSpec& spec, std::uint64_t seed,
                         SimulationObserver* observer) {
  Rng rng = make_run_rng(seed);
  const Roster roster = synthesize_population(spec);
  const Placement placement = assign_locations(spec, roster, rng);

  std::vector<NodeId> all_ids(roster.size());
  for (std::size_t i = 0; i < all_ids.size(); ++i) all_ids[i] = static_cast<NodeId>(i);
  const auto radios = sample_ranges(all_ids, spec.radio, rng);
  std::vector<double> ranges(radios.size());
  std::transform(radios.begin(), radios.end(), ranges.begin(),
                 [](const RadioProfile& r) { return r.range_ft; });

  const int start_tod = spec.sim.start_time_of_day;
  int period = period_of(0, spec.schedule, start_tod);

  std::vector<MobileNode> mobile;
  mobile.reserve(placement.mobile.size());
  for (const auto& a : placement.mobile)
    mobile.push_back(make_mobile_node(roster.nodes.at(a.node), a, period, spec.tables,
                                      placement.pois, rng));

  std::vector<Position> positions(roster.size());
  std::vector<bool> is_destination(roster.size(), false);
  for (const auto& s : placement.pois) positions[s.node] = s.cell;
  for (const auto& s : placement.destinations) {
    positions[s.node] = s.cell;
    is_destination[s.node] = true;
  }

  std::vector<Message> messages = schedule_messages(spec, roster, rng);
  MessageStores stores(roster.size(), messages.size());
  const Minutes last_creation =
      messages.empty() ? 0
                       : std::max_element(messages.begin(), messages.end(),
                                          [](const Message& a, const Message& b) {
                                            return a.created_at < b.created_at;
                                          })->created_at;

  RunResult result;
  result.seed = seed;
  result.scenario_fingerprint = fingerprint(spec);
  result.total_messages = static_cast<int>(messages.size());

  const Minutes step = spec.timestep();
  for (Minutes t = 0; t <= spec.duration(); t += step) {
    if (t > 0) {
      period = period_of(t, spec.schedule, start_tod);
      for (auto& node : mobile)
        node = step_mobility(std::move(node), period, spec.tables, placement.pois, rng);
    }
    for (const auto& node : mobile) positions[node.id] = node.position;
    for (const auto& m : messages)
      if (m.created_at == t) stores.add(m.source, m.id);

    const auto contacts = detect_contacts(spec.grid, positions, ranges, t);
    const auto outcome = exchange(contacts, stores, messages, is_destination, t);
    const auto expired = expire(messages, stores, t);
    result.end_time = t;

    if (observer) {
      observer->on_step(StepView{t, period, roster, mobile, placement.pois,
                                 placement.destinations, radios, stores, messages, contacts,
                                 outcome, expired});
    }

    const bool all_resolved = std::all_of(messages.begin(), messages.end(), [](const Message& m) {
      return m.delivered() || m.expired;
    });
    if (t >= last_creation && all_resolved) break;
  }

  for (const auto& m : messages) {
    if (m.delivered())
      result.latencies.push_back(*m.latency());
    else if (m.expired)
      ++result.expired_count;
    else
      ++result.live_at_end;
  }
  return finalize_run(std::move(result));
}

TrajectoryWriter::TrajectoryWriter(std::ostream& out) : out_(out) {
  out_ << "time_min,node_id,class,state,col,row\n";
}

void TrajectoryWriter::on_step(const StepView& view) {
  for (const auto& n : view.mobile)
    out_ << view.time << ',' << n.id << ',' << to_string(n.cls) << ',' << to_string(n.state) << ','
         << n.position.col << ',' << n.position.row << '\n';
}

EventLogWriter::EventLogWriter(std::ostream& out) : out_(out) {
  out_ << "time_min,event,node_a,node_b,message_id\n";
}

void EventLogWriter::on_step(const StepView& view) {
  const Minutes t = view.time;
  for (const auto& c : view.contacts)
    out_ << t << ",contact," << c.node_a << ',' << c.node_b << ",\n";
  for (const auto& x : view.exchange.transfers)
    out_ << t << ",transfer," << x.from << ',' << x.to << ',' << x.message << '\n';
  for (const auto& d : view.exchange.deliveries)
    out_ << t << ",delivery," << d.destination << ",," << d.message << '\n';
  for (MessageId m : view.expired) out_ << t << ",expiry,,," << m << '\n';
}

}  // namespace rrpm
