#include "rrpm/mobility.hpp"

#include <set>

namespace rrpm {

namespace {

Position random_cell(const Grid& grid, Rng& rng) {
  std::uniform_int_distribution<int> coord(0, grid.side_cells - 1);
  const int col = coord(rng);
  const int row = coord(rng);
  return {col, row};
}

}  // namespace

Placement assign_locations(const ScenarioSpec& spec, const Roster& roster, Rng& rng) {
  Placement out;
  const auto poi_ids = roster.ids_of(NodeClass::PointOfInterest);
  const auto dest_ids = roster.ids_of(NodeClass::Destination);

  std::vector<Position> poi_cells, dest_cells;
  if (!spec.sites.empty()) {
    for (const auto& s : spec.sites)
      (s.kind == SiteKind::Poi ? poi_cells : dest_cells).push_back(s.cell);
  } else {
    std::set<Position> taken;
    const std::size_t wanted = poi_ids.size() + dest_ids.size();
    while (taken.size() < wanted) {
      const Position p = random_cell(spec.grid, rng);
      if (!taken.insert(p).second) continue;
      (poi_cells.size() < poi_ids.size() ? poi_cells : dest_cells).push_back(p);
    }
  }
  for (std::size_t i = 0; i < poi_ids.size(); ++i)
    out.pois.push_back({poi_ids[i], NodeClass::PointOfInterest, poi_cells.at(i)});
  for (std::size_t i = 0; i < dest_ids.size(); ++i)
    out.destinations.push_back({dest_ids[i], NodeClass::Destination, dest_cells.at(i)});

  for (const auto& entry : roster.nodes) {
    if (is_stationary(entry.cls)) continue;
    LocationAssignment a;
    a.node = entry.id;
    a.paired_patient = entry.paired_patient;
    if (entry.cls == NodeClass::Caregiver && entry.paired_patient)
      a.home = out.mobile.at(*entry.paired_patient).home;
    else
      a.home = random_cell(spec.grid, rng);
    out.mobile.push_back(a);
  }

  std::uniform_int_distribution<std::size_t> pick_poi(0, out.pois.size() - 1);
  std::size_t staff_seen = 0;
  for (auto& a : out.mobile) {
    const NodeClass cls = roster.nodes.at(a.node).cls;
    if (cls == NodeClass::ClinicalStaff)
      a.work = out.destinations.at(staff_seen++ % out.destinations.size()).cell;
    else if (cls == NodeClass::RelayEmployed)
      a.work = out.pois[pick_poi(rng)].cell;
  }
  return out;
}

MobilityState sample_categorical(const Distribution& weights, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double total = weights[0] + weights[1] + weights[2];
  const double u = unit(rng) * total;
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    if (weights[i] <= 0.0) continue;
    cumulative += weights[i];
    last_positive = i;
    if (u < cumulative) return kMobilityStates[i];
  }
  return kMobilityStates[last_positive];
}

MobilityState sample_initial_state(ClassGroup group, int period_id, const TransitionTables& tables,
                                   Rng& rng) {
  return sample_categorical(tables.at(group, period_id).initial, rng);
}

void enter_state(MobileNode& node, MobilityState state, std::span<const StationarySite> pois,
                 Rng& rng) {
  node.state = state;
  node.current_poi.reset();
  switch (state) {
    case MobilityState::Home:
      node.position = node.assignment.home;
      break;
    case MobilityState::Work:
      // CUA tables carry no Work mass; validation guarantees we never get here without a site.
      node.position = node.assignment.work.value();
      break;
    case MobilityState::Poi: {
      std::uniform_int_distribution<std::size_t> pick(0, pois.size() - 1);
      const std::size_t i = pick(rng);
      node.current_poi = pois[i].node;
      node.position = pois[i].cell;
      break;
    }
  }
}

MobileNode make_mobile_node(const RosterEntry& entry, const LocationAssignment& assignment,
                            int period_id, const TransitionTables& tables,
                            std::span<const StationarySite> pois, Rng& rng) {
  MobileNode node;
  node.id = entry.id;
  node.cls = entry.cls;
  node.group = class_group(entry.cls).value();
  node.assignment = assignment;
  enter_state(node, sample_initial_state(node.group, period_id, tables, rng), pois, rng);
  return node;
}

MobileNode step_mobility(MobileNode node, int period_id, const TransitionTables& tables,
                         std::span<const StationarySite> pois, Rng& rng) {
  const auto& row = tables.at(node.group, period_id).matrix[static_cast<std::size_t>(node.state)];
  enter_state(node, sample_categorical(row, rng), pois, rng);
  return node;
}

bool position_consistent(const MobileNode& node, std::span<const StationarySite> pois) {
  switch (node.state) {
    case MobilityState::Home:
      return !node.current_poi && node.position == node.assignment.home;
    case MobilityState::Work:
      return !node.current_poi && node.assignment.work && node.position == *node.assignment.work;
    case MobilityState::Poi:
      if (!node.current_poi) return false;
      for (const auto& p : pois)
        if (p.node == *node.current_poi) return node.position == p.cell;
      return false;
  }
  return false;
}

}  // namespace rrpm
