#ifndef RRPM_MOBILITY_HPP
#define RRPM_MOBILITY_HPP

#include <optional>
#include <span>
#include <vector>

#include "rrpm/model.hpp"

namespace rrpm {

/// A POI or destination pinned to one cell for the whole run.
struct StationarySite {
  NodeId node = 0;
  NodeClass cls = NodeClass::PointOfInterest;
  Position cell;
};

struct LocationAssignment {
  NodeId node = 0;
  Position home;
  std::optional<Position> work;          ///< ES group only
  std::optional<NodeId> paired_patient;  ///< caregivers only
};

struct Placement {
  std::vector<StationarySite> pois;
  std::vector<StationarySite> destinations;
  std::vector<LocationAssignment> mobile;  ///< indexed like the roster's mobile prefix
};

/// Places POIs and destinations (from spec.sites when given, otherwise drawn
/// uniformly without replacement), then draws home cells and work sites.
/// Caregivers share their paired patient's home; clinical staff work at a
/// destination; other ES nodes work at a uniformly chosen POI.
Placement assign_locations(const ScenarioSpec& spec, const Roster& roster, Rng& rng);

struct MobileNode {
  NodeId id = 0;
  NodeClass cls = NodeClass::Patient;
  ClassGroup group = ClassGroup::CUA;
  LocationAssignment assignment;
  MobilityState state = MobilityState::Home;
  Position position;
  std::optional<NodeId> current_poi;  ///< POI node id, set iff state == Poi
};

/// Categorical draw over (Home, Work, Poi). Zero-weight outcomes are never returned.
MobilityState sample_categorical(const Distribution& weights, Rng& rng);

MobilityState sample_initial_state(ClassGroup group, int period_id, const TransitionTables& tables,
                                   Rng& rng);

/// Enters `state`, drawing a fresh POI when it is Poi, and resolves the position.
void enter_state(MobileNode& node, MobilityState state, std::span<const StationarySite> pois,
                 Rng& rng);

/// Builds a node at t = 0 with a state drawn from the period's initial vector.
MobileNode make_mobile_node(const RosterEntry& entry, const LocationAssignment& assignment,
                            int period_id, const TransitionTables& tables,
                            std::span<const StationarySite> pois, Rng& rng);

/// One DTMC transition. A POI is redrawn on every move into Poi, including
/// Poi -> Poi. Nodes teleport between their locations.
MobileNode step_mobility(MobileNode node, int period_id, const TransitionTables& tables,
                         std::span<const StationarySite> pois, Rng& rng);

/// State <-> position agreement.
bool position_consistent(const MobileNode& node, std::span<const StationarySite> pois);

}  // namespace rrpm

#endif  // RRPM_MOBILITY_HPP
