#ifndef RRPM_NETWORK_HPP
#define RRPM_NETWORK_HPP

#include <span>
#include <vector>

#include "rrpm/model.hpp"

namespace rrpm {

struct RadioProfile {
  NodeId node = 0;
  double range_ft = 0.0;
};

/// One Normal(mean, variance) draw per node, clamped at zero. Throws
/// InvalidRadioParams for a negative variance.
std::vector<RadioProfile> sample_ranges(std::span<const NodeId> nodes, const RadioParams& params,
                                        Rng& rng);

/// Unordered pair, node_a < node_b.
struct ContactEvent {
  Minutes time = 0;
  NodeId node_a = 0;
  NodeId node_b = 0;

  bool operator==(const ContactEvent&) const = default;
};

/// Mutual reachability: centre distance within both ranges.
bool in_contact(const Grid& grid, Position a, Position b, double range_a, double range_b);

/// All pairs in contact, sorted by (node_a, node_b). `positions[i]` and
/// `ranges[i]` describe node i. Buckets are at least as wide as the largest
/// range, so only the 3x3 neighbourhood of each bucket is scanned.
std::vector<ContactEvent> detect_contacts(const Grid& grid, std::span<const Position> positions,
                                          std::span<const double> ranges, Minutes time);

/// Replica sets: which nodes hold a copy of each message.
class MessageStores {
public:
  MessageStores(std::size_t node_count, std::size_t message_count)
      : node_count_(node_count), held_(message_count, std::vector<bool>(node_count, false)) {}

  std::size_t node_count() const { return node_count_; }
  std::size_t message_count() const { return held_.size(); }

  bool holds(NodeId node, MessageId message) const { return held_.at(message).at(node); }
  void add(NodeId node, MessageId message) { held_.at(message).at(node) = true; }
  /// Drops every copy of `message`.
  void purge(MessageId message);

  std::size_t replica_count(MessageId message) const;
  /// The node's store, ascending by message id.
  std::vector<MessageId> held_by(NodeId node) const;

  bool operator==(const MessageStores&) const = default;

private:
  std::size_t node_count_;
  std::vector<std::vector<bool>> held_;  // [message][node]
};

struct TransferEvent {
  Minutes time = 0;
  MessageId message = 0;
  NodeId from = 0;
  NodeId to = 0;

  bool operator==(const TransferEvent&) const = default;
};

struct DeliveryEvent {
  Minutes time = 0;
  MessageId message = 0;
  NodeId destination = 0;
  Minutes latency = 0;

  bool operator==(const DeliveryEvent&) const = default;
};

struct ExchangeOutcome {
  std::vector<TransferEvent> transfers;   ///< by (contact, message)
  std::vector<DeliveryEvent> deliveries;  ///< first delivery per message, by message id
};

/// One synchronous epidemic round. Decisions use the stores as they were at
/// the start of the round, so a copy moves at most one hop per round.
/// Destinations absorb messages but never forward them. A message reaching a
/// destination is marked delivered at `time`.
ExchangeOutcome exchange(std::span<const ContactEvent> contacts, MessageStores& stores,
                         std::vector<Message>& messages, const std::vector<bool>& is_destination,
                         Minutes time);

/// Marks undelivered messages past created_at + ttl as expired and purges
/// their copies. Returns the ids expired by this call.
std::vector<MessageId> expire(std::vector<Message>& messages, MessageStores& stores, Minutes time);

}  // namespace rrpm

#endif  // RRPM_NETWORK_HPP
