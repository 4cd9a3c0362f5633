#include "rrpm/network.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace rrpm {

std::vector<RadioProfile> sample_ranges(std::span<const NodeId> nodes, const RadioParams& params,
                                        Rng& rng) {
  if (!(params.range_var_ft2 >= 0.0))
    throw Error(ErrorKind::InvalidRadioParams, "range variance must be >= 0");
  std::vector<RadioProfile> out;
  out.reserve(nodes.size());
  if (params.range_var_ft2 == 0.0) {
    for (NodeId n : nodes) out.push_back({n, std::max(0.0, params.range_mean_ft)});
    return out;
  }
  std::normal_distribution<double> normal(params.range_mean_ft, std::sqrt(params.range_var_ft2));
  for (NodeId n : nodes) out.push_back({n, std::max(0.0, normal(rng))});
  return out;
}

bool in_contact(const Grid& grid, Position a, Position b, double range_a, double range_b) {
  const double dx = static_cast<double>(a.col - b.col) * grid.cell_size_ft;
  const double dy = static_cast<double>(a.row - b.row) * grid.cell_size_ft;
  const double r = std::min(range_a, range_b);
  return dx * dx + dy * dy <= r * r;
}

std::vector<ContactEvent> detect_contacts(const Grid& grid, std::span<const Position> positions,
                                          std::span<const double> ranges, Minutes time) {
  std::vector<ContactEvent> out;
  const std::size_t n = positions.size();
  if (n < 2) return out;

  const double max_range = *std::max_element(ranges.begin(), ranges.end());
  const auto width = static_cast<std::int64_t>(
      std::max(1.0, std::ceil(max_range / grid.cell_size_ft)));
  const std::int64_t buckets_per_side = (grid.side_cells + width - 1) / width + 2;
  auto key = [&](std::int64_t bx, std::int64_t by) { return (bx + 1) * buckets_per_side + by + 1; };

  std::unordered_map<std::int64_t, std::vector<NodeId>> buckets;
  buckets.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    buckets[key(positions[i].col / width, positions[i].row / width)].push_back(
        static_cast<NodeId>(i));

  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t bx = positions[i].col / width;
    const std::int64_t by = positions[i].row / width;
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = buckets.find(key(bx + dx, by + dy));
        if (it == buckets.end()) continue;
        for (NodeId j : it->second) {
          if (j <= i) continue;
          if (in_contact(grid, positions[i], positions[j], ranges[i], ranges[j]))
            out.push_back({time, static_cast<NodeId>(i), j});
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const ContactEvent& a, const ContactEvent& b) {
    return std::pair(a.node_a, a.node_b) < std::pair(b.node_a, b.node_b);
  });
  return out;
}

void MessageStores::purge(MessageId message) {
  auto& row = held_.at(message);
  std::fill(row.begin(), row.end(), false);
}

std::size_t MessageStores::replica_count(MessageId message) const {
  const auto& row = held_.at(message);
  return static_cast<std::size_t>(std::count(row.begin(), row.end(), true));
}

std::vector<MessageId> MessageStores::held_by(NodeId node) const {
  std::vector<MessageId> out;
  for (std::size_t m = 0; m < held_.size(); ++m)
    if (held_[m].at(node)) out.push_back(static_cast<MessageId>(m));
  return out;
}

ExchangeOutcome exchange(std::span<const ContactEvent> contacts, MessageStores& stores,
                         std::vector<Message>& messages, const std::vector<bool>& is_destination,
                         Minutes time) {
  ExchangeOutcome out;
  std::vector<MessageId> live;
  for (const auto& m : messages)
    if (m.live_at(time)) live.push_back(m.id);
  if (live.empty() || contacts.empty()) return out;

  const MessageStores start = stores;
  std::vector<bool> delivered_now(messages.size(), false);

  for (const auto& c : contacts) {
    for (MessageId m : live) {
      const bool a_has = start.holds(c.node_a, m);
      const bool b_has = start.holds(c.node_b, m);
      if (a_has == b_has) continue;
      const NodeId from = a_has ? c.node_a : c.node_b;
      const NodeId to = a_has ? c.node_b : c.node_a;
      if (is_destination[from] || stores.holds(to, m)) continue;
      stores.add(to, m);
      out.transfers.push_back({time, m, from, to});
      if (is_destination[to] && !delivered_now[m]) {
        delivered_now[m] = true;
        auto& msg = messages.at(m);
        msg.delivered_at = time;
        out.deliveries.push_back({time, m, to, time - msg.created_at});
      }
    }
  }
  std::sort(out.deliveries.begin(), out.deliveries.end(),
            [](const DeliveryEvent& a, const DeliveryEvent& b) { return a.message < b.message; });
  return out;
}

std::vector<MessageId> expire(std::vector<Message>& messages, MessageStores& stores, Minutes time) {
  std::vector<MessageId> out;
  for (auto& m : messages) {
    if (m.delivered() || m.expired || time <= m.expires_at()) continue;
    m.expired = true;
    stores.purge(m.id);
    out.push_back(m.id);
  }
  return out;
}

}  // namespace rrpm
