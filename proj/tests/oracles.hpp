// Independent reference implementations used only by tests. None of these
// call into the code paths they check.
#ifndef RRPM_TESTS_ORACLES_HPP
#define RRPM_TESTS_ORACLES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "rrpm/model.hpp"

namespace rrpm::oracle {

/// Every unordered pair whose centre distance is within both ranges.
inline std::vector<std::pair<NodeId, NodeId>> all_pairs_contacts(const Grid& grid,
                                                                 const std::vector<Position>& pos,
                                                                 const std::vector<double>& range) {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (NodeId a = 0; a < pos.size(); ++a)
    for (NodeId b = a + 1; b < pos.size(); ++b) {
      const double d = std::sqrt(std::pow((pos[a].col - pos[b].col) * grid.cell_size_ft, 2) +
                                 std::pow((pos[a].row - pos[b].row) * grid.cell_size_ft, 2));
      if (d <= range[a] && d <= range[b]) out.emplace_back(a, b);
    }
  return out;
}

/// Node-major epidemic flooding with round snapshots: a node learns message m
/// in round t iff some neighbour (not a destination) held m before the round.
class EpidemicReference {
public:
  struct Msg {
    NodeId source;
    long created;
    long ttl;
    long delivered = -1;
  };

  EpidemicReference(std::size_t nodes, std::set<NodeId> destinations, std::vector<Msg> msgs)
      : has_(nodes), dest_(std::move(destinations)), msgs_(std::move(msgs)) {}

  void round(long time, const std::set<std::pair<NodeId, NodeId>>& contacts) {
    for (std::size_t m = 0; m < msgs_.size(); ++m)
      if (msgs_[m].created == time) has_[msgs_[m].source].insert(m);
    const auto before = has_;
    for (std::size_t m = 0; m < msgs_.size(); ++m) {
      const Msg& msg = msgs_[m];
      const bool live = msg.delivered < 0 && msg.created <= time && time <= msg.created + msg.ttl;
      if (!live) continue;
      for (NodeId n = 0; n < has_.size(); ++n) {
        if (before[n].count(m)) continue;
        for (NodeId k = 0; k < has_.size(); ++k) {
          const auto key = n < k ? std::pair(n, k) : std::pair(k, n);
          if (k == n || !contacts.count(key)) continue;
          if (before[k].count(m) && !dest_.count(k)) {
            has_[n].insert(m);
            break;
          }
        }
      }
      for (NodeId d : dest_)
        if (has_[d].count(m) && !before[d].count(m)) {
          msgs_[m].delivered = time;
          break;
        }
    }
    for (std::size_t m = 0; m < msgs_.size(); ++m)
      if (msgs_[m].delivered < 0 && time > msgs_[m].created + msgs_[m].ttl)
        for (auto& s : has_) s.erase(m);
  }

  bool holds(NodeId n, std::size_t m) const { return has_[n].count(m) > 0; }
  long delivered_at(std::size_t m) const { return msgs_[m].delivered; }

private:
  std::vector<std::set<std::size_t>> has_;
  std::set<NodeId> dest_;
  std::vector<Msg> msgs_;
};

/// Distribution after `steps` multiplications by the row-stochastic matrix.
inline Distribution power_iterate(const Distribution& start, const std::array<Distribution, 3>& p,
                                  int steps = 10000) {
  Distribution v = start;
  for (int s = 0; s < steps; ++s) {
    Distribution next{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) next[j] += v[i] * p[i][j];
    v = next;
  }
  return v;
}

inline std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) rank[idx[k]] = (i + j) / 2.0 + 1.0;
    i = j + 1;
  }
  return rank;
}

/// Spearman rank correlation with average ranks for ties.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = average_ranks(x), ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace rrpm::oracle

#endif  // RRPM_TESTS_ORACLES_HPP
