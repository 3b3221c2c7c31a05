#include "cliquescale/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace cliquescale {

void Graph::check_node(NodeId v) const {
  if (v >= adj_.size())
    throw std::out_of_range("unknown node id " + std::to_string(v));
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  check_node(u);
  check_node(v);
  // scan the smaller neighbor list
  const auto& a = adj_[u].size() <= adj_[v].size() ? adj_[u] : adj_[v];
  const NodeId other = adj_[u].size() <= adj_[v].size() ? v : u;
  return std::find(a.begin(), a.end(), other) != a.end();
}

bool Graph::add_edge(NodeId u, NodeId v) {
  check_node(u);
  check_node(v);
  if (u == v) return false;
  if (has_edge(u, v)) return false;
  add_edge_unchecked(u, v);
  return true;
}

std::optional<std::uint32_t> Graph::bfs_distance(NodeId u, NodeId v,
                                                 std::uint32_t max_depth) const {
  check_node(u);
  check_node(v);
  DistanceOracle oracle(*this);
  return oracle.distance(u, v, max_depth);
}

std::optional<std::uint32_t> DistanceOracle::distance(NodeId u, NodeId v,
                                                      std::uint32_t max_depth) {
  const Graph& g = *graph_;
  g.check_node(u);
  g.check_node(v);
  if (u == v) return 0;
  if (seen_epoch_.size() < g.num_nodes()) {
    seen_epoch_.resize(g.num_nodes(), 0);
    dist_.resize(g.num_nodes(), 0);
  }
  ++epoch_;
  queue_.clear();
  queue_.push_back(u);
  seen_epoch_[u] = epoch_;
  dist_[u] = 0;
  for (std::size_t head = 0; head < queue_.size(); ++head) {
    const NodeId x = queue_[head];
    const std::uint32_t d = dist_[x];
    if (d >= max_depth) break;  // queue is ordered by distance
    for (NodeId y : g.neighbors(x)) {
      if (seen_epoch_[y] == epoch_) continue;
      if (y == v) return d + 1;
      seen_epoch_[y] = epoch_;
      dist_[y] = d + 1;
      queue_.push_back(y);
    }
  }
  return std::nullopt;
}

}  // namespace cliquescale
