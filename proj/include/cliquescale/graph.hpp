#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace cliquescale {

using NodeId = std::uint32_t;

/// Mutable simple undirected graph over dense node ids 0..N-1.
///
/// Neighbor lists keep insertion order; for grown graphs that order is the
/// order in which edges were created, which the growth models and
/// measurements rely on for reproducibility.
class Graph {
 public:
  static constexpr std::uint32_t kNoDepthCap = 0xffffffffu;

  Graph() = default;
  explicit Graph(std::size_t nodes) : adj_(nodes) {}

  NodeId add_node() {
    adj_.emplace_back();
    return static_cast<NodeId>(adj_.size() - 1);
  }

  /// Grows the node set so ids [0, count) all exist.
  void ensure_nodes(std::size_t count) {
    if (adj_.size() < count) adj_.resize(count);
  }

  /// Inserts {u, v}. Returns false and leaves the graph unchanged for
  /// self-loops and duplicate edges. Throws std::out_of_range on unknown ids.
  bool add_edge(NodeId u, NodeId v);

  /// Fast path for edges known to be absent. The growth models construct
  /// distinct endpoints, so they skip the duplicate scan.
  void add_edge_unchecked(NodeId u, NodeId v) {
    adj_[u].push_back(v);
    adj_[v].push_back(u);
    ++edges_;
  }

  bool has_edge(NodeId u, NodeId v) const;

  std::size_t num_nodes() const { return adj_.size(); }
  std::size_t num_edges() const { return edges_; }
  std::size_t degree(NodeId v) const { return adj_[v].size(); }
  std::span<const NodeId> neighbors(NodeId v) const {
    return {adj_[v].data(), adj_[v].size()};
  }

  /// Hop count of the shortest u-v path, or nullopt when v is not reachable
  /// from u within max_depth hops. Throws std::out_of_range on unknown ids.
  std::optional<std::uint32_t> bfs_distance(NodeId u, NodeId v,
                                            std::uint32_t max_depth = kNoDepthCap) const;

 private:
  friend class DistanceOracle;
  void check_node(NodeId v) const;

  std::vector<std::vector<NodeId>> adj_;
  std::size_t edges_ = 0;
};

/// Reusable BFS state for loops that issue many distance queries against a
/// graph that may keep growing between queries.
class DistanceOracle {
 public:
  explicit DistanceOracle(const Graph& g) : graph_(&g) {}

  std::optional<std::uint32_t> distance(NodeId u, NodeId v,
                                        std::uint32_t max_depth = Graph::kNoDepthCap);

 private:
  const Graph* graph_;
  std::vector<std::uint64_t> seen_epoch_;
  std::vector<std::uint32_t> dist_;
  std::vector<NodeId> queue_;
  std::uint64_t epoch_ = 0;
};

}  // namespace cliquescale
