#include <doctest.h>

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "cliquescale/graph.hpp"

using cliquescale::DistanceOracle;
using cliquescale::Graph;
using cliquescale::NodeId;

namespace {

Graph path_graph(std::size_t n) {
  Graph g;
  g.ensure_nodes(n);
  for (NodeId v = 0; v + 1 < n; ++v) g.add_edge_unchecked(v, v + 1);
  return g;
}

}  // namespace

TEST_CASE("empty graph") {
  Graph g;
  CHECK(g.num_nodes() == 0);
  CHECK(g.num_edges() == 0);
}

TEST_CASE("add_node returns consecutive ids") {
  Graph g;
  CHECK(g.add_node() == 0);
  CHECK(g.add_node() == 1);
  CHECK(g.add_node() == 2);
  CHECK(g.num_nodes() == 3);
}

TEST_CASE("add_edge maintains adjacency on both sides") {
  Graph g;
  g.ensure_nodes(3);
  CHECK(g.add_edge(0, 2));
  CHECK(g.num_edges() == 1);
  CHECK(g.degree(0) == 1);
  CHECK(g.degree(2) == 1);
  CHECK(g.has_edge(0, 2));
  CHECK(g.has_edge(2, 0));
  CHECK_FALSE(g.has_edge(0, 1));
}

TEST_CASE("add_edge rejects self loops and duplicates") {
  Graph g;
  g.ensure_nodes(2);
  CHECK_FALSE(g.add_edge(1, 1));
  CHECK(g.add_edge(0, 1));
  CHECK_FALSE(g.add_edge(0, 1));
  CHECK_FALSE(g.add_edge(1, 0));
  CHECK(g.num_edges() == 1);
}

TEST_CASE("add_edge throws on unknown node") {
  Graph g;
  g.ensure_nodes(2);
  CHECK_THROWS_AS(g.add_edge(0, 5), std::out_of_range);
}

TEST_CASE("ensure_nodes only grows") {
  Graph g;
  g.ensure_nodes(4);
  CHECK(g.num_nodes() == 4);
  g.ensure_nodes(2);
  CHECK(g.num_nodes() == 4);
}

TEST_CASE("neighbors reflect insertion order") {
  Graph g;
  g.ensure_nodes(4);
  g.add_edge(0, 3);
  g.add_edge(0, 1);
  g.add_edge(0, 2);
  auto nb = g.neighbors(0);
  const std::vector<NodeId> expected{3, 1, 2};
  CHECK(std::equal(nb.begin(), nb.end(), expected.begin(), expected.end()));
}

TEST_CASE("bfs distance on a path") {
  Graph g = path_graph(6);
  CHECK(g.bfs_distance(0, 0) == 0);
  CHECK(g.bfs_distance(0, 5) == 5);
  CHECK(g.bfs_distance(3, 1) == 2);
}

TEST_CASE("bfs distance between components is unreachable") {
  Graph g;
  g.ensure_nodes(4);
  g.add_edge(0, 1);
  g.add_edge(2, 3);
  CHECK_FALSE(g.bfs_distance(0, 3).has_value());
}

TEST_CASE("bfs depth cap") {
  Graph g = path_graph(6);
  CHECK(g.bfs_distance(0, 5, 5) == 5);
  CHECK_FALSE(g.bfs_distance(0, 5, 4).has_value());
  CHECK(g.bfs_distance(0, 4, 4) == 4);
}

TEST_CASE("distance oracle matches one-shot bfs and survives graph growth") {
  Graph g = path_graph(5);
  DistanceOracle oracle(g);
  CHECK(oracle.distance(0, 4) == 4);
  CHECK(oracle.distance(4, 0) == 4);

  const NodeId v = g.add_node();
  g.add_edge(v, 0);
  g.add_edge(v, 4);
  CHECK(oracle.distance(0, 4) == 2);
  CHECK(oracle.distance(0, v) == 1);

  for (NodeId a = 0; a < g.num_nodes(); ++a)
    for (NodeId b = 0; b < g.num_nodes(); ++b)
      CHECK(oracle.distance(a, b) == g.bfs_distance(a, b));
}

TEST_CASE("distance oracle honors depth cap") {
  Graph g = path_graph(8);
  DistanceOracle oracle(g);
  CHECK(oracle.distance(0, 7, 7) == 7);
  CHECK_FALSE(oracle.distance(0, 7, 6).has_value());
}
