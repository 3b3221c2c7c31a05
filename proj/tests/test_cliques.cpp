#include <doctest.h>

#include <chrono>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "cliquescale/cliques.hpp"
#include "cliquescale/graph.hpp"

using cliquescale::brute_force_cliques;
using cliquescale::CliqueProfile;
using cliquescale::count_cliques;
using cliquescale::CountAborted;
using cliquescale::CountOptions;
using cliquescale::degeneracy_ordering;
using cliquescale::Graph;
using cliquescale::NodeId;
using cliquescale::u128_to_string;
using cliquescale::uint128;

namespace {

Graph complete_graph(std::size_t n) {
  Graph g;
  g.ensure_nodes(n);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) g.add_edge_unchecked(u, v);
  return g;
}

Graph petersen_graph() {
  Graph g;
  g.ensure_nodes(10);
  for (NodeId i = 0; i < 5; ++i) {
    g.add_edge(i, (i + 1) % 5);            // outer cycle
    g.add_edge(i, i + 5);                  // spoke
    g.add_edge(5 + i, 5 + (i + 2) % 5);    // inner pentagram
  }
  return g;
}

Graph random_graph(std::size_t n, double edge_prob, std::uint32_t seed) {
  std::mt19937 engine(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Graph g;
  g.ensure_nodes(n);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (unit(engine) < edge_prob) g.add_edge_unchecked(u, v);
  return g;
}

void check_profiles_equal(const CliqueProfile& a, const CliqueProfile& b) {
  CHECK(a.nodes == b.nodes);
  CHECK(a.edges == b.edges);
  CHECK(a.max_clique() == b.max_clique());
  const std::size_t top = std::max(a.counts.size(), b.counts.size());
  for (std::size_t k = 1; k < top; ++k) {
    INFO("k = ", k);
    CHECK(u128_to_string(a.count(k)) == u128_to_string(b.count(k)));
  }
}

// max degree at removal over repeated minimum-degree deletion
std::size_t peeling_degeneracy(const Graph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<std::size_t> deg(n);
  std::vector<bool> removed(n, false);
  for (NodeId v = 0; v < n; ++v) deg[v] = g.degree(v);
  std::size_t degeneracy = 0;
  for (std::size_t step = 0; step < n; ++step) {
    NodeId best = 0;
    std::size_t best_deg = n;
    for (NodeId v = 0; v < n; ++v) {
      if (!removed[v] && deg[v] < best_deg) {
        best = v;
        best_deg = deg[v];
      }
    }
    degeneracy = std::max(degeneracy, best_deg);
    removed[best] = true;
    for (NodeId u : g.neighbors(best))
      if (!removed[u]) --deg[u];
  }
  return degeneracy;
}

}  // namespace

TEST_CASE("u128 decimal rendering") {
  CHECK(u128_to_string(0) == "0");
  CHECK(u128_to_string(7) == "7");
  CHECK(u128_to_string(static_cast<uint128>(1) << 100) == "1267650600228229401496703205376");
}

TEST_CASE("empty and trivial graphs") {
  CHECK(count_cliques(Graph{}).counts.empty());
  CHECK(count_cliques(Graph{}).max_clique() == 0);

  Graph one;
  one.ensure_nodes(1);
  const auto p1 = count_cliques(one);
  CHECK(p1.count(1) == 1);
  CHECK(p1.max_clique() == 1);

  Graph isolated;
  isolated.ensure_nodes(5);
  const auto p5 = count_cliques(isolated);
  CHECK(p5.count(1) == 5);
  CHECK(p5.count(2) == 0);
  CHECK(p5.max_clique() == 1);
}

TEST_CASE("complete graph on four nodes") {
  const auto p = count_cliques(complete_graph(4));
  CHECK(p.count(1) == 4);
  CHECK(p.count(2) == 6);
  CHECK(p.count(3) == 4);
  CHECK(p.count(4) == 1);
  CHECK(p.count(5) == 0);
  CHECK(p.max_clique() == 4);
  CHECK(u128_to_string(p.total(2)) == "11");
}

TEST_CASE("triangle with pendant node") {
  Graph g;
  g.ensure_nodes(4);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 0);
  g.add_edge(0, 3);
  const auto p = count_cliques(g);
  CHECK(p.count(1) == 4);
  CHECK(p.count(2) == 4);
  CHECK(p.count(3) == 1);
  CHECK(p.max_clique() == 3);
}

TEST_CASE("petersen graph is triangle free") {
  const auto p = count_cliques(petersen_graph());
  CHECK(p.count(1) == 10);
  CHECK(p.count(2) == 15);
  CHECK(p.count(3) == 0);
  CHECK(p.max_clique() == 2);
}

TEST_CASE("complete graphs match binomial coefficients") {
  for (std::size_t n = 3; n <= 12; ++n) {
    // Pascal's triangle, independent of the counter's internal tables
    std::vector<std::vector<std::uint64_t>> c(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      c[i].assign(i + 1, 1);
      for (std::size_t j = 1; j < i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
    }
    const auto p = count_cliques(complete_graph(n));
    CHECK(p.max_clique() == n);
    for (std::size_t k = 1; k <= n; ++k) {
      INFO("n = ", n, ", k = ", k);
      CHECK(u128_to_string(p.count(k)) == std::to_string(c[n][k]));
    }
  }
}

TEST_CASE("random graphs agree with ordered enumeration") {
  std::mt19937 param_engine(20240901);
  std::uniform_int_distribution<std::size_t> size_dist(1, 25);
  std::uniform_real_distribution<double> prob_dist(0.0, 0.9);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = size_dist(param_engine);
    const double prob = prob_dist(param_engine);
    const Graph g = random_graph(n, prob, 1000 + static_cast<std::uint32_t>(trial));
    INFO("trial ", trial, ": n = ", n, ", edge_prob = ", prob);
    check_profiles_equal(count_cliques(g), brute_force_cliques(g));
  }
}

TEST_CASE("triangle counts match adjacency matrix trace") {
  const Graph g = random_graph(50, 0.3, 77);
  const std::size_t n = g.num_nodes();
  std::vector<std::vector<std::uint64_t>> a(n, std::vector<std::uint64_t>(n, 0));
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v : g.neighbors(u)) a[u][v] = 1;
  std::uint64_t trace = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) trace += a[i][j] * a[j][k] * a[k][i];
  const auto p = count_cliques(g);
  CHECK(u128_to_string(p.count(3)) == std::to_string(trace / 6));
}

TEST_CASE("degeneracy ordering") {
  SUBCASE("known values") {
    Graph tree;
    tree.ensure_nodes(7);
    for (NodeId v = 1; v < 7; ++v) tree.add_edge(v, (v - 1) / 2);
    CHECK(degeneracy_ordering(tree).degeneracy == 1);

    Graph cycle;
    cycle.ensure_nodes(8);
    for (NodeId v = 0; v < 8; ++v) cycle.add_edge(v, (v + 1) % 8);
    CHECK(degeneracy_ordering(cycle).degeneracy == 2);

    CHECK(degeneracy_ordering(complete_graph(9)).degeneracy == 8);
    CHECK(degeneracy_ordering(petersen_graph()).degeneracy == 3);
  }

  SUBCASE("matches repeated minimum-degree peeling and bounds later degrees") {
    for (std::uint32_t seed = 1; seed <= 5; ++seed) {
      const Graph g = random_graph(30, 0.2, seed);
      const auto peel = degeneracy_ordering(g);
      CHECK(peel.degeneracy == peeling_degeneracy(g));
      CHECK(peel.order.size() == g.num_nodes());

      std::vector<std::size_t> rank(g.num_nodes());
      for (std::size_t i = 0; i < peel.order.size(); ++i) rank[peel.order[i]] = i;
      for (NodeId v = 0; v < g.num_nodes(); ++v) {
        std::size_t later = 0;
        for (NodeId u : g.neighbors(v))
          if (rank[u] > rank[v]) ++later;
        CHECK(later <= peel.degeneracy);
      }
    }
  }
}

TEST_CASE("size cap truncates counts but keeps smaller sizes exact") {
  const Graph g = complete_graph(10);
  CountOptions options;
  options.max_k = 4;
  const auto capped = count_cliques(g, options);
  CHECK(capped.max_clique() == 4);
  CHECK(capped.count(2) == 45);
  CHECK(capped.count(3) == 120);
  CHECK(capped.count(4) == 210);
  CHECK(capped.count(5) == 0);
}

TEST_CASE("parallel counting matches serial") {
  const Graph g = random_graph(120, 0.15, 5);
  const auto serial = count_cliques(g);
  CountOptions options;
  options.threads = 4;
  check_profiles_equal(count_cliques(g, options), serial);
}

TEST_CASE("counting twice gives identical results") {
  const Graph g = random_graph(60, 0.25, 9);
  check_profiles_equal(count_cliques(g), count_cliques(g));
}

TEST_CASE("total cap aborts") {
  CountOptions options;
  options.total_cap = 5;
  CHECK_THROWS_AS(count_cliques(complete_graph(10), options), CountAborted);
  try {
    count_cliques(complete_graph(10), options);
  } catch (const CountAborted& e) {
    CHECK(e.reason == CountAborted::Reason::total_cap);
  }
}

TEST_CASE("expired deadline aborts") {
  CountOptions options;
  options.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
  try {
    count_cliques(random_graph(40, 0.4, 3), options);
    FAIL("expected CountAborted");
  } catch (const CountAborted& e) {
    CHECK(e.reason == CountAborted::Reason::timeout);
  }
}

TEST_CASE("brute force rejects large graphs") {
  Graph g;
  g.ensure_nodes(31);
  CHECK_THROWS_AS(brute_force_cliques(g), std::invalid_argument);
}

TEST_CASE("profile csv rows") {
  std::ostringstream out;
  cliquescale::write_profile_csv(out, count_cliques(complete_graph(4)));
  CHECK(out.str() == "4,6,2,6\n4,6,3,4\n4,6,4,1\n");
}
