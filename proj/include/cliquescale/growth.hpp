#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <variant>
#include <vector>

#include "cliquescale/graph.hpp"
#include "cliquescale/rng.hpp"
#include "cliquescale/schedule.hpp"

namespace cliquescale {

struct LpamParams {
  double p = 0.0;  // marginal attach probability
  double r = 0.0;  // preferential-attachment strength
};

struct CopyParams {
  double p = 0.0;
};

struct ForestFireParams {
  double forward = 0.0;   // burn probability over all unvisited neighbors
  double backward = 0.0;  // extra burn probability over unvisited newer neighbors
};

struct BaParams {
  std::size_t m = 1;  // links per new node
};

using ModelParams = std::variant<LpamParams, CopyParams, ForestFireParams, BaParams>;

// "lpam", "copy", "forest_fire", or "ba"
std::string_view model_name(const ModelParams& params);

// Throws std::invalid_argument when a probability leaves [0, 1] or m == 0.
void validate_params(const ModelParams& params);

// One node arrival. The attached list starts with the target; attached_idx
// holds the positions in degrees_before (the target's neighbor list in
// adjacency order, degrees taken before the event) whose nodes were linked.
struct GrowthEvent {
  NodeId new_node = 0;
  NodeId target = 0;
  std::vector<NodeId> attached;
  std::vector<std::uint32_t> degrees_before;
  std::vector<std::uint32_t> attached_idx;
};

// Positions in target_neighbors whose nodes appear in attached beyond its
// first (target) entry. Growth steps and trace replay share this rule, which
// keeps recorded and replayed events field-identical.
std::vector<std::uint32_t> attached_neighbor_indices(const std::vector<NodeId>& target_neighbors,
                                                     const std::vector<NodeId>& attached);

// Scaled attach probabilities for one neighborhood: p_i = p * k_i / mean(k),
// then every value above tau = p + (1-p)*r is clipped to tau with the pooled
// excess spread uniformly over values still strictly below tau, repeated to a
// fixed point. The result sums to p * k and never exceeds tau + 1e-12.
//
// p == 0, p == 1, and r == 0 return their exact fixed points directly (all
// zero, all one, uniform p).
std::vector<double> lpam_neighbor_probabilities(double p, double r,
                                                const std::vector<std::uint32_t>& neighbor_degrees);

// Adds one node linked to a uniform target and, independently per target
// neighbor, with the scaled probabilities above.
GrowthEvent lpam_step(Graph& g, double p, double r, Rng& rng);

// lpam_step with a flat per-neighbor probability p; identical draw sequence
// to lpam_step(g, p, 0, rng).
GrowthEvent copy_step(Graph& g, double p, Rng& rng);

// Adds one node linked to every node burned by an outward fire from a uniform
// ambassador. Each burning node ignites a geometric number (continue
// probability `forward`) of its unvisited neighbors, then a second geometric
// number (continue probability `backward`) of its unvisited newer neighbors;
// each node burns at most once, so forward == 1 floods exactly the
// ambassador's component.
GrowthEvent forest_fire_step(Graph& g, double forward, double backward, Rng& rng);

// Adds one node linked to m distinct nodes sampled proportionally to degree
// (uniformly when the graph has no edges or fewer than m nodes of positive
// degree). Throws std::invalid_argument when the graph has fewer than m nodes.
// Rebuilds its endpoint pool per call; grow() keeps the pool incrementally,
// which is equivalent in distribution but draws differently.
GrowthEvent ba_step(Graph& g, std::size_t m, Rng& rng);

struct SnapshotMark {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t event_index = 0;  // events applied when the snapshot fired
};

using GrowthSnapshotCallback = std::function<void(const Graph&, const SnapshotMark&)>;

struct GrowOptions {
  bool record_events = true;
  GrowthSnapshotCallback on_snapshot;  // may throw to abort the run
};

struct GrowthTrace {
  ModelParams params;
  std::uint64_t seed = 0;
  SnapshotSchedule schedule;
  std::vector<GrowthEvent> events;  // empty when record_events is off
  std::vector<SnapshotMark> marks;  // one per schedule entry <= n_target
  Graph graph;
};

// Grows from a single isolated node to n_target nodes, deterministically for
// a given seed. BA runs use min(m, current N) links for the first arrivals.
GrowthTrace grow(const ModelParams& params, std::size_t n_target, std::uint64_t seed,
                 const SnapshotSchedule& schedule = {}, const GrowOptions& options = {});

// Closed-form expected edge count at size n: n/(1-2p) below p = 1/2, n*ln(n)
// at p = 1/2, and n^{2p} / ((2p-1) * Gamma(1+2p)) above.
double expected_edge_count(double p, double n);

}  // namespace cliquescale
