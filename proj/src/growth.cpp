#include "cliquescale/growth.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace cliquescale {

namespace {

void check_probability(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0))
    throw std::invalid_argument(std::string(name) + " must be in [0, 1]");
}

void capture_neighborhood(const Graph& g, NodeId target, GrowthEvent& ev,
                          std::vector<NodeId>& neighbors_out) {
  const auto nb = g.neighbors(target);
  neighbors_out.assign(nb.begin(), nb.end());
  ev.degrees_before.reserve(neighbors_out.size());
  for (NodeId u : neighbors_out)
    ev.degrees_before.push_back(static_cast<std::uint32_t>(g.degree(u)));
}

// Partial Fisher-Yates: burns `burn_count` uniform picks from pool without
// replacement, appending them to the fire in pick order.
void burn_from_pool(std::vector<NodeId>& pool, std::uint64_t burn_count, Rng& rng,
                    std::vector<bool>& visited, std::vector<NodeId>& burned) {
  for (std::uint64_t i = 0; i < burn_count; ++i) {
    const std::size_t j = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
    visited[pool[i]] = true;
    burned.push_back(pool[i]);
  }
}

GrowthEvent ba_attach(Graph& g, const std::vector<NodeId>& picks) {
  GrowthEvent ev;
  ev.target = picks[0];
  std::vector<NodeId> target_neighbors;
  capture_neighborhood(g, ev.target, ev, target_neighbors);
  ev.new_node = g.add_node();
  for (NodeId c : picks) g.add_edge_unchecked(ev.new_node, c);
  ev.attached = picks;
  ev.attached_idx = attached_neighbor_indices(target_neighbors, ev.attached);
  return ev;
}

void sample_distinct_uniform(std::size_t n, std::size_t m, Rng& rng, std::vector<NodeId>& picks) {
  while (picks.size() < m) {
    const NodeId c = static_cast<NodeId>(rng.below(n));
    if (std::find(picks.begin(), picks.end(), c) == picks.end()) picks.push_back(c);
  }
}

// Every node in pool appears once per incident edge, so index sampling is
// degree-proportional. Rejection gives m distinct picks; callers guarantee at
// least m distinct nodes appear in the pool.
void sample_distinct_from_pool(const std::vector<NodeId>& pool, std::size_t m, Rng& rng,
                               std::vector<NodeId>& picks) {
  while (picks.size() < m) {
    const NodeId c = pool[rng.below(pool.size())];
    if (std::find(picks.begin(), picks.end(), c) == picks.end()) picks.push_back(c);
  }
}

}  // namespace

std::vector<std::uint32_t> attached_neighbor_indices(const std::vector<NodeId>& target_neighbors,
                                                     const std::vector<NodeId>& attached) {
  std::vector<std::uint32_t> indices;
  if (attached.size() <= 1) return indices;
  const std::unordered_set<NodeId> beyond(attached.begin() + 1, attached.end());
  for (std::size_t i = 0; i < target_neighbors.size(); ++i)
    if (beyond.count(target_neighbors[i]))
      indices.push_back(static_cast<std::uint32_t>(i));
  return indices;
}

std::string_view model_name(const ModelParams& params) {
  if (std::holds_alternative<LpamParams>(params)) return "lpam";
  if (std::holds_alternative<CopyParams>(params)) return "copy";
  if (std::holds_alternative<ForestFireParams>(params)) return "forest_fire";
  return "ba";
}

void validate_params(const ModelParams& params) {
  if (const auto* lp = std::get_if<LpamParams>(&params)) {
    check_probability(lp->p, "p");
    check_probability(lp->r, "r");
  } else if (const auto* cp = std::get_if<CopyParams>(&params)) {
    check_probability(cp->p, "p");
  } else if (const auto* ff = std::get_if<ForestFireParams>(&params)) {
    check_probability(ff->forward, "forward");
    check_probability(ff->backward, "backward");
  } else if (std::get<BaParams>(params).m == 0) {
    throw std::invalid_argument("m must be positive");
  }
}

std::vector<double> lpam_neighbor_probabilities(double p, double r,
                                                const std::vector<std::uint32_t>& neighbor_degrees) {
  check_probability(p, "p");
  check_probability(r, "r");
  const std::size_t k = neighbor_degrees.size();
  if (k == 0) throw std::invalid_argument("neighbor degree list is empty");
  double sum = 0.0;
  for (const std::uint32_t d : neighbor_degrees) {
    if (d == 0) throw std::invalid_argument("neighbor degrees must be positive");
    sum += d;
  }

  // exact fixed points, bypassing floating-point iteration entirely
  if (p == 0.0) return std::vector<double>(k, 0.0);
  if (p == 1.0) return std::vector<double>(k, 1.0);
  if (r == 0.0) return std::vector<double>(k, p);

  const double mean = sum / static_cast<double>(k);
  std::vector<double> probs(k);
  for (std::size_t i = 0; i < k; ++i) probs[i] = p * neighbor_degrees[i] / mean;

  // Clip values above tau and spread the pooled excess over values still
  // strictly below it. Each round with excess pins at least one more entry at
  // exactly tau, and pinned entries stay pinned, so k+1 rounds always reach
  // the fixed point.
  const double tau = p + (1.0 - p) * r;
  for (std::size_t round = 0; round <= k; ++round) {
    double excess = 0.0;
    for (double& v : probs) {
      if (v > tau) {
        excess += v - tau;
        v = tau;
      }
    }
    if (excess == 0.0) break;
    std::size_t receivers = 0;
    for (const double v : probs)
      if (v < tau) ++receivers;
    assert(receivers > 0);
    const double share = excess / static_cast<double>(receivers);
    for (double& v : probs)
      if (v < tau) v += share;
  }
  return probs;
}

GrowthEvent lpam_step(Graph& g, double p, double r, Rng& rng) {
  GrowthEvent ev;
  ev.target = static_cast<NodeId>(rng.below(g.num_nodes()));
  std::vector<NodeId> target_neighbors;
  capture_neighborhood(g, ev.target, ev, target_neighbors);

  ev.new_node = g.add_node();
  g.add_edge_unchecked(ev.new_node, ev.target);
  ev.attached.push_back(ev.target);
  if (!target_neighbors.empty()) {
    const auto probs = lpam_neighbor_probabilities(p, r, ev.degrees_before);
    for (std::size_t i = 0; i < target_neighbors.size(); ++i) {
      if (rng.bernoulli(probs[i])) {
        g.add_edge_unchecked(ev.new_node, target_neighbors[i]);
        ev.attached.push_back(target_neighbors[i]);
        ev.attached_idx.push_back(static_cast<std::uint32_t>(i));
      }
    }
  }
  return ev;
}

GrowthEvent copy_step(Graph& g, double p, Rng& rng) { return lpam_step(g, p, 0.0, rng); }

GrowthEvent forest_fire_step(Graph& g, double forward, double backward, Rng& rng) {
  GrowthEvent ev;
  ev.target = static_cast<NodeId>(rng.below(g.num_nodes()));
  std::vector<NodeId> target_neighbors;
  capture_neighborhood(g, ev.target, ev, target_neighbors);

  std::vector<bool> visited(g.num_nodes(), false);
  std::vector<NodeId> burned{ev.target};
  visited[ev.target] = true;
  std::vector<NodeId> pool;
  for (std::size_t head = 0; head < burned.size(); ++head) {
    const NodeId v = burned[head];

    pool.clear();
    for (NodeId u : g.neighbors(v))
      if (!visited[u]) pool.push_back(u);
    burn_from_pool(pool, rng.geometric(forward, pool.size()), rng, visited, burned);

    pool.clear();
    for (NodeId u : g.neighbors(v))
      if (!visited[u] && u > v) pool.push_back(u);
    burn_from_pool(pool, rng.geometric(backward, pool.size()), rng, visited, burned);
  }

  ev.new_node = g.add_node();
  for (NodeId b : burned) g.add_edge_unchecked(ev.new_node, b);
  ev.attached = std::move(burned);
  ev.attached_idx = attached_neighbor_indices(target_neighbors, ev.attached);
  return ev;
}

GrowthEvent ba_step(Graph& g, std::size_t m, Rng& rng) {
  const std::size_t n = g.num_nodes();
  if (m == 0) throw std::invalid_argument("m must be positive");
  if (n < m) throw std::invalid_argument("graph has fewer than m nodes");

  std::vector<NodeId> pool;
  pool.reserve(2 * g.num_edges());
  std::size_t positive_degree = 0;
  for (NodeId v = 0; v < n; ++v) {
    const std::size_t d = g.degree(v);
    if (d > 0) ++positive_degree;
    pool.insert(pool.end(), d, v);
  }

  std::vector<NodeId> picks;
  picks.reserve(m);
  if (positive_degree < m) {
    sample_distinct_uniform(n, m, rng, picks);
  } else {
    sample_distinct_from_pool(pool, m, rng, picks);
  }
  return ba_attach(g, picks);
}

GrowthTrace grow(const ModelParams& params, std::size_t n_target, std::uint64_t seed,
                 const SnapshotSchedule& schedule, const GrowOptions& options) {
  validate_params(params);
  if (n_target < 1) throw std::invalid_argument("n_target must be at least 1");

  GrowthTrace trace;
  trace.params = params;
  trace.seed = seed;
  trace.schedule = schedule;

  Rng rng(seed);
  Graph& g = trace.graph;
  g.add_node();

  // BA keeps its endpoint pool across steps; rebuilding it per step would make
  // large runs quadratic in the edge count.
  const auto* ba = std::get_if<BaParams>(&params);
  std::vector<NodeId> pool;
  std::vector<NodeId> picks;

  std::size_t event_count = 0;
  std::size_t next_mark = 0;
  auto emit_marks = [&] {
    while (next_mark < schedule.sizes.size() && g.num_nodes() >= schedule.sizes[next_mark]) {
      const SnapshotMark mark{g.num_nodes(), g.num_edges(), event_count};
      trace.marks.push_back(mark);
      if (options.on_snapshot) options.on_snapshot(g, mark);
      ++next_mark;
    }
  };
  emit_marks();

  while (g.num_nodes() < n_target) {
    GrowthEvent ev;
    if (const auto* lp = std::get_if<LpamParams>(&params)) {
      ev = lpam_step(g, lp->p, lp->r, rng);
    } else if (const auto* cp = std::get_if<CopyParams>(&params)) {
      ev = copy_step(g, cp->p, rng);
    } else if (const auto* ff = std::get_if<ForestFireParams>(&params)) {
      ev = forest_fire_step(g, ff->forward, ff->backward, rng);
    } else {
      const std::size_t m_eff = std::min(ba->m, g.num_nodes());
      picks.clear();
      if (pool.empty()) {
        sample_distinct_uniform(g.num_nodes(), m_eff, rng, picks);
      } else {
        sample_distinct_from_pool(pool, m_eff, rng, picks);
      }
      ev = ba_attach(g, picks);
      for (NodeId c : picks) {
        pool.push_back(ev.new_node);
        pool.push_back(c);
      }
    }
    ++event_count;
    if (options.record_events) trace.events.push_back(std::move(ev));
    emit_marks();
  }
  return trace;
}

double expected_edge_count(double p, double n) {
  check_probability(p, "p");
  if (n < 1.0) throw std::invalid_argument("n must be at least 1");
  if (p < 0.5) return n / (1.0 - 2.0 * p);
  if (p == 0.5) return n * std::log(n);
  return std::pow(n, 2.0 * p) / ((2.0 * p - 1.0) * std::tgamma(1.0 + 2.0 * p));
}

}  // namespace cliquescale
