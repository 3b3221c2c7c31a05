#include "cliquescale/measure.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace cliquescale {

namespace {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

// Index of the first schedule size exceeding the event's pre-arrival node
// count, or sizes.size() when the event lies past the last size.
std::size_t window_of(const std::vector<std::size_t>& sizes, NodeId new_node) {
  return static_cast<std::size_t>(
      std::upper_bound(sizes.begin(), sizes.end(), static_cast<std::size_t>(new_node)) -
      sizes.begin());
}

// Attachment events for the nodes debuting in edges [first, last), all of the
// same timestamp, measured against the group-start graph. A partner counts as
// attached only when its id is smaller (it arrived earlier in the stream);
// partners that debuted earlier in this same group exist with no edges yet.
std::vector<GrowthEvent> group_events(const Graph& g, const std::vector<TemporalEdge>& edges,
                                      std::size_t first, std::size_t last) {
  const std::size_t n0 = g.num_nodes();
  std::vector<std::vector<NodeId>> partners;
  auto note = [&](NodeId node, NodeId partner) {
    if (node < n0 || partner >= node) return;
    const std::size_t slot = node - n0;
    if (slot >= partners.size()) partners.resize(slot + 1);
    auto& list = partners[slot];
    if (std::find(list.begin(), list.end(), partner) == list.end()) list.push_back(partner);
  };
  for (std::size_t e = first; e < last; ++e) {
    if (is_self_loop(edges[e])) continue;
    note(edges[e].src, edges[e].dst);
    note(edges[e].dst, edges[e].src);
  }

  std::vector<GrowthEvent> events;
  for (std::size_t slot = 0; slot < partners.size(); ++slot) {
    if (partners[slot].empty()) continue;
    GrowthEvent ev;
    ev.new_node = static_cast<NodeId>(n0 + slot);
    ev.target = partners[slot][0];
    ev.attached = std::move(partners[slot]);
    std::vector<NodeId> target_neighbors;
    if (ev.target < n0) {
      const auto span = g.neighbors(ev.target);
      target_neighbors.assign(span.begin(), span.end());
      ev.degrees_before.reserve(target_neighbors.size());
      for (NodeId nb : target_neighbors)
        ev.degrees_before.push_back(static_cast<std::uint32_t>(g.degree(nb)));
    }
    ev.attached_idx = attached_neighbor_indices(target_neighbors, ev.attached);
    events.push_back(std::move(ev));
  }
  return events;
}

struct GeomeanAccum {
  double log_sum = 0.0;
  std::size_t count = 0;
  std::size_t unreachable = 0;

  void add(const DistanceSample& sample) {
    for (std::uint32_t d : sample.distances) log_sum += std::log(static_cast<double>(d));
    count += sample.distances.size();
    unreachable += sample.unreachable;
  }
  double geomean() const {
    return count == 0 ? std::nan("") : std::exp(log_sum / static_cast<double>(count));
  }
};

struct DistanceAccum {
  GeomeanAccum event;
  GeomeanAccum null;
};

DistanceWindow make_window(std::size_t size, const DistanceAccum& acc) {
  DistanceWindow w;
  w.size = size;
  w.event_geomean = acc.event.geomean();
  w.null_geomean = acc.null.geomean();
  w.event_pairs = acc.event.count;
  w.event_unreachable = acc.event.unreachable;
  w.null_pairs = acc.null.count;
  w.null_unreachable = acc.null.unreachable;
  return w;
}

}  // namespace

std::optional<std::pair<double, double>> pa_event_ratio(
    const std::vector<std::uint32_t>& degrees_before,
    const std::vector<std::uint32_t>& attached_idx) {
  if (degrees_before.empty() || attached_idx.empty()) return std::nullopt;
  double attached_sum = 0.0;
  for (std::uint32_t i : attached_idx) attached_sum += degrees_before.at(i);
  double all_sum = 0.0;
  for (std::uint32_t d : degrees_before) all_sum += d;
  return std::make_pair(attached_sum / static_cast<double>(attached_idx.size()),
                        all_sum / static_cast<double>(degrees_before.size()));
}

PaRatioSeries pa_ratio_series(const std::vector<GrowthEvent>& events,
                              const SnapshotSchedule& schedule) {
  struct Accum {
    std::size_t n = 0;
    double sum_a = 0.0, sum_b = 0.0;
    double sum_aa = 0.0, sum_bb = 0.0, sum_ab = 0.0;
  };
  std::vector<Accum> acc(schedule.sizes.size());
  for (const GrowthEvent& ev : events) {
    const auto means = pa_event_ratio(ev.degrees_before, ev.attached_idx);
    if (!means) continue;
    const std::size_t w = window_of(schedule.sizes, ev.new_node);
    if (w >= acc.size()) continue;
    const auto [a, b] = *means;
    Accum& s = acc[w];
    ++s.n;
    s.sum_a += a;
    s.sum_b += b;
    s.sum_aa += a * a;
    s.sum_bb += b * b;
    s.sum_ab += a * b;
  }

  PaRatioSeries series;
  for (std::size_t w = 0; w < acc.size(); ++w) {
    const Accum& s = acc[w];
    if (s.n == 0) continue;
    const double n = static_cast<double>(s.n);
    const double a_mean = s.sum_a / n;
    const double b_mean = s.sum_b / n;
    PaWindow win;
    win.size = schedule.sizes[w];
    win.ratio = a_mean / b_mean;
    win.events = s.n;
    if (s.n >= 2) {
      const double var_a = (s.sum_aa - n * a_mean * a_mean) / (n - 1.0);
      const double var_b = (s.sum_bb - n * b_mean * b_mean) / (n - 1.0);
      const double cov = (s.sum_ab - n * a_mean * b_mean) / (n - 1.0);
      const double r = win.ratio;
      const double var_ratio =
          (var_a + r * r * var_b - 2.0 * r * cov) / (n * b_mean * b_mean);
      win.standard_error = var_ratio > 0.0 ? std::sqrt(var_ratio) : 0.0;
    }
    series.windows.push_back(win);
    series.total_events += s.n;
  }

  const std::size_t m = series.windows.size();
  if (m > 0) {
    double sum = 0.0;
    for (const PaWindow& w : series.windows) sum += w.ratio;
    series.mean_ratio = sum / static_cast<double>(m);
    if (m >= 2) {
      double ss = 0.0;
      for (const PaWindow& w : series.windows) {
        const double d = w.ratio - series.mean_ratio;
        ss += d * d;
      }
      series.standard_error = std::sqrt(ss / static_cast<double>(m - 1) / static_cast<double>(m));
    }
  }
  return series;
}

std::vector<GrowthEvent> empirical_pa_events(const TemporalEdgeList& list) {
  std::vector<GrowthEvent> events;
  Graph g;
  const auto& edges = list.edges;
  std::size_t i = 0;
  while (i < edges.size()) {
    std::size_t j = i + 1;
    while (j < edges.size() && edges[j].time == edges[i].time) ++j;
    auto group = group_events(g, edges, i, j);
    events.insert(events.end(), std::make_move_iterator(group.begin()),
                  std::make_move_iterator(group.end()));
    for (std::size_t e = i; e < j; ++e) {
      g.ensure_nodes(std::max(edges[e].src, edges[e].dst) + std::size_t{1});
      if (!is_self_loop(edges[e])) g.add_edge(edges[e].src, edges[e].dst);
    }
    i = j;
  }
  return events;
}

DistanceSample pre_connection_distances(const Graph& graph_before,
                                        const std::vector<NodeId>& attached,
                                        std::uint32_t max_depth) {
  DistanceSample out;
  std::vector<NodeId> nodes;
  for (NodeId v : attached) {
    if (v >= graph_before.num_nodes()) throw std::out_of_range("node id out of range");
    if (std::find(nodes.begin(), nodes.end(), v) == nodes.end()) nodes.push_back(v);
  }
  const std::size_t m = nodes.size();
  if (m < 2) return out;

  // one BFS per source covers its pairs with every later entry
  std::vector<std::uint32_t> dist(graph_before.num_nodes());
  std::vector<char> seen(graph_before.num_nodes());
  std::vector<NodeId> queue;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    std::fill(seen.begin(), seen.end(), 0);
    queue.clear();
    queue.push_back(nodes[i]);
    seen[nodes[i]] = 1;
    dist[nodes[i]] = 0;
    std::size_t remaining = m - i - 1;
    for (std::size_t head = 0; head < queue.size() && remaining > 0; ++head) {
      const NodeId u = queue[head];
      if (dist[u] >= max_depth) break;
      for (NodeId nb : graph_before.neighbors(u)) {
        if (seen[nb]) continue;
        seen[nb] = 1;
        dist[nb] = dist[u] + 1;
        queue.push_back(nb);
        for (std::size_t j = i + 1; j < m; ++j)
          if (nodes[j] == nb && --remaining == 0) break;
      }
    }
    for (std::size_t j = i + 1; j < m; ++j) {
      if (seen[nodes[j]])
        out.distances.push_back(dist[nodes[j]]);
      else
        ++out.unreachable;
    }
  }
  return out;
}

DistanceSample random_pair_null(const Graph& g, std::size_t samples, Rng& rng,
                                std::uint32_t max_depth) {
  if (g.num_nodes() < 2) throw std::invalid_argument("need at least two nodes");
  DistanceSample out;
  DistanceOracle oracle(g);
  const std::uint64_t n = g.num_nodes();
  for (std::size_t s = 0; s < samples; ++s) {
    const NodeId u = static_cast<NodeId>(rng.below(n));
    NodeId v = static_cast<NodeId>(rng.below(n));
    while (v == u) v = static_cast<NodeId>(rng.below(n));
    if (const auto d = oracle.distance(u, v, max_depth))
      out.distances.push_back(*d);
    else
      ++out.unreachable;
  }
  return out;
}

double geometric_mean(const std::vector<std::uint32_t>& values) {
  if (values.empty()) throw std::invalid_argument("geometric mean of nothing");
  double log_sum = 0.0;
  for (std::uint32_t v : values) log_sum += std::log(static_cast<double>(v));
  return std::exp(log_sum / static_cast<double>(values.size()));
}

DistanceSeries distance_series(const GrowthTrace& trace, const SnapshotSchedule& schedule,
                               const DistanceOptions& options) {
  if (trace.events.empty()) throw std::logic_error("trace has no recorded events");
  const auto& sizes = schedule.sizes;
  std::vector<DistanceAccum> acc(sizes.size());
  Graph g(trace.events.front().new_node);
  Rng rng(options.null_seed);
  std::size_t next = 0;
  auto take_nulls = [&] {
    while (next < sizes.size() && g.num_nodes() >= sizes[next]) {
      if (g.num_nodes() >= 2)
        acc[next].null.add(random_pair_null(g, options.null_samples, rng, options.max_depth));
      ++next;
    }
  };
  take_nulls();
  for (const GrowthEvent& ev : trace.events) {
    if (ev.attached.size() >= 2) {
      const std::size_t w = window_of(sizes, ev.new_node);
      if (w < acc.size())
        acc[w].event.add(pre_connection_distances(g, ev.attached, options.max_depth));
    }
    g.ensure_nodes(ev.new_node + std::size_t{1});
    for (NodeId a : ev.attached) g.add_edge(ev.new_node, a);
    take_nulls();
  }

  DistanceSeries series;
  for (std::size_t w = 0; w < next; ++w) series.windows.push_back(make_window(sizes[w], acc[w]));
  return series;
}

DistanceSeries distance_series(const TemporalEdgeList& list, const SnapshotSchedule& schedule,
                               const DistanceOptions& options) {
  const auto& sizes = schedule.sizes;
  std::vector<DistanceAccum> acc(sizes.size());
  Graph g;
  Rng rng(options.null_seed);
  std::size_t next = 0;
  const auto& edges = list.edges;
  std::size_t i = 0;
  while (i < edges.size()) {
    std::size_t j = i + 1;
    while (j < edges.size() && edges[j].time == edges[i].time) ++j;
    for (const GrowthEvent& ev : group_events(g, edges, i, j)) {
      std::vector<NodeId> present;
      for (NodeId v : ev.attached)
        if (v < g.num_nodes()) present.push_back(v);
      if (present.size() < 2) continue;
      const std::size_t w = window_of(sizes, ev.new_node);
      if (w < acc.size())
        acc[w].event.add(pre_connection_distances(g, present, options.max_depth));
    }
    for (std::size_t e = i; e < j; ++e) {
      g.ensure_nodes(std::max(edges[e].src, edges[e].dst) + std::size_t{1});
      if (!is_self_loop(edges[e])) g.add_edge(edges[e].src, edges[e].dst);
      while (next < sizes.size() && g.num_nodes() >= sizes[next]) {
        if (g.num_nodes() >= 2)
          acc[next].null.add(random_pair_null(g, options.null_samples, rng, options.max_depth));
        ++next;
      }
    }
    i = j;
  }

  DistanceSeries series;
  for (std::size_t w = 0; w < next; ++w) series.windows.push_back(make_window(sizes[w], acc[w]));
  return series;
}

double mean_clique_size(const CliqueProfile& profile, std::size_t k_min) {
  if (k_min < 1) throw std::invalid_argument("k_min must be at least 1");
  long double weighted = 0.0L;
  long double total = 0.0L;
  for (std::size_t k = k_min; k < profile.counts.size(); ++k) {
    weighted += static_cast<long double>(k) * static_cast<long double>(profile.counts[k]);
    total += static_cast<long double>(profile.counts[k]);
  }
  if (total == 0.0L) throw std::invalid_argument("no cliques at or above k_min");
  return static_cast<double>(weighted / total);
}

void write_pa_csv(std::ostream& out, const PaRatioSeries& series) {
  for (const PaWindow& w : series.windows)
    out << w.size << ',' << format_double(w.ratio) << ',' << format_double(w.standard_error)
        << ',' << w.events << '\n';
}

void write_distance_csv(std::ostream& out, const DistanceSeries& series) {
  for (const DistanceWindow& w : series.windows) {
    const std::size_t total = w.event_pairs + w.event_unreachable;
    const double frac =
        total == 0 ? 0.0
                   : static_cast<double>(w.event_unreachable) / static_cast<double>(total);
    out << w.size << ',' << format_double(w.event_geomean) << ','
        << format_double(w.null_geomean) << ',' << format_double(frac) << '\n';
  }
}

void write_mean_clique_csv(std::ostream& out,
                           const std::vector<std::pair<std::size_t, double>>& rows) {
  for (const auto& [size, mean] : rows) out << size << ',' << format_double(mean) << '\n';
}

}  // namespace cliquescale
