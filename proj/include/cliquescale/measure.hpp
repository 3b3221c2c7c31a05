#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "cliquescale/cliques.hpp"
#include "cliquescale/graph.hpp"
#include "cliquescale/growth.hpp"
#include "cliquescale/ingest.hpp"
#include "cliquescale/rng.hpp"
#include "cliquescale/schedule.hpp"

namespace cliquescale {

/// Mean degree of the target neighbors the new node linked to, paired with
/// the mean degree of all target neighbors; degrees are the pre-arrival
/// values. Events with no neighbor degrees or no attachment beyond the
/// target carry no ratio information and map to nullopt.
std::optional<std::pair<double, double>> pa_event_ratio(
    const std::vector<std::uint32_t>& degrees_before,
    const std::vector<std::uint32_t>& attached_idx);

struct PaWindow {
  std::size_t size = 0;  // schedule entry the window ends at
  double ratio = 0.0;    // mean attached degree / mean neighbor degree
  double standard_error = 0.0;
  std::size_t events = 0;  // qualifying events pooled in the window
};

/// Only windows holding at least one qualifying event appear; the aggregate
/// is the mean of window ratios with its standard error across windows.
struct PaRatioSeries {
  std::vector<PaWindow> windows;
  double mean_ratio = 0.0;
  double standard_error = 0.0;
  std::size_t total_events = 0;
};

/// Pools events into windows ending at each schedule size (an event belongs
/// to the first size exceeding its pre-arrival node count; events at or past
/// the last size are dropped). Within a window the ratio divides the average
/// attached-degree mean by the average all-neighbor mean over qualifying
/// events; non-qualifying events contribute to neither average. The window
/// standard error linearizes the ratio of means.
PaRatioSeries pa_ratio_series(const std::vector<GrowthEvent>& events,
                              const SnapshotSchedule& schedule);

/// Replays a time-sorted edge list into attachment events. A node's arrival
/// burst is every edge incident to it at its first-appearance timestamp; its
/// partners with smaller ids are the attached set, the first of them the
/// target, and degrees come from the graph as of the burst timestamp's start
/// (so a target that debuted moments earlier in the same timestamp group has
/// an empty neighborhood). Nodes whose burst links no earlier node yield no
/// event.
std::vector<GrowthEvent> empirical_pa_events(const TemporalEdgeList& list);

struct DistanceSample {
  std::vector<std::uint32_t> distances;  // reachable pairs only
  std::size_t unreachable = 0;           // pairs with no path within max_depth
};

/// BFS distance on graph_before for every unordered pair in attached. Node
/// ids must exist in graph_before. A singleton or empty set yields no pairs.
DistanceSample pre_connection_distances(const Graph& graph_before,
                                        const std::vector<NodeId>& attached,
                                        std::uint32_t max_depth = Graph::kNoDepthCap);

/// Distances between `samples` uniform random distinct node pairs. Throws
/// std::invalid_argument when the graph has fewer than two nodes.
DistanceSample random_pair_null(const Graph& g, std::size_t samples, Rng& rng,
                                std::uint32_t max_depth = Graph::kNoDepthCap);

/// exp of the mean log. Throws std::invalid_argument on an empty list.
double geometric_mean(const std::vector<std::uint32_t>& values);

struct DistanceWindow {
  std::size_t size = 0;
  double event_geomean = 0.0;  // NaN when the window has no reachable pair
  double null_geomean = 0.0;   // NaN when no null pair is reachable
  std::size_t event_pairs = 0;
  std::size_t event_unreachable = 0;
  std::size_t null_pairs = 0;
  std::size_t null_unreachable = 0;
};

struct DistanceSeries {
  std::vector<DistanceWindow> windows;  // one per schedule size reached
};

struct DistanceOptions {
  std::size_t null_samples = 1000;
  std::uint64_t null_seed = 0;
  std::uint32_t max_depth = Graph::kNoDepthCap;
};

/// Pairwise pre-connection distances pooled over each window's events (all
/// pairs pooled per window rather than averaged per event first), with a
/// random-pair null drawn when the replayed graph first reaches the window
/// size. Windows follow the pa_ratio_series assignment rule. The trace
/// overload replays recorded events and requires them; the edge-list
/// overload replays bursts the way empirical_pa_events does, skipping
/// attached nodes that did not yet exist at the burst start.
DistanceSeries distance_series(const GrowthTrace& trace, const SnapshotSchedule& schedule,
                               const DistanceOptions& options = {});
DistanceSeries distance_series(const TemporalEdgeList& list, const SnapshotSchedule& schedule,
                               const DistanceOptions& options = {});

/// Sum of k * counts[k] over counts[k] for k >= k_min. Throws
/// std::invalid_argument when k_min < 1 or no clique of size >= k_min exists.
double mean_clique_size(const CliqueProfile& profile, std::size_t k_min = 2);

// N,ratio,stderr,count rows, one per window.
void write_pa_csv(std::ostream& out, const PaRatioSeries& series);

// N,dist_geomean,null_geomean,unreachable_frac rows; the fraction is the
// share of event pairs that were unreachable.
void write_distance_csv(std::ostream& out, const DistanceSeries& series);

// N,mean_clique_size rows.
void write_mean_clique_csv(std::ostream& out,
                           const std::vector<std::pair<std::size_t, double>>& rows);

}  // namespace cliquescale
