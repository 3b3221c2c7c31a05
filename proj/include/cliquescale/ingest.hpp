#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "cliquescale/graph.hpp"
#include "cliquescale/schedule.hpp"

namespace cliquescale {

// One temporal edge with dense node ids. Ids are assigned in first-appearance
// order after sorting by timestamp, so a larger id means a later first arrival.
struct TemporalEdge {
  NodeId src = 0;
  NodeId dst = 0;
  std::int64_t time = 0;
};

inline bool is_self_loop(const TemporalEdge& e) { return e.src == e.dst; }

struct TemporalEdgeList {
  std::vector<TemporalEdge> edges;        // sorted nondecreasing by time
  std::vector<std::int64_t> dense_to_raw; // dense id -> original file id

  std::size_t num_nodes() const { return dense_to_raw.size(); }
  std::size_t num_self_loops() const;
};

struct ParseError : std::runtime_error {
  ParseError(std::size_t line_number, const std::string& message);
  std::size_t line;
};

// Reads `SRC DST UNIXTIME [EXTRA...]` lines. Fields are separated by spaces or
// tabs, extra fields are ignored, and lines starting with '#' or containing
// only whitespace are skipped. Edges are stable-sorted by timestamp, then node
// ids are relabeled densely. Self-loops stay in the list.
//
// Throws ParseError (with a 1-based line number) when a kept line has fewer
// than three fields or a non-integer value in the first three.
TemporalEdgeList parse_temporal_edges(std::istream& in);

struct SnapshotStats {
  std::size_t scheduled = 0;  // the schedule entry that triggered this snapshot
  std::size_t nodes = 0;      // actual node count at the trigger (can overshoot)
  std::size_t edges = 0;
};

struct SnapshotSeries {
  std::vector<SnapshotStats> snapshots;
  std::vector<std::size_t> unreached;  // schedule entries beyond the data
};

using SnapshotCallback = std::function<void(const Graph&, const SnapshotStats&)>;

// Replays edges in time order into a cumulative simple graph. A self-loop
// still introduces its endpoint node; only the edge itself is dropped, as are
// repeats of existing edges. A snapshot fires at the first event where the
// node count reaches each schedule entry; one event adding two nodes can
// trigger two entries. Schedule entries never reached are reported, not
// errors.
SnapshotSeries build_cumulative_snapshots(const TemporalEdgeList& list,
                                          const SnapshotSchedule& schedule,
                                          const SnapshotCallback& on_snapshot = {});

}  // namespace cliquescale
