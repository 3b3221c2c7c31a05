#include "cliquescale/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <unordered_map>

namespace cliquescale {

namespace {

struct RawEdge {
  std::int64_t src;
  std::int64_t dst;
  std::int64_t time;
};

bool parse_field(const char*& cursor, const char* end, std::int64_t& value) {
  while (cursor < end && (*cursor == ' ' || *cursor == '\t')) ++cursor;
  const auto [next, ec] = std::from_chars(cursor, end, value);
  if (ec != std::errc{} || (next < end && *next != ' ' && *next != '\t')) return false;
  cursor = next;
  return true;
}

}  // namespace

std::size_t TemporalEdgeList::num_self_loops() const {
  return static_cast<std::size_t>(
      std::count_if(edges.begin(), edges.end(), [](const TemporalEdge& e) {
        return is_self_loop(e);
      }));
}

ParseError::ParseError(std::size_t line_number, const std::string& message)
    : std::runtime_error("line " + std::to_string(line_number) + ": " + message),
      line(line_number) {}

TemporalEdgeList parse_temporal_edges(std::istream& in) {
  std::vector<RawEdge> raw;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const char* cursor = line.data();
    const char* end = cursor + line.size();
    while (cursor < end && (*cursor == ' ' || *cursor == '\t')) ++cursor;
    if (cursor == end || *cursor == '#') continue;

    RawEdge e;
    if (!parse_field(cursor, end, e.src) || !parse_field(cursor, end, e.dst) ||
        !parse_field(cursor, end, e.time))
      throw ParseError(line_number, "expected three integer fields: src dst timestamp");
    raw.push_back(e);
  }

  std::stable_sort(raw.begin(), raw.end(),
                   [](const RawEdge& a, const RawEdge& b) { return a.time < b.time; });

  TemporalEdgeList list;
  list.edges.reserve(raw.size());
  std::unordered_map<std::int64_t, NodeId> dense;
  dense.reserve(raw.size());
  auto relabel = [&](std::int64_t id) {
    const auto [it, inserted] = dense.try_emplace(id, static_cast<NodeId>(list.dense_to_raw.size()));
    if (inserted) list.dense_to_raw.push_back(id);
    return it->second;
  };
  for (const RawEdge& e : raw)
    list.edges.push_back({relabel(e.src), relabel(e.dst), e.time});
  return list;
}

SnapshotSeries build_cumulative_snapshots(const TemporalEdgeList& list,
                                          const SnapshotSchedule& schedule,
                                          const SnapshotCallback& on_snapshot) {
  SnapshotSeries series;
  Graph g;
  std::size_t next = 0;
  const auto& sizes = schedule.sizes;

  for (const TemporalEdge& e : list.edges) {
    if (next >= sizes.size()) break;
    g.ensure_nodes(static_cast<std::size_t>(std::max(e.src, e.dst)) + 1);
    if (!is_self_loop(e)) g.add_edge(e.src, e.dst);
    while (next < sizes.size() && g.num_nodes() >= sizes[next]) {
      const SnapshotStats stats{sizes[next], g.num_nodes(), g.num_edges()};
      series.snapshots.push_back(stats);
      if (on_snapshot) on_snapshot(g, stats);
      ++next;
    }
  }
  series.unreached.assign(sizes.begin() + static_cast<std::ptrdiff_t>(next), sizes.end());
  return series;
}

}  // namespace cliquescale
