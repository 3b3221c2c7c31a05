#include <doctest.h>

#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>

#include "cliquescale/growth.hpp"
#include "cliquescale/ingest.hpp"
#include "cliquescale/schedule.hpp"
#include "cliquescale/trace_io.hpp"

using namespace cliquescale;

namespace {

GrowthTrace round_trip(const GrowthTrace& trace) {
  std::ostringstream out;
  write_trace(out, trace);
  std::istringstream in(out.str());
  return read_trace(in);
}

void check_traces_equal(const GrowthTrace& a, const GrowthTrace& b) {
  CHECK(a.params.index() == b.params.index());
  CHECK(a.seed == b.seed);
  CHECK(a.schedule.sizes == b.schedule.sizes);
  CHECK(a.graph.num_nodes() == b.graph.num_nodes());
  CHECK(a.graph.num_edges() == b.graph.num_edges());
  REQUIRE(a.events.size() == b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    const GrowthEvent& x = a.events[i];
    const GrowthEvent& y = b.events[i];
    CHECK(x.new_node == y.new_node);
    CHECK(x.target == y.target);
    CHECK(x.attached == y.attached);
    CHECK(x.degrees_before == y.degrees_before);
    CHECK(x.attached_idx == y.attached_idx);
  }
  REQUIRE(a.marks.size() == b.marks.size());
  for (std::size_t i = 0; i < a.marks.size(); ++i) {
    CHECK(a.marks[i].nodes == b.marks[i].nodes);
    CHECK(a.marks[i].edges == b.marks[i].edges);
    CHECK(a.marks[i].event_index == b.marks[i].event_index);
  }
}

}  // namespace

TEST_CASE("trace round trip preserves every field") {
  const auto schedule = log_spaced_sizes(50, 300, 1.4);
  const std::vector<ModelParams> cases = {
      LpamParams{0.42, 0.89},
      CopyParams{0.61},
      ForestFireParams{0.37, 0.29},
      BaParams{3},
  };
  for (const ModelParams& params : cases) {
    const auto trace = grow(params, 300, 12345, schedule);
    const auto replayed = round_trip(trace);
    check_traces_equal(trace, replayed);
    if (const auto* lp = std::get_if<LpamParams>(&trace.params)) {
      const auto& rp = std::get<LpamParams>(replayed.params);
      CHECK(rp.p == lp->p);
      CHECK(rp.r == lp->r);
    }
  }
}

TEST_CASE("trace text format") {
  GrowthTrace trace;
  trace.params = CopyParams{0.5};
  trace.seed = 7;
  Graph& g = trace.graph;
  g.ensure_nodes(3);
  g.add_edge(1, 0);
  g.add_edge(2, 1);
  g.add_edge(2, 0);
  {
    GrowthEvent ev;
    ev.new_node = 1;
    ev.target = 0;
    ev.attached = {0};
    trace.events.push_back(ev);
  }
  {
    GrowthEvent ev;
    ev.new_node = 2;
    ev.target = 1;
    ev.attached = {1, 0};
    ev.degrees_before = {1};
    ev.attached_idx = {0};
    trace.events.push_back(ev);
  }

  std::ostringstream out;
  write_trace(out, trace);
  CHECK(out.str() ==
        "# cliquescale-trace v1\n"
        "# model copy\n"
        "# p 0.5\n"
        "# seed 7\n"
        "# n 3\n"
        "1 0\n"
        "2 1 0\n");
}

TEST_CASE("write_trace rejects traces without events") {
  GrowOptions options;
  options.record_events = false;
  const auto trace = grow(CopyParams{0.5}, 50, 1, {}, options);
  std::ostringstream out;
  CHECK_THROWS_AS(write_trace(out, trace), std::logic_error);
}

TEST_CASE("read_trace rejects malformed input") {
  auto expect_error = [](const std::string& text) {
    std::istringstream in(text);
    CHECK_THROWS_AS(read_trace(in), ParseError);
  };
  expect_error("");
  expect_error("# model warp\n# seed 1\n1 0\n");
  expect_error("# model copy\n# seed 1\n1 0\n");  // missing p
  expect_error("# model copy\n# p 0.5\n2 0\n");   // skips node 1
  expect_error("# model copy\n# p 0.5\n1 0\n2 1 1\n");    // attaches target twice
  expect_error("# model copy\n# p 0.5\n1 0\n2 1 3\n");    // attaches a future node
  expect_error("# model copy\n# p 0.5\n1 1\n");           // self target
  expect_error("# model copy\n# p 0.5\n# n 5\n1 0\n");    // truncated
  expect_error("# model copy\n# p 0.5\n1 0\n# p 0.7\n");  // header after events
}

TEST_CASE("replay recomputes marks from the schedule header") {
  SnapshotSchedule schedule;
  schedule.sizes = {2, 4};
  const std::string text =
      "# model copy\n# p 0.25\n# seed 9\n# schedule 2,4\n"
      "1 0\n2 0\n3 1\n";
  std::istringstream in(text);
  const auto trace = read_trace(in);
  CHECK(trace.seed == 9);
  CHECK(trace.schedule.sizes == schedule.sizes);
  REQUIRE(trace.marks.size() == 2);
  CHECK(trace.marks[0].nodes == 2);
  CHECK(trace.marks[0].edges == 1);
  CHECK(trace.marks[1].nodes == 4);
  CHECK(trace.marks[1].edges == 3);
}

TEST_CASE("edge list export replays through ingest") {
  const auto trace = grow(LpamParams{0.45, 0.7}, 200, 88);
  std::ostringstream out;
  write_edge_list(out, trace.graph);

  std::istringstream in(out.str());
  const auto list = parse_temporal_edges(in);
  CHECK(list.edges.size() == trace.graph.num_edges());
  // arrival order equals node id, so the dense relabeling is the identity
  for (std::size_t i = 0; i < list.num_nodes(); ++i)
    CHECK(list.dense_to_raw[i] == static_cast<std::int64_t>(i));

  // the snapshot fires on the edge event that completes the node count, so
  // the rest of the last arrival's burst lands after it
  SnapshotSchedule schedule;
  schedule.sizes = {trace.graph.num_nodes()};
  bool checked = false;
  build_cumulative_snapshots(list, schedule, [&](const Graph& g, const SnapshotStats&) {
    CHECK(g.num_nodes() == trace.graph.num_nodes());
    CHECK(g.num_edges() <= trace.graph.num_edges());
    for (NodeId v = 0; v < g.num_nodes(); ++v)
      for (NodeId u : g.neighbors(v))
        CHECK(trace.graph.has_edge(u, v));
    checked = true;
  });
  CHECK(checked);

  // replaying every edge reproduces the grown graph exactly
  Graph full;
  full.ensure_nodes(list.num_nodes());
  for (const TemporalEdge& e : list.edges) full.add_edge(e.src, e.dst);
  CHECK(full.num_edges() == trace.graph.num_edges());
  for (NodeId v = 0; v < full.num_nodes(); ++v)
    for (NodeId u : full.neighbors(v))
      CHECK(trace.graph.has_edge(u, v));
}
