#pragma once

#include <iosfwd>

#include "cliquescale/growth.hpp"

namespace cliquescale {

// Text trace log: '#'-prefixed header lines carrying model, parameters, seed,
// node count, and schedule, then one line per event:
//
//   NEW TARGET a1,a2,...
//
// where a1,a2,... are the nodes attached beyond the target (column absent when
// the event linked only the target). Requires a trace grown with event
// recording on; throws std::logic_error otherwise.
void write_trace(std::ostream& out, const GrowthTrace& trace);

// Rebuilds the full trace by replaying the event log: the graph, the snapshot
// marks, and per-event degrees_before / attached_idx all come out identical to
// the live run. Throws ParseError (from the ingest module) with a line number
// on malformed input.
GrowthTrace read_trace(std::istream& in);

// One `SRC DST TIME` line per edge in the ingest format. TIME is the newer
// endpoint's id, which for a grown graph is its arrival step; the older
// endpoint comes first and a node's own attachment edges appear in attachment
// order, so feeding the output back through the ingest module reproduces the
// growth as an empirical event stream.
void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace cliquescale
