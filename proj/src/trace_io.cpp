#include "cliquescale/trace_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

#include "cliquescale/ingest.hpp"

namespace cliquescale {

namespace {

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

double parse_double(const std::string& text, std::size_t line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ParseError(line, "expected a real number, got '" + text + "'");
  return value;
}

std::uint64_t parse_u64(const std::string& text, std::size_t line) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ParseError(line, "expected an unsigned integer, got '" + text + "'");
  return value;
}

struct HeaderValue {
  std::string text;
  std::size_t line = 0;
};

ModelParams params_from_header(const std::map<std::string, HeaderValue>& header,
                               std::size_t model_line) {
  const auto field = [&](const char* key) -> const HeaderValue& {
    const auto it = header.find(key);
    if (it == header.end())
      throw ParseError(model_line, std::string("missing header field '") + key + "'");
    return it->second;
  };
  const std::string& model = field("model").text;
  if (model == "lpam")
    return LpamParams{parse_double(field("p").text, field("p").line),
                      parse_double(field("r").text, field("r").line)};
  if (model == "copy") return CopyParams{parse_double(field("p").text, field("p").line)};
  if (model == "forest_fire")
    return ForestFireParams{parse_double(field("forward").text, field("forward").line),
                            parse_double(field("backward").text, field("backward").line)};
  if (model == "ba")
    return BaParams{static_cast<std::size_t>(parse_u64(field("m").text, field("m").line))};
  throw ParseError(field("model").line, "unknown model '" + model + "'");
}

}  // namespace

void write_trace(std::ostream& out, const GrowthTrace& trace) {
  if (trace.events.size() + 1 != trace.graph.num_nodes())
    throw std::logic_error("trace has no recorded events for its graph");

  out << "# cliquescale-trace v1\n";
  out << "# model " << model_name(trace.params) << '\n';
  if (const auto* lp = std::get_if<LpamParams>(&trace.params)) {
    out << "# p " << format_double(lp->p) << '\n';
    out << "# r " << format_double(lp->r) << '\n';
  } else if (const auto* cp = std::get_if<CopyParams>(&trace.params)) {
    out << "# p " << format_double(cp->p) << '\n';
  } else if (const auto* ff = std::get_if<ForestFireParams>(&trace.params)) {
    out << "# forward " << format_double(ff->forward) << '\n';
    out << "# backward " << format_double(ff->backward) << '\n';
  } else {
    out << "# m " << std::get<BaParams>(trace.params).m << '\n';
  }
  out << "# seed " << trace.seed << '\n';
  out << "# n " << trace.graph.num_nodes() << '\n';
  if (!trace.schedule.sizes.empty()) {
    out << "# schedule ";
    for (std::size_t i = 0; i < trace.schedule.sizes.size(); ++i) {
      if (i > 0) out << ',';
      out << trace.schedule.sizes[i];
    }
    out << '\n';
  }

  for (const GrowthEvent& ev : trace.events) {
    out << ev.new_node << ' ' << ev.target;
    for (std::size_t i = 1; i < ev.attached.size(); ++i)
      out << (i == 1 ? ' ' : ',') << ev.attached[i];
    out << '\n';
  }
}

GrowthTrace read_trace(std::istream& in) {
  std::map<std::string, HeaderValue> header;
  std::string line;
  std::size_t line_number = 0;
  std::size_t model_line = 0;

  GrowthTrace trace;
  Graph& g = trace.graph;
  bool started = false;

  std::size_t event_count = 0;
  std::size_t next_mark = 0;
  auto emit_marks = [&] {
    const auto& sizes = trace.schedule.sizes;
    while (next_mark < sizes.size() && g.num_nodes() >= sizes[next_mark]) {
      trace.marks.push_back({g.num_nodes(), g.num_edges(), event_count});
      ++next_mark;
    }
  };

  auto begin_replay = [&] {
    trace.params = params_from_header(header, model_line == 0 ? 1 : model_line);
    validate_params(trace.params);
    if (const auto it = header.find("seed"); it != header.end())
      trace.seed = parse_u64(it->second.text, it->second.line);
    if (const auto it = header.find("schedule"); it != header.end()) {
      const std::string& text = it->second.text;
      std::size_t start = 0;
      while (start <= text.size()) {
        const std::size_t comma = std::min(text.find(',', start), text.size());
        trace.schedule.sizes.push_back(
            parse_u64(text.substr(start, comma - start), it->second.line));
        start = comma + 1;
      }
    }
    g.add_node();
    started = true;
    emit_marks();
  };

  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    if (line[0] == '#') {
      if (started) throw ParseError(line_number, "header line after events began");
      std::size_t pos = 1;
      while (pos < line.size() && line[pos] == ' ') ++pos;
      const std::size_t key_end = std::min(line.find(' ', pos), line.size());
      const std::string key = line.substr(pos, key_end - pos);
      if (key == "model") model_line = line_number;
      if (key_end < line.size())
        header[key] = {line.substr(key_end + 1), line_number};
      continue;
    }

    if (!started) begin_replay();

    // event line: NEW TARGET [a1,a2,...]
    std::uint64_t fields[2];
    const char* cursor = line.data();
    const char* end = cursor + line.size();
    for (std::uint64_t& f : fields) {
      while (cursor < end && *cursor == ' ') ++cursor;
      const auto [next, ec] = std::from_chars(cursor, end, f);
      if (ec != std::errc{}) throw ParseError(line_number, "malformed event line");
      cursor = next;
    }
    if (fields[0] != g.num_nodes())
      throw ParseError(line_number, "event ids must be consecutive");
    if (fields[1] >= fields[0])
      throw ParseError(line_number, "target must already exist");

    GrowthEvent ev;
    ev.target = static_cast<NodeId>(fields[1]);
    std::vector<NodeId> target_neighbors(g.neighbors(ev.target).begin(),
                                         g.neighbors(ev.target).end());
    for (NodeId u : target_neighbors)
      ev.degrees_before.push_back(static_cast<std::uint32_t>(g.degree(u)));

    ev.new_node = g.add_node();
    if (!g.add_edge(ev.new_node, ev.target))
      throw ParseError(line_number, "duplicate edge in event");
    ev.attached.push_back(ev.target);
    for (;;) {
      while (cursor < end && (*cursor == ' ' || *cursor == ',')) ++cursor;
      if (cursor == end) break;
      std::uint64_t a = 0;
      const auto [next, ec] = std::from_chars(cursor, end, a);
      if (ec != std::errc{}) throw ParseError(line_number, "malformed attached list");
      cursor = next;
      if (a >= ev.new_node) throw ParseError(line_number, "attached node must already exist");
      if (!g.add_edge(ev.new_node, static_cast<NodeId>(a)))
        throw ParseError(line_number, "duplicate edge in event");
      ev.attached.push_back(static_cast<NodeId>(a));
    }
    ev.attached_idx = attached_neighbor_indices(target_neighbors, ev.attached);
    trace.events.push_back(std::move(ev));
    ++event_count;
    emit_marks();
  }

  if (!started) {
    if (header.empty()) throw ParseError(line_number == 0 ? 1 : line_number, "empty trace");
    begin_replay();
  }
  if (const auto it = header.find("n"); it != header.end()) {
    if (parse_u64(it->second.text, it->second.line) != g.num_nodes())
      throw ParseError(it->second.line, "trace is truncated: node count mismatch");
  }
  return trace;
}

void write_edge_list(std::ostream& out, const Graph& g) {
  for (NodeId v = 0; v < g.num_nodes(); ++v)
    for (NodeId u : g.neighbors(v))
      if (u < v) out << u << ' ' << v << ' ' << v << '\n';
}

}  // namespace cliquescale
