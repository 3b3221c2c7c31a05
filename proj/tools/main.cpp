#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "cliquescale/cliques.hpp"
#include "cliquescale/graph.hpp"
#include "cliquescale/growth.hpp"
#include "cliquescale/ingest.hpp"
#include "cliquescale/measure.hpp"
#include "cliquescale/scaling.hpp"
#include "cliquescale/schedule.hpp"
#include "cliquescale/select.hpp"
#include "cliquescale/trace_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cliquescale;

namespace {

constexpr const char* kVersion = "0.1.0";

// Bad flag combinations or values; exits 2 instead of 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

int default_threads() {
  if (const char* env = std::getenv("CLIQUESCALE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Identifies a run in output metadata: every CSV opens with
//   # cliquescale <version> <command> seed=<seed|-> config=<fnv1a of flags>
// Output-location flags stay out of the hash so the same analysis hashes the
// same wherever it is written.
struct RunMeta {
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;
  bool has_seed = false;
  std::uint64_t seed = 0;

  void set(std::string key, std::string value) {
    config.emplace_back(std::move(key), std::move(value));
  }
  void set_seed(std::uint64_t s) {
    has_seed = true;
    seed = s;
    set("seed", std::to_string(s));
  }
  std::uint64_t hash() const {
    std::string canonical = command;
    for (const auto& [key, value] : config) {
      canonical += ';';
      canonical += key;
      canonical += '=';
      canonical += value;
    }
    return fnv1a64(canonical);
  }
  std::string hash_hex() const {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(hash()));
    return buf;
  }
  std::string header(const std::string& extra = "") const {
    std::string line = "# cliquescale ";
    line += kVersion;
    line += ' ';
    line += command;
    line += " seed=";
    line += has_seed ? std::to_string(seed) : "-";
    line += " config=";
    line += hash_hex();
    if (!extra.empty()) {
      line += ' ';
      line += extra;
    }
    line += '\n';
    return line;
  }
};

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

// path "-" or empty = stdout
void emit_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
  } else {
    write_text_file(path, content);
  }
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// n_min of 0 (or past n_max) means a single snapshot at the full size.
SnapshotSchedule make_schedule(std::size_t n_min, std::size_t n_max,
                               double factor) {
  if (n_max == 0) throw UsageError("target size must be positive");
  if (n_min == 0 || n_min >= n_max) {
    SnapshotSchedule schedule;
    schedule.sizes = {n_max};
    return schedule;
  }
  if (!(factor > 1.0)) throw UsageError("--factor must exceed 1");
  return log_spaced_sizes(n_min, n_max, factor);
}

// Plain edge list: "U V [extra...]" integer lines, '#' and blank lines
// skipped. Ids are relabeled densely in first-appearance order; self-loops
// keep their node but drop the edge; duplicate edges collapse.
Graph load_edge_graph(const fs::path& path, std::size_t min_nodes = 0) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  Graph g;
  std::unordered_map<long long, NodeId> ids;
  const auto intern = [&](long long raw) {
    const auto [it, fresh] =
        ids.emplace(raw, static_cast<NodeId>(g.num_nodes()));
    if (fresh) g.add_node();
    return it->second;
  };
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream fields(line);
    long long a = 0, b = 0;
    if (!(fields >> a >> b))
      throw ParseError(line_no, "expected two integer endpoints");
    const NodeId u = intern(a);
    const NodeId v = intern(b);
    if (u != v) g.add_edge(u, v);
  }
  if (g.num_nodes() < min_nodes) g.ensure_nodes(min_nodes);
  return g;
}

struct SnapshotRef {
  std::size_t scheduled = 0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::string file;
};

struct SeriesInfo {
  fs::path dir;
  json manifest;
  std::vector<SnapshotRef> snapshots;
  SnapshotSchedule schedule;
  std::string trace_file;   // empty when the series has no event trace
  std::string stream_file;  // empty when the series has no temporal stream
};

SeriesInfo load_series(const std::string& dir) {
  SeriesInfo info;
  info.dir = dir;
  const fs::path manifest_path = info.dir / "manifest.json";
  std::ifstream in(manifest_path);
  if (!in)
    throw std::runtime_error("cannot open " + manifest_path.string());
  info.manifest = json::parse(in);
  for (const auto& entry : info.manifest.at("snapshots")) {
    SnapshotRef ref;
    ref.scheduled = entry.value("scheduled", std::size_t{0});
    ref.nodes = entry.at("nodes").get<std::size_t>();
    ref.edges = entry.value("edges", std::size_t{0});
    ref.file = entry.at("file").get<std::string>();
    info.snapshots.push_back(std::move(ref));
  }
  for (const auto& size : info.manifest.at("schedule"))
    info.schedule.sizes.push_back(size.get<std::size_t>());
  if (info.manifest.contains("trace") && info.manifest["trace"].is_string())
    info.trace_file = info.manifest["trace"].get<std::string>();
  if (info.manifest.contains("stream") && info.manifest["stream"].is_string())
    info.stream_file = info.manifest["stream"].get<std::string>();
  return info;
}

TemporalEdgeList parse_stream_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_temporal_edges(in);
}

GrowthTrace read_trace_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_trace(in);
}

struct CountFlags {
  std::size_t max_k = 0;
  int threads = 0;  // 0 = default_threads()
  double budget = 0.0;
  std::uint64_t cap = 0;

  CountOptions options() const {
    CountOptions count;
    count.max_k = max_k;
    count.threads = threads > 0 ? threads : default_threads();
    count.total_cap = uint128(cap);
    return count;
  }
  // fresh deadline per counting call
  CountOptions armed() const {
    CountOptions count = options();
    if (budget > 0.0)
      count.deadline =
          std::chrono::steady_clock::now() +
          std::chrono::duration_cast<std::chrono::steady_clock::duration>(
              std::chrono::duration<double>(budget));
    return count;
  }
  void record(RunMeta& meta) const {
    meta.set("max_k", std::to_string(max_k));
    meta.set("budget", format_double(budget));
    meta.set("cap", std::to_string(cap));
  }
};

std::vector<CliqueProfile> count_series_snapshots(const SeriesInfo& info,
                                                  const CountFlags& flags) {
  std::vector<CliqueProfile> profiles;
  profiles.reserve(info.snapshots.size());
  for (const auto& ref : info.snapshots) {
    const Graph g = load_edge_graph(info.dir / ref.file, ref.nodes);
    profiles.push_back(count_cliques(g, flags.armed()));
    std::fprintf(stderr, "count: N=%llu done (max clique %zu)\n",
                 static_cast<unsigned long long>(profiles.back().nodes),
                 profiles.back().max_clique());
  }
  return profiles;
}

std::string plot_script(const std::string& csv, const std::string& kind) {
  std::string script = "# gnuplot script for " + csv + "\n";
  script += "set datafile separator ','\n";
  script += "set key outside\n";
  if (kind == "count") {
    script +=
        "set logscale xy\nset xlabel 'nodes'\nset ylabel 'clique count'\n"
        "plot for [k=2:16] '" +
        csv +
        "' using (column(3)==k?column(1):1/0):4 with linespoints "
        "title sprintf('k=%d', k)\n";
  } else if (kind == "spectrum") {
    script +=
        "set xlabel 'clique size k'\nset ylabel 'scaling exponent'\n"
        "plot '" +
        csv + "' using 1:2:3 with yerrorbars title 'exponent'\n";
  } else if (kind == "pa") {
    script +=
        "set logscale x\nset xlabel 'nodes'\nset ylabel 'attachment ratio'\n"
        "plot '" +
        csv +
        "' using 1:2:3 with yerrorbars title 'ratio', "
        "1 with lines dashtype 2 title 'uniform'\n";
  } else if (kind == "distance") {
    script +=
        "set logscale x\nset xlabel 'nodes'\n"
        "set ylabel 'geometric mean distance'\n"
        "plot '" +
        csv + "' using 1:2 with linespoints title 'pre-connection pairs', '" +
        csv + "' using 1:3 with linespoints title 'random pairs'\n";
  } else if (kind == "mean-clique") {
    script +=
        "set logscale x\nset xlabel 'nodes'\nset ylabel 'mean clique size'\n"
        "plot '" +
        csv + "' using 1:2 with linespoints title 'mean clique size'\n";
  } else {  // envelope
    script +=
        "set logscale xy\nset xlabel 'nodes'\nset ylabel 'max clique count'\n"
        "plot '" +
        csv + "' using 1:2 with linespoints title 'envelope'\n";
  }
  return script;
}

void maybe_emit_plot(bool plot, const std::string& out,
                     const std::string& kind) {
  if (!plot) return;
  if (out.empty() || out == "-")
    throw UsageError("--plot requires --out FILE");
  write_text_file(out + ".gnuplot", plot_script(out, kind));
}

// ---- generate ----

struct GenerateOpts {
  std::string model;
  double p = -1.0;
  double r = -1.0;
  double forward = -1.0;
  double backward = -1.0;
  std::uint64_t m = 0;
  std::size_t nodes = 0;
  std::uint64_t seed = 0;
  std::size_t n_min = 0;
  double factor = 1.1;
  std::string out_dir;
  bool no_trace = false;
};

ModelParams build_params(const GenerateOpts& o) {
  const auto need = [](double value, const char* flag, const char* model) {
    if (value < 0.0)
      throw UsageError(std::string(flag) + " is required for model " + model);
    return value;
  };
  ModelParams params;
  if (o.model == "lpam")
    params = LpamParams{need(o.p, "--p", "lpam"), need(o.r, "--r", "lpam")};
  else if (o.model == "copy")
    params = CopyParams{need(o.p, "--p", "copy")};
  else if (o.model == "forest_fire")
    params = ForestFireParams{need(o.forward, "--forward", "forest_fire"),
                              need(o.backward, "--backward", "forest_fire")};
  else if (o.model == "ba") {
    if (o.m == 0) throw UsageError("--m is required for model ba");
    params = BaParams{o.m};
  } else {
    throw UsageError("unknown model '" + o.model +
                     "' (choose lpam, copy, forest_fire or ba)");
  }
  try {
    validate_params(params);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return params;
}

void record_params(RunMeta& meta, const ModelParams& params) {
  meta.set("model", std::string(model_name(params)));
  if (const auto* lpam = std::get_if<LpamParams>(&params)) {
    meta.set("p", format_double(lpam->p));
    meta.set("r", format_double(lpam->r));
  } else if (const auto* copy = std::get_if<CopyParams>(&params)) {
    meta.set("p", format_double(copy->p));
  } else if (const auto* ff = std::get_if<ForestFireParams>(&params)) {
    meta.set("forward", format_double(ff->forward));
    meta.set("backward", format_double(ff->backward));
  } else {
    meta.set("m", std::to_string(std::get<BaParams>(params).m));
  }
}

json params_json(const ModelParams& params) {
  json j;
  if (const auto* lpam = std::get_if<LpamParams>(&params)) {
    j["p"] = lpam->p;
    j["r"] = lpam->r;
  } else if (const auto* copy = std::get_if<CopyParams>(&params)) {
    j["p"] = copy->p;
  } else if (const auto* ff = std::get_if<ForestFireParams>(&params)) {
    j["forward"] = ff->forward;
    j["backward"] = ff->backward;
  } else {
    j["m"] = std::get<BaParams>(params).m;
  }
  return j;
}

int cmd_generate(const GenerateOpts& o) {
  const ModelParams params = build_params(o);
  if (o.nodes == 0) throw UsageError("--nodes must be positive");
  const SnapshotSchedule schedule = make_schedule(o.n_min, o.nodes, o.factor);

  RunMeta meta;
  meta.command = "generate";
  record_params(meta, params);
  meta.set_seed(o.seed);
  meta.set("nodes", std::to_string(o.nodes));
  meta.set("n_min", std::to_string(o.n_min));
  meta.set("factor", format_double(o.factor));
  meta.set("trace", o.no_trace ? "off" : "on");

  const fs::path dir(o.out_dir);
  fs::create_directories(dir / "snapshots");

  json snapshot_entries = json::array();
  GrowOptions options;
  options.record_events = !o.no_trace;
  options.on_snapshot = [&](const Graph& g, const SnapshotMark& mark) {
    const std::string file =
        "snapshots/n" + std::to_string(mark.nodes) + ".edges";
    std::ostringstream body;
    write_edge_list(body, g);
    write_text_file(dir / file, body.str());
    snapshot_entries.push_back(json{{"scheduled", mark.nodes},
                                    {"nodes", mark.nodes},
                                    {"edges", mark.edges},
                                    {"file", file}});
    std::fprintf(stderr, "generate: snapshot N=%zu L=%zu\n", mark.nodes,
                 mark.edges);
  };
  const GrowthTrace trace = grow(params, o.nodes, o.seed, schedule, options);

  json manifest;
  manifest["version"] = kVersion;
  manifest["command"] = "generate";
  manifest["config"] = meta.hash_hex();
  manifest["model"] = std::string(model_name(params));
  manifest["params"] = params_json(params);
  manifest["seed"] = o.seed;
  manifest["nodes"] = trace.graph.num_nodes();
  manifest["edges"] = trace.graph.num_edges();
  manifest["schedule"] = schedule.sizes;
  manifest["snapshots"] = snapshot_entries;
  if (o.no_trace) {
    std::ostringstream body;
    write_edge_list(body, trace.graph);
    write_text_file(dir / "stream.edges", body.str());
    manifest["stream"] = "stream.edges";
  } else {
    std::ostringstream body;
    write_trace(body, trace);
    write_text_file(dir / "trace.log", body.str());
    manifest["trace"] = "trace.log";
  }
  write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
  std::fprintf(stderr, "generate: wrote %s (N=%zu, L=%zu, %zu snapshots)\n",
               o.out_dir.c_str(), trace.graph.num_nodes(),
               trace.graph.num_edges(), trace.marks.size());
  return 0;
}

// ---- ingest ----

struct IngestOpts {
  std::string input;
  std::string out_dir;
  std::size_t n_min = 0;
  std::size_t n_max = 0;
  double factor = 1.1;
};

int cmd_ingest(const IngestOpts& o) {
  const std::string raw = read_text_file(o.input);
  std::istringstream in(raw);
  const TemporalEdgeList list = parse_temporal_edges(in);
  if (list.num_nodes() == 0) throw std::runtime_error("empty edge stream");
  const std::size_t n_max = o.n_max == 0
                                ? list.num_nodes()
                                : std::min(o.n_max, list.num_nodes());
  const SnapshotSchedule schedule = make_schedule(o.n_min, n_max, o.factor);

  RunMeta meta;
  meta.command = "ingest";
  meta.set("input", o.input);
  meta.set("n_min", std::to_string(o.n_min));
  meta.set("n_max", std::to_string(n_max));
  meta.set("factor", format_double(o.factor));

  const fs::path dir(o.out_dir);
  fs::create_directories(dir / "snapshots");

  json snapshot_entries = json::array();
  const SnapshotSeries series = build_cumulative_snapshots(
      list, schedule, [&](const Graph& g, const SnapshotStats& stats) {
        const std::string file =
            "snapshots/n" + std::to_string(stats.scheduled) + ".edges";
        std::ostringstream body;
        write_edge_list(body, g);
        write_text_file(dir / file, body.str());
        snapshot_entries.push_back(json{{"scheduled", stats.scheduled},
                                        {"nodes", stats.nodes},
                                        {"edges", stats.edges},
                                        {"file", file}});
        std::fprintf(stderr, "ingest: snapshot N=%zu L=%zu\n", stats.nodes,
                     stats.edges);
      });
  write_text_file(dir / "stream.edges", raw);

  json manifest;
  manifest["version"] = kVersion;
  manifest["command"] = "ingest";
  manifest["config"] = meta.hash_hex();
  manifest["input"] = o.input;
  manifest["nodes"] = list.num_nodes();
  manifest["self_loops"] = list.num_self_loops();
  manifest["schedule"] = schedule.sizes;
  manifest["snapshots"] = snapshot_entries;
  manifest["unreached"] = series.unreached;
  manifest["stream"] = "stream.edges";
  write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
  std::fprintf(stderr, "ingest: wrote %s (N=%zu, %zu snapshots)\n",
               o.out_dir.c_str(), list.num_nodes(),
               series.snapshots.size());
  return 0;
}

// ---- count ----

struct CountOpts {
  std::string input;
  std::string series;
  std::string out = "-";
  bool plot = false;
  CountFlags flags;
};

int cmd_count(const CountOpts& o) {
  if (o.input.empty() == o.series.empty())
    throw UsageError("pass exactly one of --input or --series");
  RunMeta meta;
  meta.command = "count";
  meta.set("input", o.input.empty() ? o.series : o.input);
  o.flags.record(meta);

  std::ostringstream body;
  if (!o.input.empty()) {
    const Graph g = load_edge_graph(o.input);
    write_profile_csv(body, count_cliques(g, o.flags.armed()));
  } else {
    for (const auto& profile :
         count_series_snapshots(load_series(o.series), o.flags))
      write_profile_csv(body, profile);
  }
  emit_output(o.out, meta.header() + body.str());
  maybe_emit_plot(o.plot, o.out, "count");
  return 0;
}

// ---- scaling ----

struct ScalingOpts {
  std::vector<std::string> series;
  std::uint64_t min_n = 100;
  std::string out = "-";
  bool plot = false;
  CountFlags flags;
};

int cmd_scaling(const ScalingOpts& o) {
  if (o.series.empty()) throw UsageError("pass at least one --series");
  RunMeta meta;
  meta.command = "scaling";
  for (const auto& dir : o.series) meta.set("series", dir);
  meta.set("min_n", std::to_string(o.min_n));
  o.flags.record(meta);

  std::vector<ExponentSpectrum> spectra;
  for (const auto& dir : o.series)
    spectra.push_back(exponent_spectrum(
        count_series_snapshots(load_series(dir), o.flags), o.min_n));

  std::ostringstream body;
  if (spectra.size() == 1)
    write_spectrum_csv(body, spectra.front());
  else
    write_aggregate_csv(body, aggregate_spectra(spectra));
  emit_output(o.out, meta.header() + body.str());
  maybe_emit_plot(o.plot, o.out, "spectrum");
  return 0;
}

// ---- envelope ----

struct EnvelopeOpts {
  std::string series;
  std::uint64_t min_n = 100;
  std::string out = "-";
  bool plot = false;
  CountFlags flags;
};

int cmd_envelope(const EnvelopeOpts& o) {
  RunMeta meta;
  meta.command = "envelope";
  meta.set("series", o.series);
  meta.set("min_n", std::to_string(o.min_n));
  o.flags.record(meta);

  const EnvelopeCurve curve = envelope_curve(
      count_series_snapshots(load_series(o.series), o.flags), o.min_n);
  std::string extra;
  if (curve.fitted)
    extra = "exponent=" + format_double(curve.fit.exponent) +
            " stderr=" + format_double(curve.fit.standard_error);
  std::ostringstream body;
  write_envelope_csv(body, curve);
  emit_output(o.out, meta.header(extra) + body.str());
  maybe_emit_plot(o.plot, o.out, "envelope");
  return 0;
}

// ---- measure ----

struct MeasureInput {
  std::string series;
  std::string input;
  std::size_t n_min = 0;
  std::size_t n_max = 0;
  double factor = 1.1;
};

// Event sources for pa and distance, with the analysis window schedule. A
// series with a trace yields its exact growth events; otherwise the temporal
// stream is replayed into empirical events.
struct EventData {
  std::vector<GrowthEvent> events;      // pa path
  bool from_trace = false;
  GrowthTrace trace;                    // valid when from_trace
  TemporalEdgeList list;                // valid when !from_trace
  SnapshotSchedule schedule;
};

EventData load_events(const MeasureInput& o, bool need_events) {
  if (o.series.empty() == o.input.empty())
    throw UsageError("pass exactly one of --series or --input");
  EventData data;
  std::size_t n_total = 0;
  SnapshotSchedule default_schedule;
  if (!o.series.empty()) {
    const SeriesInfo info = load_series(o.series);
    if (!info.trace_file.empty()) {
      data.trace = read_trace_file(info.dir / info.trace_file);
      data.from_trace = true;
      if (need_events) data.events = data.trace.events;
      n_total = data.trace.graph.num_nodes();
    } else if (!info.stream_file.empty()) {
      data.list = parse_stream_file(info.dir / info.stream_file);
      if (need_events) data.events = empirical_pa_events(data.list);
      n_total = data.list.num_nodes();
    } else {
      throw std::runtime_error("series has neither a trace nor a stream");
    }
    default_schedule = info.schedule;
  } else {
    data.list = parse_stream_file(o.input);
    if (need_events) data.events = empirical_pa_events(data.list);
    n_total = data.list.num_nodes();
    default_schedule = make_schedule(o.n_min, n_total, o.factor);
  }
  if (o.n_min != 0 || o.n_max != 0) {
    const std::size_t n_max =
        o.n_max == 0 ? n_total : std::min(o.n_max, n_total);
    data.schedule = make_schedule(o.n_min, n_max, o.factor);
  } else {
    data.schedule = default_schedule;
  }
  if (data.schedule.empty())
    throw std::runtime_error("empty analysis schedule");
  return data;
}

void record_input(RunMeta& meta, const MeasureInput& o) {
  meta.set("input", o.series.empty() ? o.input : o.series);
  meta.set("n_min", std::to_string(o.n_min));
  meta.set("n_max", std::to_string(o.n_max));
  meta.set("factor", format_double(o.factor));
}

struct MeasurePaOpts {
  MeasureInput in;
  std::string out = "-";
  bool plot = false;
};

int cmd_measure_pa(const MeasurePaOpts& o) {
  RunMeta meta;
  meta.command = "measure-pa";
  record_input(meta, o.in);

  const EventData data = load_events(o.in, true);
  const PaRatioSeries series = pa_ratio_series(data.events, data.schedule);
  const std::string extra =
      "ratio=" + format_double(series.mean_ratio) +
      " stderr=" + format_double(series.standard_error) +
      " events=" + std::to_string(series.total_events);
  std::ostringstream body;
  write_pa_csv(body, series);
  emit_output(o.out, meta.header(extra) + body.str());
  maybe_emit_plot(o.plot, o.out, "pa");
  return 0;
}

struct MeasureDistanceOpts {
  MeasureInput in;
  std::size_t null_samples = 1000;
  std::uint64_t null_seed = 0;
  std::uint32_t max_depth = 0;  // 0 = unbounded
  std::string out = "-";
  bool plot = false;
};

int cmd_measure_distance(const MeasureDistanceOpts& o) {
  RunMeta meta;
  meta.command = "measure-distance";
  record_input(meta, o.in);
  meta.set_seed(o.null_seed);
  meta.set("null_samples", std::to_string(o.null_samples));
  meta.set("max_depth", std::to_string(o.max_depth));

  const EventData data = load_events(o.in, false);
  DistanceOptions options;
  options.null_samples = o.null_samples;
  options.null_seed = o.null_seed;
  options.max_depth = o.max_depth == 0 ? Graph::kNoDepthCap : o.max_depth;
  const DistanceSeries series =
      data.from_trace ? distance_series(data.trace, data.schedule, options)
                      : distance_series(data.list, data.schedule, options);
  std::ostringstream body;
  write_distance_csv(body, series);
  emit_output(o.out, meta.header() + body.str());
  maybe_emit_plot(o.plot, o.out, "distance");
  return 0;
}

struct MeanCliqueOpts {
  std::string series;
  std::size_t k_min = 2;
  std::string out = "-";
  bool plot = false;
  CountFlags flags;
};

int cmd_measure_mean_clique(const MeanCliqueOpts& o) {
  RunMeta meta;
  meta.command = "measure-mean-clique";
  meta.set("series", o.series);
  meta.set("k_min", std::to_string(o.k_min));
  o.flags.record(meta);

  std::vector<std::pair<std::size_t, double>> rows;
  for (const auto& profile :
       count_series_snapshots(load_series(o.series), o.flags))
    rows.emplace_back(profile.nodes, mean_clique_size(profile, o.k_min));
  std::ostringstream body;
  write_mean_clique_csv(body, rows);
  emit_output(o.out, meta.header() + body.str());
  maybe_emit_plot(o.plot, o.out, "mean-clique");
  return 0;
}

// ---- fit ----

struct FitOpts {
  std::string data;
  std::string model;
  double grid = 0.05;
  std::size_t reals = 5;
  std::uint64_t seed = 0;
  double budget = 600.0;
  std::uint64_t cap = 1000000000000ull;
  std::size_t k_min = 2;
  bool reverse_kl = false;
  int threads = 0;
  std::string out = "-";
  std::string log;
};

ModelFamily parse_family(const std::string& name) {
  if (name == "lpam") return ModelFamily::lpam;
  if (name == "copy") return ModelFamily::copy;
  if (name == "forest_fire") return ModelFamily::forest_fire;
  throw UsageError("unknown model family '" + name +
                   "' (choose lpam, copy or forest_fire)");
}

int cmd_fit(const FitOpts& o) {
  const ModelFamily family = parse_family(o.model);
  if (!(o.grid > 0.0) || o.grid > 1.0)
    throw UsageError("--grid must be in (0, 1]");
  const double steps = 1.0 / o.grid;
  if (std::abs(steps - std::llround(steps)) > 1e-9 * steps)
    throw UsageError("--grid must divide [0, 1] evenly");
  if (o.reals == 0) throw UsageError("--reals must be positive");
  if (!(o.budget > 0.0)) throw UsageError("--budget must be positive");
  if (o.k_min != 1 && o.k_min != 2)
    throw UsageError("--k-min must be 1 or 2");

  RunMeta meta;
  meta.command = "fit";
  meta.set("data", o.data);
  meta.set("model", o.model);
  meta.set("grid", format_double(o.grid));
  meta.set("reals", std::to_string(o.reals));
  meta.set_seed(o.seed);
  meta.set("budget", format_double(o.budget));
  meta.set("cap", std::to_string(o.cap));
  meta.set("k_min", std::to_string(o.k_min));
  meta.set("kl", o.reverse_kl ? "reverse" : "forward");

  CountFlags empirical_flags;
  empirical_flags.threads = o.threads;
  const auto profiles =
      count_series_snapshots(load_series(o.data), empirical_flags);
  const EmpiricalSeries empirical = empirical_series(profiles, o.k_min);

  GridOptions options;
  options.step = o.grid;
  options.realizations = o.reals;
  options.master_seed = o.seed;
  options.score.k_min = o.k_min;
  options.score.budget_seconds = o.budget;
  options.score.clique_cap = uint128(o.cap);
  options.score.threads = o.threads > 0 ? o.threads : default_threads();
  options.score.reverse_kl = o.reverse_kl;
  options.on_point = [](const FitResult& fit, std::size_t idx,
                        std::size_t total) {
    std::fprintf(stderr,
                 "fit: point %zu/%zu mle=%g kl=%g scored=%zu discarded=%zu\n",
                 idx + 1, total, fit.mean_mle, fit.mean_kl,
                 fit.realizations_used,
                 fit.discarded_timeout + fit.discarded_cap);
  };

  const std::size_t axis =
      static_cast<std::size_t>(std::llround(1.0 / o.grid)) + 1;
  const std::size_t points =
      family_param_count(family) == 1 ? axis : axis * axis;
  std::fprintf(stderr, "fit: scheduled %zu realizations (%zu points x %zu)\n",
               points * o.reals, points, o.reals);

  const GridSearchResult result = grid_search(family, empirical, options);
  std::fprintf(stderr, "fit: scored %zu realizations, discarded %zu\n",
               result.scored_realizations, result.discarded_realizations);

  if (o.log.empty()) {
    for (const auto& line : result.discard_log)
      std::fprintf(stderr, "discard: %s\n", line.c_str());
  } else {
    std::string log_body;
    for (const auto& line : result.discard_log) log_body += line + "\n";
    write_text_file(o.log, log_body);
  }

  const std::string extra =
      "weights=normalized scheduled=" +
      std::to_string(result.scheduled_realizations) +
      " scored=" + std::to_string(result.scored_realizations) +
      " discarded=" + std::to_string(result.discarded_realizations);
  std::ostringstream body;
  write_fit_csv(body, result.results);
  emit_output(o.out, meta.header(extra) + body.str());
  return 0;
}

void add_count_flags(CLI::App* cmd, CountFlags& flags) {
  cmd->add_option("--max-k", flags.max_k,
                  "largest clique size to count (0 = all)");
  cmd->add_option("--threads", flags.threads,
                  "worker threads (0 = CLIQUESCALE_THREADS or hardware)");
  cmd->add_option("--budget", flags.budget,
                  "wall-clock seconds per counting call (0 = none)");
  cmd->add_option("--cap", flags.cap,
                  "abort a count past this many cliques (0 = none)");
}

void add_measure_input(CLI::App* cmd, MeasureInput& in) {
  cmd->add_option("--series", in.series, "series directory");
  cmd->add_option("--input", in.input, "temporal edge list file");
  cmd->add_option("--n-min", in.n_min,
                  "smallest analysis window (0 = series schedule)");
  cmd->add_option("--n-max", in.n_max, "largest analysis window (0 = all)");
  cmd->add_option("--factor", in.factor, "window spacing factor");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph growth and clique densification toolkit"};
  app.require_subcommand(1);
  std::function<int()> runner;

  GenerateOpts gen;
  auto* generate = app.add_subcommand(
      "generate", "grow a model graph and write a snapshot series");
  generate->add_option("--model", gen.model, "lpam, copy, forest_fire or ba")
      ->required();
  generate->add_option("--p", gen.p, "attach probability (lpam, copy)");
  generate->add_option("--r", gen.r, "preferential strength (lpam)");
  generate->add_option("--forward", gen.forward,
                       "forward burn probability (forest_fire)");
  generate->add_option("--backward", gen.backward,
                       "backward burn probability (forest_fire)");
  generate->add_option("--m", gen.m, "links per arrival (ba)");
  generate->add_option("--nodes", gen.nodes, "target node count")->required();
  generate->add_option("--seed", gen.seed, "rng seed");
  generate->add_option("--n-min", gen.n_min,
                       "smallest snapshot (0 = final only)");
  generate->add_option("--factor", gen.factor, "snapshot spacing factor");
  generate->add_option("--out", gen.out_dir, "output directory")->required();
  generate->add_flag("--no-trace", gen.no_trace,
                     "skip the event trace, write a plain edge stream");
  generate->callback([&] { runner = [&] { return cmd_generate(gen); }; });

  IngestOpts ing;
  auto* ingest = app.add_subcommand(
      "ingest", "replay a temporal edge list into a snapshot series");
  ingest->add_option("--input", ing.input, "temporal edge list file")
      ->required();
  ingest->add_option("--out", ing.out_dir, "output directory")->required();
  ingest->add_option("--n-min", ing.n_min,
                     "smallest snapshot (0 = final only)");
  ingest->add_option("--n-max", ing.n_max, "largest snapshot (0 = all)");
  ingest->add_option("--factor", ing.factor, "snapshot spacing factor");
  ingest->callback([&] { runner = [&] { return cmd_ingest(ing); }; });

  CountOpts cnt;
  auto* count = app.add_subcommand(
      "count", "exact clique counts for an edge list or snapshot series");
  count->add_option("--input", cnt.input, "edge list file");
  count->add_option("--series", cnt.series, "series directory");
  count->add_option("--out", cnt.out, "output CSV path (- = stdout)");
  count->add_flag("--plot", cnt.plot, "write a gnuplot script next to --out");
  add_count_flags(count, cnt.flags);
  count->callback([&] { runner = [&] { return cmd_count(cnt); }; });

  ScalingOpts sca;
  auto* scaling = app.add_subcommand(
      "scaling", "per-clique-size scaling exponents for snapshot series");
  scaling->add_option("--series", sca.series,
                      "series directory (repeat to aggregate)");
  scaling->add_option("--min-n", sca.min_n, "skip snapshots smaller than this");
  scaling->add_option("--out", sca.out, "output CSV path (- = stdout)");
  scaling->add_flag("--plot", sca.plot, "write a gnuplot script next to --out");
  add_count_flags(scaling, sca.flags);
  scaling->callback([&] { runner = [&] { return cmd_scaling(sca); }; });

  EnvelopeOpts env;
  auto* envelope = app.add_subcommand(
      "envelope", "densification envelope: max clique count per snapshot");
  envelope->add_option("--series", env.series, "series directory")->required();
  envelope->add_option("--min-n", env.min_n,
                       "skip snapshots smaller than this in the fit");
  envelope->add_option("--out", env.out, "output CSV path (- = stdout)");
  envelope->add_flag("--plot", env.plot,
                     "write a gnuplot script next to --out");
  add_count_flags(envelope, env.flags);
  envelope->callback([&] { runner = [&] { return cmd_envelope(env); }; });

  auto* measure = app.add_subcommand("measure", "growth-mechanism probes");
  measure->require_subcommand(1);

  MeasurePaOpts pa;
  auto* measure_pa = measure->add_subcommand(
      "pa", "preferential-attachment ratio across size windows");
  add_measure_input(measure_pa, pa.in);
  measure_pa->add_option("--out", pa.out, "output CSV path (- = stdout)");
  measure_pa->add_flag("--plot", pa.plot,
                       "write a gnuplot script next to --out");
  measure_pa->callback([&] { runner = [&] { return cmd_measure_pa(pa); }; });

  MeasureDistanceOpts dist;
  auto* measure_distance = measure->add_subcommand(
      "distance", "pre-connection pair distances against a random-pair null");
  add_measure_input(measure_distance, dist.in);
  measure_distance->add_option("--null-samples", dist.null_samples,
                               "random pairs per window");
  measure_distance->add_option("--null-seed", dist.null_seed,
                               "rng seed for the null sample");
  measure_distance->add_option("--max-depth", dist.max_depth,
                               "BFS depth cap (0 = unbounded)");
  measure_distance->add_option("--out", dist.out,
                               "output CSV path (- = stdout)");
  measure_distance->add_flag("--plot", dist.plot,
                             "write a gnuplot script next to --out");
  measure_distance->callback(
      [&] { runner = [&] { return cmd_measure_distance(dist); }; });

  MeanCliqueOpts mc;
  auto* mean_clique = measure->add_subcommand(
      "mean-clique", "mean clique size per snapshot");
  mean_clique->add_option("--series", mc.series, "series directory")
      ->required();
  mean_clique->add_option("--k-min", mc.k_min,
                          "smallest clique size included");
  mean_clique->add_option("--out", mc.out, "output CSV path (- = stdout)");
  mean_clique->add_flag("--plot", mc.plot,
                        "write a gnuplot script next to --out");
  add_count_flags(mean_clique, mc.flags);
  mean_clique->callback(
      [&] { runner = [&] { return cmd_measure_mean_clique(mc); }; });

  FitOpts fit;
  auto* fit_cmd = app.add_subcommand(
      "fit", "grid-search model parameters against a snapshot series");
  fit_cmd->add_option("--data", fit.data, "series directory")->required();
  fit_cmd->add_option("--model", fit.model, "lpam, copy or forest_fire")
      ->required();
  fit_cmd->add_option("--grid", fit.grid, "grid step over [0,1]");
  fit_cmd->add_option("--reals", fit.reals, "realizations per grid point");
  fit_cmd->add_option("--seed", fit.seed, "master rng seed");
  fit_cmd->add_option("--budget", fit.budget,
                      "wall-clock seconds per realization");
  fit_cmd->add_option("--cap", fit.cap,
                      "discard realizations past this many cliques (0 = none)");
  fit_cmd->add_option("--k-min", fit.k_min, "distribution support floor (1-2)");
  fit_cmd->add_flag("--reverse-kl", fit.reverse_kl,
                    "score KL(model || empirical) instead");
  fit_cmd->add_option("--threads", fit.threads,
                      "worker threads (0 = CLIQUESCALE_THREADS or hardware)");
  fit_cmd->add_option("--out", fit.out, "output CSV path (- = stdout)");
  fit_cmd->add_option("--log", fit.log,
                      "discard log file (default: stderr)");
  fit_cmd->callback([&] { runner = [&] { return cmd_fit(fit); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (!runner) return 2;
  try {
    return runner();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
