#include "cliquescale/cliques.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cassert>
#include <limits>
#include <ostream>
#include <thread>

namespace cliquescale {

namespace {

constexpr uint128 kU128Max = ~static_cast<uint128>(0);

// a += b, clamping at the 128-bit maximum
inline void saturating_add(uint128& a, uint128 b, bool& saturated) {
  if (a > kU128Max - b) {
    a = kU128Max;
    saturated = true;
  } else {
    a += b;
  }
}

std::vector<std::vector<uint128>> binomial_table(std::size_t n, bool& saturated) {
  std::vector<std::vector<uint128>> c(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    c[i].assign(i + 1, 0);
    c[i][0] = 1;
    for (std::size_t j = 1; j <= i; ++j) {
      c[i][j] = c[i - 1][j - 1];
      if (j < i) saturating_add(c[i][j], c[i - 1][j], saturated);
    }
  }
  return c;
}

// Per-root clique counting over the later-ordered neighborhood, done on a
// local bitset subgraph. Pivot branches accumulate optional vertices; hold
// branches fix them. A leaf with h held and q accumulated pivots contributes
// C(q, k-h) to counts[k].
class RootCounter {
 public:
  RootCounter(std::size_t max_k, const std::vector<std::vector<uint128>>& binom,
              const CountOptions& options)
      : max_k_(max_k), binom_(binom), options_(options) {}

  void resize(std::size_t size) {
    size_ = size;
    words_ = (size + 63) / 64;
    rows_.assign(size * words_, 0);
    scratch_.assign((size + 2) * 3 * words_, 0);
  }

  void set_adjacent(std::size_t i, std::size_t j) {
    rows_[i * words_ + j / 64] |= 1ull << (j % 64);
  }

  // counts[k] accumulates across calls; counts.size() must exceed size_ + 1
  void run(std::vector<uint128>& counts, bool& saturated) {
    counts_ = &counts;
    saturated_ = &saturated;
    std::uint64_t* cand = scratch_.data();
    for (std::size_t w = 0; w < words_; ++w) cand[w] = 0;
    for (std::size_t i = 0; i < size_; ++i) cand[i / 64] |= 1ull << (i % 64);
    recurse(cand, 1, 0, 1);
  }

 private:
  void leaf(std::size_t held, std::size_t pivots) {
    if ((++leaf_ticks_ & 0x3fff) == 0) check_budget();
    auto& counts = *counts_;
    const auto& row = binom_[pivots];
    std::size_t j_max = pivots;
    if (max_k_ != 0 && max_k_ - held < j_max) j_max = max_k_ - held;
    for (std::size_t j = 0; j <= j_max; ++j)
      saturating_add(counts[held + j], row[j], *saturated_);
  }

  void check_budget() const {
    if (options_.deadline && std::chrono::steady_clock::now() > *options_.deadline)
      throw CountAborted(CountAborted::Reason::timeout, "clique counting timed out");
    if (options_.total_cap != 0) {
      uint128 total = 0;
      const auto& counts = *counts_;
      for (std::size_t k = 2; k < counts.size(); ++k) total += counts[k];
      if (total > options_.total_cap)
        throw CountAborted(CountAborted::Reason::total_cap, "clique count cap exceeded");
    }
  }

  void recurse(const std::uint64_t* cand, std::size_t held, std::size_t pivots,
               std::size_t depth) {
    if (max_k_ != 0 && held > max_k_) return;

    std::size_t cand_count = 0;
    for (std::size_t w = 0; w < words_; ++w) cand_count += std::popcount(cand[w]);
    if (cand_count == 0) {
      leaf(held, pivots);
      return;
    }

    // pivot: maximum candidate-neighborhood intersection, lowest index on ties
    std::size_t pivot = 0;
    std::size_t best = 0;
    bool found = false;
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t bits = cand[w];
      while (bits) {
        const std::size_t u = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
        bits &= bits - 1;
        const std::uint64_t* nu = rows_.data() + u * words_;
        std::size_t inter = 0;
        for (std::size_t x = 0; x < words_; ++x) inter += std::popcount(cand[x] & nu[x]);
        if (!found || inter > best) {
          found = true;
          best = inter;
          pivot = u;
        }
      }
    }

    std::uint64_t* base = scratch_.data() + depth * 3 * words_;
    std::uint64_t* next = base;
    std::uint64_t* rest = base + words_;
    std::uint64_t* remaining = base + 2 * words_;
    const std::uint64_t* pivot_row = rows_.data() + pivot * words_;

    // pivot branch: the pivot becomes optional
    for (std::size_t w = 0; w < words_; ++w) next[w] = cand[w] & pivot_row[w];
    recurse(next, held, pivots + 1, depth + 1);

    // hold branches over candidates outside N[pivot], each removed from the
    // candidate set once processed
    for (std::size_t w = 0; w < words_; ++w) {
      rest[w] = cand[w] & ~pivot_row[w];
      remaining[w] = cand[w];
    }
    rest[pivot / 64] &= ~(1ull << (pivot % 64));

    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t bits = rest[w];
      while (bits) {
        const std::size_t v = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
        bits &= bits - 1;
        remaining[v / 64] &= ~(1ull << (v % 64));
        const std::uint64_t* nv = rows_.data() + v * words_;
        for (std::size_t x = 0; x < words_; ++x) next[x] = remaining[x] & nv[x];
        recurse(next, held + 1, pivots, depth + 1);
      }
    }
  }

  std::size_t size_ = 0;
  std::size_t words_ = 0;
  std::size_t max_k_;
  const std::vector<std::vector<uint128>>& binom_;
  const CountOptions& options_;
  std::vector<std::uint64_t> rows_;
  std::vector<std::uint64_t> scratch_;
  std::vector<uint128>* counts_ = nullptr;
  bool* saturated_ = nullptr;
  std::uint64_t leaf_ticks_ = 0;
};

}  // namespace

std::string u128_to_string(uint128 value) {
  if (value == 0) return "0";
  std::string digits;
  while (value > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<unsigned>(value % 10)));
    value /= 10;
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

DegeneracyOrder degeneracy_ordering(const Graph& g) {
  const std::size_t n = g.num_nodes();
  DegeneracyOrder result;
  result.order.reserve(n);
  if (n == 0) return result;

  // bucket queue over current degrees
  std::vector<std::size_t> deg(n);
  std::size_t max_deg = 0;
  for (std::size_t v = 0; v < n; ++v) {
    deg[v] = g.degree(static_cast<NodeId>(v));
    max_deg = std::max(max_deg, deg[v]);
  }
  std::vector<std::vector<NodeId>> buckets(max_deg + 1);
  std::vector<std::size_t> pos_in_bucket(n);
  for (std::size_t v = 0; v < n; ++v) {
    pos_in_bucket[v] = buckets[deg[v]].size();
    buckets[deg[v]].push_back(static_cast<NodeId>(v));
  }

  std::vector<bool> removed(n, false);
  std::size_t cursor = 0;
  for (std::size_t step = 0; step < n; ++step) {
    if (cursor > 0) --cursor;  // a removal can lower the minimum by one
    while (buckets[cursor].empty()) ++cursor;

    const NodeId v = buckets[cursor].back();
    buckets[cursor].pop_back();
    removed[v] = true;
    result.order.push_back(v);
    result.degeneracy = std::max(result.degeneracy, cursor);

    for (NodeId u : g.neighbors(v)) {
      if (removed[u]) continue;
      const std::size_t d = deg[u];
      auto& from = buckets[d];
      const std::size_t p = pos_in_bucket[u];
      from[p] = from.back();
      pos_in_bucket[from[p]] = p;
      from.pop_back();
      deg[u] = d - 1;
      pos_in_bucket[u] = buckets[d - 1].size();
      buckets[d - 1].push_back(u);
    }
  }
  return result;
}

CliqueProfile count_cliques(const Graph& g, const CountOptions& options) {
  const std::size_t n = g.num_nodes();
  CliqueProfile profile;
  profile.nodes = n;
  profile.edges = g.num_edges();
  if (n == 0) return profile;

  const DegeneracyOrder peel = degeneracy_ordering(g);
  const std::size_t d = peel.degeneracy;

  std::vector<std::uint32_t> rank(n);
  for (std::size_t i = 0; i < n; ++i) rank[peel.order[i]] = static_cast<std::uint32_t>(i);

  bool table_saturated = false;
  const auto binom = binomial_table(d + 1, table_saturated);

  const std::size_t k_slots = d + 3;
  const int threads = std::max(1, options.threads);

  std::atomic<std::size_t> next_root{0};
  std::atomic<bool> aborted{false};
  std::atomic<int> abort_reason{0};

  std::vector<std::vector<uint128>> partial(threads);
  std::vector<char> partial_saturated(threads, 0);

  auto worker = [&](int tid) {
    auto& counts = partial[tid];
    counts.assign(k_slots, 0);
    bool sat = table_saturated;
    RootCounter counter(options.max_k, binom, options);
    std::vector<NodeId> later;
    constexpr std::uint32_t kUnmapped = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> local_index(n, kUnmapped);

    try {
      for (;;) {
        const std::size_t root_idx = next_root.fetch_add(1, std::memory_order_relaxed);
        if (root_idx >= n || aborted.load(std::memory_order_relaxed)) break;
        const NodeId v = peel.order[root_idx];

        later.clear();
        for (NodeId u : g.neighbors(v))
          if (rank[u] > rank[v]) later.push_back(u);
        if (later.empty()) {
          saturating_add(counts[1], 1, sat);
          continue;
        }
        std::sort(later.begin(), later.end());  // lowest node id = lowest local index

        counter.resize(later.size());
        for (std::size_t i = 0; i < later.size(); ++i)
          local_index[later[i]] = static_cast<std::uint32_t>(i);
        for (std::size_t i = 0; i < later.size(); ++i) {
          for (NodeId w : g.neighbors(later[i])) {
            const std::uint32_t j = local_index[w];
            if (j != kUnmapped && j != i) counter.set_adjacent(i, j);
          }
        }
        counter.run(counts, sat);
        for (NodeId u : later) local_index[u] = kUnmapped;

        if (options.total_cap != 0) {
          uint128 running_total = 0;
          for (std::size_t k = 2; k < counts.size(); ++k) running_total += counts[k];
          if (running_total > options.total_cap)
            throw CountAborted(CountAborted::Reason::total_cap, "clique count cap exceeded");
        }
        if (options.deadline && std::chrono::steady_clock::now() > *options.deadline)
          throw CountAborted(CountAborted::Reason::timeout, "clique counting timed out");
      }
    } catch (const CountAborted& e) {
      aborted.store(true, std::memory_order_relaxed);
      abort_reason.store(e.reason == CountAborted::Reason::timeout ? 1 : 2,
                         std::memory_order_relaxed);
    }
    partial_saturated[tid] = sat ? 1 : 0;
  };

  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& t : pool) t.join();
  }

  if (aborted.load()) {
    if (abort_reason.load() == 1)
      throw CountAborted(CountAborted::Reason::timeout, "clique counting timed out");
    throw CountAborted(CountAborted::Reason::total_cap, "clique count cap exceeded");
  }

  std::vector<uint128> merged(k_slots, 0);
  bool saturated = false;
  for (int t = 0; t < threads; ++t) {
    if (partial[t].empty()) continue;
    if (partial_saturated[t]) saturated = true;
    for (std::size_t k = 0; k < k_slots; ++k) saturating_add(merged[k], partial[t][k], saturated);
  }

  std::size_t top = 0;
  for (std::size_t k = 0; k < merged.size(); ++k)
    if (merged[k] != 0) top = k;
  merged.resize(top + 1);
  profile.counts = std::move(merged);
  profile.saturated = saturated;

  assert(profile.count(1) == profile.nodes);
  assert(options.max_k != 0 || profile.saturated || profile.count(2) == profile.edges);
  return profile;
}

CliqueProfile brute_force_cliques(const Graph& g) {
  const std::size_t n = g.num_nodes();
  if (n > 30) throw std::invalid_argument("brute_force_cliques: graph too large (n > 30)");

  CliqueProfile profile;
  profile.nodes = n;
  profile.edges = g.num_edges();
  if (n == 0) return profile;

  std::vector<uint128> counts(n + 1, 0);
  std::size_t top = 1;

  // ordered extension: every clique is visited exactly once with its members
  // in increasing id order
  struct Frame {
    std::vector<NodeId> ext;  // candidates adjacent to all members, all larger
    std::size_t next = 0;
  };
  std::vector<NodeId> members;
  std::vector<Frame> frames;

  for (NodeId v = 0; v < n; ++v) {
    members.assign(1, v);
    counts[1] += 1;
    Frame root;
    for (NodeId u : g.neighbors(v))
      if (u > v) root.ext.push_back(u);
    std::sort(root.ext.begin(), root.ext.end());
    frames.clear();
    frames.push_back(std::move(root));
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.next >= f.ext.size()) {
        frames.pop_back();
        if (!frames.empty()) members.pop_back();
        continue;
      }
      const NodeId u = f.ext[f.next++];
      members.push_back(u);
      counts[members.size()] += 1;
      top = std::max(top, members.size());
      Frame child;
      for (std::size_t i = f.next; i < f.ext.size(); ++i)
        if (g.has_edge(u, f.ext[i])) child.ext.push_back(f.ext[i]);
      frames.push_back(std::move(child));
    }
  }

  counts.resize(top + 1);
  profile.counts = std::move(counts);
  return profile;
}

void write_profile_csv(std::ostream& out, const CliqueProfile& profile) {
  for (std::size_t k = 2; k < profile.counts.size(); ++k) {
    if (profile.counts[k] == 0) continue;
    out << profile.nodes << ',' << profile.edges << ',' << k << ','
        << u128_to_string(profile.counts[k]) << '\n';
  }
}

}  // namespace cliquescale
