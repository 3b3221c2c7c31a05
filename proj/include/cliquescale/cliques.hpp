#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cliquescale/graph.hpp"

namespace cliquescale {

/// Clique counts overflow 64 bits on modest graphs, so counts are kept in
/// saturating 128-bit integers. A saturated profile is flagged rather than
/// silently wrapped.
using uint128 = unsigned __int128;

std::string u128_to_string(uint128 value);

/// Exact number of k-cliques for every k, alongside the node and edge counts
/// of the graph it was taken from.
struct CliqueProfile {
  std::uint64_t nodes = 0;
  std::uint64_t edges = 0;
  std::vector<uint128> counts;  // counts[k]; index 0 unused
  bool saturated = false;

  uint128 count(std::size_t k) const { return k < counts.size() ? counts[k] : 0; }
  std::size_t max_clique() const { return counts.empty() ? 0 : counts.size() - 1; }
  uint128 total(std::size_t k_min) const {
    uint128 sum = 0;
    for (std::size_t k = k_min; k < counts.size(); ++k) sum += counts[k];
    return sum;
  }
};

struct DegeneracyOrder {
  std::vector<NodeId> order;  // removal order by repeated minimum degree
  std::size_t degeneracy = 0;
};

DegeneracyOrder degeneracy_ordering(const Graph& g);

/// Thrown when a counting budget is exceeded.
struct CountAborted : std::runtime_error {
  enum class Reason { timeout, total_cap };
  CountAborted(Reason r, const char* what) : std::runtime_error(what), reason(r) {}
  Reason reason;
};

struct CountOptions {
  std::size_t max_k = 0;  // 0 = uncapped
  int threads = 1;
  /// Abort with CountAborted once the wall clock passes this point.
  std::optional<std::chrono::steady_clock::time_point> deadline;
  /// Abort once the running total clique count (k >= 2) exceeds this. 0 = off.
  uint128 total_cap = 0;
};

/// Exact per-size clique counts via degeneracy ordering and pivoting.
/// Read-only on the graph; safe to call concurrently on an immutable graph.
CliqueProfile count_cliques(const Graph& g, const CountOptions& options = {});

/// Independent enumeration oracle: walks every clique once by ordered
/// extension, no pivoting and no binomials. Guarded to n <= 30.
CliqueProfile brute_force_cliques(const Graph& g);

void write_profile_csv(std::ostream& out, const CliqueProfile& profile);

}  // namespace cliquescale
