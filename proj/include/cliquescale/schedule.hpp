#pragma once

#include <cstddef>
#include <vector>

namespace cliquescale {

/// Strictly increasing node counts at which snapshots are taken.
struct SnapshotSchedule {
  std::vector<std::size_t> sizes;

  bool empty() const { return sizes.empty(); }
  std::size_t back() const { return sizes.back(); }
};

/// Geometric size ladder: sizes[0] = n_min, sizes[i+1] = ceil(sizes[i] * factor),
/// capped at n_max, with n_max always included. n_min == n_max yields a single
/// snapshot. Throws std::invalid_argument for n_min < 2, n_min > n_max, or
/// factor <= 1.
SnapshotSchedule log_spaced_sizes(std::size_t n_min, std::size_t n_max, double factor = 1.1);

}  // namespace cliquescale
