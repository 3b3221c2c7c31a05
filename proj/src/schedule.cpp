#include "cliquescale/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace cliquescale {

SnapshotSchedule log_spaced_sizes(std::size_t n_min, std::size_t n_max, double factor) {
  if (n_min < 2) throw std::invalid_argument("log_spaced_sizes: n_min must be >= 2");
  if (n_min > n_max) throw std::invalid_argument("log_spaced_sizes: n_min > n_max");
  if (!(factor > 1.0)) throw std::invalid_argument("log_spaced_sizes: factor must be > 1");

  SnapshotSchedule schedule;
  std::size_t n = n_min;
  while (n < n_max) {
    schedule.sizes.push_back(n);
    // the epsilon keeps exact integer products (e.g. 110 * 1.1) from
    // rounding up one step too far
    auto next = static_cast<std::size_t>(std::ceil(static_cast<double>(n) * factor - 1e-9));
    n = next > n ? next : n + 1;
  }
  schedule.sizes.push_back(n_max);
  return schedule;
}

}  // namespace cliquescale
