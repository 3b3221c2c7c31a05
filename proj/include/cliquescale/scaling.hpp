#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "cliquescale/cliques.hpp"
#include "cliquescale/growth.hpp"
#include "cliquescale/schedule.hpp"

namespace cliquescale {

struct PowerLawFit {
  double exponent = 0.0;  // slope of log10 value against log10 size
  double standard_error = 0.0;
  double intercept = 0.0;  // log10 value at size 1
  std::size_t n_points = 0;
};

/// Ordinary least squares on (log10 size, log10 value). Throws
/// std::invalid_argument for fewer than three points, nonpositive inputs,
/// mismatched lengths, or sizes without spread.
PowerLawFit fit_power_law(const std::vector<double>& sizes, const std::vector<double>& values);

struct SpectrumEntry {
  std::size_t k = 0;
  double exponent = 0.0;
  double standard_error = 0.0;
  double intercept = 0.0;
  std::size_t n_points = 0;
};

struct ExponentSpectrum {
  std::vector<SpectrumEntry> entries;  // ascending k, each fitted from >= 3 snapshots
};

/// One power-law fit per clique size k >= 2, over snapshots with a nonzero
/// count of k-cliques and at least min_n nodes. Sizes k with fewer than three
/// usable snapshots are omitted.
ExponentSpectrum exponent_spectrum(const std::vector<CliqueProfile>& series,
                                   std::uint64_t min_n = 100);

struct AggregateEntry {
  std::size_t k = 0;
  double mean_exponent = 0.0;
  double standard_error = 0.0;  // across realizations
  std::size_t realizations = 0;
};

struct AggregateSpectrum {
  std::vector<AggregateEntry> entries;
};

/// Per-k mean exponent with its standard error across per-seed spectra. A k
/// appears when at least one spectrum carries it.
AggregateSpectrum aggregate_spectra(const std::vector<ExponentSpectrum>& spectra);

struct EnvelopePoint {
  std::uint64_t nodes = 0;
  uint128 count = 0;
  std::size_t source_k = 0;  // smallest k attaining the maximum
};

struct EnvelopeCurve {
  std::vector<EnvelopePoint> points;  // snapshots with at least one edge
  PowerLawFit fit;                    // over points with nodes >= min_n
  bool fitted = false;                // false when fewer than three such points
};

/// Maximum clique count over k >= 2 per snapshot, with the power-law fit of
/// the resulting curve reported alongside.
EnvelopeCurve envelope_curve(const std::vector<CliqueProfile>& series, std::uint64_t min_n = 100);

/// Grows one realization, counting cliques at every snapshot with the given
/// budget options. CountAborted from a snapshot propagates to the caller.
std::vector<CliqueProfile> profile_series(const ModelParams& params, std::size_t n_target,
                                          std::uint64_t seed, const SnapshotSchedule& schedule,
                                          const CountOptions& count = {});

// k,exponent,stderr,intercept,n_points rows.
void write_spectrum_csv(std::ostream& out, const ExponentSpectrum& spectrum);

// k,exponent,stderr,realizations rows.
void write_aggregate_csv(std::ostream& out, const AggregateSpectrum& spectrum);

// N,envelope_count,source_k rows.
void write_envelope_csv(std::ostream& out, const EnvelopeCurve& curve);

}  // namespace cliquescale
