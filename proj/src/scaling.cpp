#include "cliquescale/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

namespace cliquescale {

namespace {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace

PowerLawFit fit_power_law(const std::vector<double>& sizes, const std::vector<double>& values) {
  if (sizes.size() != values.size()) throw std::invalid_argument("mismatched point lists");
  const std::size_t n = sizes.size();
  if (n < 3) throw std::invalid_argument("need at least three points");

  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(sizes[i] > 0.0) || !(values[i] > 0.0))
      throw std::invalid_argument("sizes and values must be positive");
    x[i] = std::log10(sizes[i]);
    y[i] = std::log10(values[i]);
  }

  double x_mean = 0.0, y_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x_mean += x[i];
    y_mean += y[i];
  }
  x_mean /= static_cast<double>(n);
  y_mean /= static_cast<double>(n);

  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - x_mean) * (x[i] - x_mean);
    sxy += (x[i] - x_mean) * (y[i] - y_mean);
  }
  if (sxx <= 0.0) throw std::invalid_argument("sizes carry no spread");

  PowerLawFit fit;
  fit.n_points = n;
  fit.exponent = sxy / sxx;
  fit.intercept = y_mean - fit.exponent * x_mean;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.exponent * x[i]);
    sse += r * r;
  }
  const double var = sse / static_cast<double>(n - 2) / sxx;
  fit.standard_error = var > 0.0 ? std::sqrt(var) : 0.0;
  return fit;
}

ExponentSpectrum exponent_spectrum(const std::vector<CliqueProfile>& series,
                                   std::uint64_t min_n) {
  std::size_t max_k = 0;
  for (const CliqueProfile& profile : series) max_k = std::max(max_k, profile.max_clique());

  ExponentSpectrum spectrum;
  std::vector<double> sizes, values;
  for (std::size_t k = 2; k <= max_k; ++k) {
    sizes.clear();
    values.clear();
    for (const CliqueProfile& profile : series) {
      if (profile.nodes < min_n || profile.count(k) == 0) continue;
      sizes.push_back(static_cast<double>(profile.nodes));
      values.push_back(static_cast<double>(profile.count(k)));
    }
    if (sizes.size() < 3) continue;
    const PowerLawFit fit = fit_power_law(sizes, values);
    spectrum.entries.push_back({k, fit.exponent, fit.standard_error, fit.intercept, fit.n_points});
  }
  return spectrum;
}

AggregateSpectrum aggregate_spectra(const std::vector<ExponentSpectrum>& spectra) {
  std::map<std::size_t, std::vector<double>> by_k;
  for (const ExponentSpectrum& spectrum : spectra)
    for (const SpectrumEntry& entry : spectrum.entries) by_k[entry.k].push_back(entry.exponent);

  AggregateSpectrum aggregate;
  for (const auto& [k, exponents] : by_k) {
    const double n = static_cast<double>(exponents.size());
    double mean = 0.0;
    for (const double e : exponents) mean += e;
    mean /= n;
    double se = 0.0;
    if (exponents.size() >= 2) {
      double ss = 0.0;
      for (const double e : exponents) ss += (e - mean) * (e - mean);
      se = std::sqrt(ss / (n - 1.0) / n);
    }
    aggregate.entries.push_back({k, mean, se, exponents.size()});
  }
  return aggregate;
}

EnvelopeCurve envelope_curve(const std::vector<CliqueProfile>& series, std::uint64_t min_n) {
  EnvelopeCurve curve;
  std::vector<double> sizes, values;
  for (const CliqueProfile& profile : series) {
    uint128 best = 0;
    std::size_t best_k = 0;
    for (std::size_t k = 2; k < profile.counts.size(); ++k) {
      if (profile.counts[k] > best) {
        best = profile.counts[k];
        best_k = k;
      }
    }
    if (best == 0) continue;
    curve.points.push_back({profile.nodes, best, best_k});
    if (profile.nodes >= min_n) {
      sizes.push_back(static_cast<double>(profile.nodes));
      values.push_back(static_cast<double>(best));
    }
  }
  if (sizes.size() >= 3) {
    curve.fit = fit_power_law(sizes, values);
    curve.fitted = true;
  }
  return curve;
}

std::vector<CliqueProfile> profile_series(const ModelParams& params, std::size_t n_target,
                                          std::uint64_t seed, const SnapshotSchedule& schedule,
                                          const CountOptions& count) {
  std::vector<CliqueProfile> series;
  GrowOptions options;
  options.record_events = false;
  options.on_snapshot = [&](const Graph& g, const SnapshotMark&) {
    series.push_back(count_cliques(g, count));
  };
  grow(params, n_target, seed, schedule, options);
  return series;
}

void write_spectrum_csv(std::ostream& out, const ExponentSpectrum& spectrum) {
  for (const SpectrumEntry& e : spectrum.entries)
    out << e.k << ',' << format_double(e.exponent) << ',' << format_double(e.standard_error)
        << ',' << format_double(e.intercept) << ',' << e.n_points << '\n';
}

void write_aggregate_csv(std::ostream& out, const AggregateSpectrum& spectrum) {
  for (const AggregateEntry& e : spectrum.entries)
    out << e.k << ',' << format_double(e.mean_exponent) << ','
        << format_double(e.standard_error) << ',' << e.realizations << '\n';
}

void write_envelope_csv(std::ostream& out, const EnvelopeCurve& curve) {
  for (const EnvelopePoint& p : curve.points)
    out << p.nodes << ',' << u128_to_string(p.count) << ',' << p.source_k << '\n';
}

}  // namespace cliquescale
