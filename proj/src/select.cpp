#include "cliquescale/select.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <variant>

#include "cliquescale/rng.hpp"
#include "cliquescale/schedule.hpp"

namespace cliquescale {

namespace {

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

// Masses over [k_lo, k_hi] with zero categories lifted to epsilon, then
// renormalized. No-op when every category is already positive.
std::vector<double> smoothed_masses(const CliqueSizeDistribution& d,
                                    std::size_t k_lo, std::size_t k_hi,
                                    double epsilon) {
  std::vector<double> mass(k_hi - k_lo + 1);
  std::size_t zeros = 0;
  for (std::size_t k = k_lo; k <= k_hi; ++k) {
    double m = d.mass_of(k);
    if (m == 0.0) {
      m = epsilon;
      ++zeros;
    }
    mass[k - k_lo] = m;
  }
  if (zeros > 0) {
    const double norm = 1.0 + static_cast<double>(zeros) * epsilon;
    for (double& m : mass) m /= norm;
  }
  return mass;
}

void union_support(const CliqueSizeDistribution& a,
                   const CliqueSizeDistribution& b, std::size_t& k_lo,
                   std::size_t& k_hi) {
  if (a.mass.empty() || b.mass.empty())
    throw std::invalid_argument("empty clique size distribution");
  k_lo = std::min(a.k_min, b.k_min);
  k_hi = std::max(a.max_k(), b.max_k());
}

struct RealizationRun {
  std::vector<CliqueProfile> profiles;  // snapshots completed before any abort
  bool aborted = false;
  CountAborted::Reason reason = CountAborted::Reason::timeout;
};

RealizationRun run_realization(const ModelParams& params,
                               const SnapshotSchedule& schedule,
                               std::uint64_t seed,
                               const ScoreOptions& options) {
  CountOptions count;
  count.threads = options.threads;
  count.total_cap = options.clique_cap;
  count.deadline =
      std::chrono::steady_clock::now() +
      std::chrono::duration_cast<std::chrono::steady_clock::duration>(
          std::chrono::duration<double>(options.budget_seconds));
  RealizationRun run;
  GrowOptions grow_options;
  grow_options.record_events = false;
  grow_options.on_snapshot = [&](const Graph& g, const SnapshotMark&) {
    run.profiles.push_back(count_cliques(g, count));
  };
  try {
    grow(params, schedule.sizes.back(), seed, schedule, grow_options);
  } catch (const CountAborted& abort) {
    run.aborted = true;
    run.reason = abort.reason;
  }
  return run;
}

struct ParamFields {
  std::string name;
  std::string param1;
  std::string param2;  // empty for one-parameter models
};

ParamFields param_fields(const ModelParams& params) {
  ParamFields fields;
  fields.name = model_name(params);
  if (const auto* lpam = std::get_if<LpamParams>(&params)) {
    fields.param1 = format_double(lpam->p);
    fields.param2 = format_double(lpam->r);
  } else if (const auto* copy = std::get_if<CopyParams>(&params)) {
    fields.param1 = format_double(copy->p);
  } else if (const auto* ff = std::get_if<ForestFireParams>(&params)) {
    fields.param1 = format_double(ff->forward);
    fields.param2 = format_double(ff->backward);
  } else {
    fields.param1 = std::to_string(std::get<BaParams>(params).m);
  }
  return fields;
}

const char* reason_name(CountAborted::Reason reason) {
  return reason == CountAborted::Reason::timeout ? "timeout" : "clique_cap";
}

}  // namespace

CliqueSizeDistribution clique_size_distribution(const CliqueProfile& profile,
                                                std::size_t k_min,
                                                double epsilon) {
  if (k_min < 1) throw std::invalid_argument("k_min must be at least 1");
  std::size_t k_max = 0;
  for (std::size_t k = profile.counts.size(); k-- > k_min;) {
    if (profile.counts[k] != 0) {
      k_max = k;
      break;
    }
  }
  if (k_max == 0)
    throw std::invalid_argument("profile has no cliques of size >= k_min");
  long double total = 0.0L;
  for (std::size_t k = k_min; k <= k_max; ++k)
    total += static_cast<long double>(profile.counts[k]);
  CliqueSizeDistribution d;
  d.k_min = k_min;
  d.mass.resize(k_max - k_min + 1);
  for (std::size_t k = k_min; k <= k_max; ++k)
    d.mass[k - k_min] = static_cast<double>(
        static_cast<long double>(profile.counts[k]) / total);
  d.mass = smoothed_masses(d, k_min, k_max, epsilon);
  return d;
}

CliqueSizeDistribution average_distributions(
    const std::vector<CliqueSizeDistribution>& parts) {
  if (parts.empty())
    throw std::invalid_argument("no distributions to average");
  std::size_t k_lo = parts.front().k_min;
  std::size_t k_hi = parts.front().max_k();
  for (const auto& part : parts) {
    if (part.mass.empty())
      throw std::invalid_argument("empty clique size distribution");
    k_lo = std::min(k_lo, part.k_min);
    k_hi = std::max(k_hi, part.max_k());
  }
  CliqueSizeDistribution mean;
  mean.k_min = k_lo;
  mean.mass.assign(k_hi - k_lo + 1, 0.0);
  for (const auto& part : parts)
    for (std::size_t k = k_lo; k <= k_hi; ++k)
      mean.mass[k - k_lo] += part.mass_of(k);
  for (double& m : mean.mass) m /= static_cast<double>(parts.size());
  return mean;
}

double cross_entropy_score(const CliqueSizeDistribution& weights,
                           const CliqueSizeDistribution& model,
                           double epsilon) {
  std::size_t k_lo = 0, k_hi = 0;
  union_support(weights, model, k_lo, k_hi);
  const auto q = smoothed_masses(model, k_lo, k_hi, epsilon);
  double score = 0.0;
  for (std::size_t k = weights.k_min; k <= weights.max_k(); ++k) {
    const double w = weights.mass_of(k);
    if (w > 0.0) score += w * std::log(q[k - k_lo]);
  }
  return score;
}

double kl_divergence(const CliqueSizeDistribution& p,
                     const CliqueSizeDistribution& q, double epsilon) {
  std::size_t k_lo = 0, k_hi = 0;
  union_support(p, q, k_lo, k_hi);
  const auto ps = smoothed_masses(p, k_lo, k_hi, epsilon);
  const auto qs = smoothed_masses(q, k_lo, k_hi, epsilon);
  double sum = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i)
    sum += ps[i] * std::log(ps[i] / qs[i]);
  return std::max(sum, 0.0);
}

EmpiricalSeries empirical_series(const std::vector<CliqueProfile>& profiles,
                                 std::size_t k_min, double epsilon) {
  EmpiricalSeries series;
  series.reserve(profiles.size());
  for (const auto& profile : profiles) {
    if (!series.empty() && profile.nodes <= series.back().nodes)
      throw std::invalid_argument(
          "snapshot node counts must be strictly increasing");
    series.push_back(
        {profile.nodes, clique_size_distribution(profile, k_min, epsilon)});
  }
  return series;
}

std::size_t ModelScore::discarded(CountAborted::Reason reason) const {
  std::size_t n = 0;
  for (const auto& record : discards)
    if (record.reason == reason) ++n;
  return n;
}

ModelScore score_model(const EmpiricalSeries& empirical,
                       const ModelParams& params, std::size_t n_realizations,
                       std::uint64_t seed, const ScoreOptions& options) {
  if (empirical.size() < 2)
    throw std::invalid_argument("need at least two empirical snapshots");
  if (n_realizations == 0)
    throw std::invalid_argument("need at least one realization");
  validate_params(params);
  SnapshotSchedule schedule;
  std::uint64_t prev = 1;
  for (const auto& snapshot : empirical) {
    if (snapshot.nodes < 2 || snapshot.nodes <= prev)
      throw std::invalid_argument(
          "snapshot node counts must be strictly increasing and at least 2");
    prev = snapshot.nodes;
    schedule.sizes.push_back(snapshot.nodes);
  }

  std::vector<std::vector<CliqueSizeDistribution>> realized(empirical.size());
  ModelScore score;
  for (std::size_t r = 0; r < n_realizations; ++r) {
    const auto run =
        run_realization(params, schedule, derive_seed(seed, r), options);
    for (std::size_t t = 0; t < run.profiles.size(); ++t)
      realized[t].push_back(
          clique_size_distribution(run.profiles[t], options.k_min,
                                   options.epsilon));
    if (run.aborted)
      score.discards.push_back({r, run.reason});
    else
      ++score.realizations_used;
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  score.per_snapshot_mle.assign(empirical.size(), nan);
  score.per_snapshot_kl.assign(empirical.size(), nan);
  double sum_mle = 0.0, sum_kl = 0.0;
  for (std::size_t t = 0; t < empirical.size(); ++t) {
    if (realized[t].empty()) {
      ++score.snapshots_skipped;
      std::fprintf(stderr,
                   "warning: snapshot N=%llu skipped, every realization was "
                   "discarded before reaching it\n",
                   static_cast<unsigned long long>(empirical[t].nodes));
      continue;
    }
    const auto q = average_distributions(realized[t]);
    const auto& w = empirical[t].distribution;
    const double mle = cross_entropy_score(w, q, options.epsilon);
    const double kl = options.reverse_kl
                          ? kl_divergence(q, w, options.epsilon)
                          : kl_divergence(w, q, options.epsilon);
    score.per_snapshot_mle[t] = mle;
    score.per_snapshot_kl[t] = kl;
    sum_mle += mle;
    sum_kl += kl;
    ++score.snapshots_scored;
  }
  if (score.snapshots_scored > 0) {
    score.mean_mle = sum_mle / static_cast<double>(score.snapshots_scored);
    score.mean_kl = sum_kl / static_cast<double>(score.snapshots_scored);
  } else {
    score.mean_mle = -std::numeric_limits<double>::infinity();
    score.mean_kl = std::numeric_limits<double>::infinity();
  }
  return score;
}

double mean_mle(const EmpiricalSeries& empirical, const ModelParams& params,
                std::size_t n_realizations, std::uint64_t seed,
                const ScoreOptions& options) {
  const auto score =
      score_model(empirical, params, n_realizations, seed, options);
  if (score.snapshots_scored == 0)
    throw std::runtime_error("every snapshot was skipped");
  return score.mean_mle;
}

double mean_kl(const EmpiricalSeries& empirical, const ModelParams& params,
               std::size_t n_realizations, std::uint64_t seed,
               const ScoreOptions& options) {
  const auto score =
      score_model(empirical, params, n_realizations, seed, options);
  if (score.snapshots_scored == 0)
    throw std::runtime_error("every snapshot was skipped");
  return score.mean_kl;
}

const char* family_name(ModelFamily family) {
  switch (family) {
    case ModelFamily::lpam:
      return "lpam";
    case ModelFamily::copy:
      return "copy";
    default:
      return "forest_fire";
  }
}

std::size_t family_param_count(ModelFamily family) {
  return family == ModelFamily::copy ? 1 : 2;
}

GridSearchResult grid_search(ModelFamily family,
                             const EmpiricalSeries& empirical,
                             const GridOptions& options) {
  if (!(options.step > 0.0) || options.step > 1.0)
    throw std::invalid_argument("step must be in (0, 1]");
  const double inv = 1.0 / options.step;
  const auto n_steps = static_cast<std::size_t>(std::llround(inv));
  if (n_steps == 0 || std::fabs(inv - static_cast<double>(n_steps)) > 1e-9 * inv)
    throw std::invalid_argument("step must divide [0, 1] evenly");
  if (options.realizations == 0)
    throw std::invalid_argument("need at least one realization per point");
  if (!(options.score.budget_seconds > 0.0))
    throw std::invalid_argument("budget must be positive");

  std::vector<ModelParams> points;
  const auto axis = [n_steps](std::size_t i) {
    return static_cast<double>(i) / static_cast<double>(n_steps);
  };
  if (family == ModelFamily::copy) {
    for (std::size_t i = 0; i <= n_steps; ++i)
      points.push_back(CopyParams{axis(i)});
  } else {
    for (std::size_t i = 0; i <= n_steps; ++i)
      for (std::size_t j = 0; j <= n_steps; ++j) {
        if (family == ModelFamily::lpam)
          points.push_back(LpamParams{axis(i), axis(j)});
        else
          points.push_back(ForestFireParams{axis(i), axis(j)});
      }
  }

  GridSearchResult result;
  result.scheduled_realizations = points.size() * options.realizations;
  result.results.reserve(points.size());
  for (std::size_t idx = 0; idx < points.size(); ++idx) {
    const auto& params = points[idx];
    const auto score =
        score_model(empirical, params, options.realizations,
                    derive_seed(options.master_seed, idx), options.score);
    FitResult fit;
    fit.params = params;
    fit.mean_mle = score.mean_mle;
    fit.mean_kl = score.mean_kl;
    fit.per_snapshot_mle = score.per_snapshot_mle;
    fit.realizations_used = score.realizations_used;
    fit.discarded_timeout = score.discarded(CountAborted::Reason::timeout);
    fit.discarded_cap = score.discarded(CountAborted::Reason::total_cap);
    result.scored_realizations += score.realizations_used;
    result.discarded_realizations += score.discards.size();
    const auto fields = param_fields(params);
    for (const auto& record : score.discards)
      result.discard_log.push_back(fields.name + "," + fields.param1 + "," +
                                   fields.param2 + "," +
                                   std::to_string(record.realization) + "," +
                                   reason_name(record.reason));
    result.results.push_back(std::move(fit));
    if (options.on_point)
      options.on_point(result.results.back(), idx, points.size());
  }
  std::stable_sort(result.results.begin(), result.results.end(),
                   [](const FitResult& a, const FitResult& b) {
                     return a.mean_mle > b.mean_mle;
                   });
  return result;
}

void write_fit_csv(std::ostream& out, const std::vector<FitResult>& results) {
  for (const auto& fit : results) {
    const auto fields = param_fields(fit.params);
    out << fields.name << ',' << fields.param1 << ',' << fields.param2 << ','
        << format_double(fit.mean_mle) << ',' << format_double(fit.mean_kl)
        << ',' << fit.realizations_used << ','
        << (fit.discarded_timeout + fit.discarded_cap) << '\n';
  }
}

}  // namespace cliquescale
