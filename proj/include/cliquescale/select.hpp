#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "cliquescale/cliques.hpp"
#include "cliquescale/growth.hpp"

namespace cliquescale {

/// Probability masses of clique sizes k_min, k_min+1, ... in a counted graph.
struct CliqueSizeDistribution {
  std::size_t k_min = 2;
  std::vector<double> mass;  // mass[i] is the probability of size k_min + i

  double mass_of(std::size_t k) const {
    if (k < k_min || k - k_min >= mass.size()) return 0.0;
    return mass[k - k_min];
  }
  // requires a nonempty mass vector
  std::size_t max_k() const { return k_min + mass.size() - 1; }
};

/// Normalized clique-size masses for sizes >= k_min. Zero-mass categories
/// inside the support are lifted to epsilon and the result renormalized, so
/// every stored mass is positive and the total is 1.
/// Throws std::invalid_argument when the profile has no cliques of size
/// >= k_min.
CliqueSizeDistribution clique_size_distribution(const CliqueProfile& profile,
                                                std::size_t k_min = 2,
                                                double epsilon = 1e-10);

/// Pointwise mean of several distributions over their union support.
/// Throws std::invalid_argument on an empty input.
CliqueSizeDistribution average_distributions(
    const std::vector<CliqueSizeDistribution>& parts);

/// Sum over the weight distribution's support of w(k) * ln q~(k), where q~ is
/// the model distribution smoothed over the union support: zero categories
/// are lifted to epsilon and the masses renormalized. By the Gibbs
/// inequality the score is maximized, over candidates q that include w
/// itself, by q = w, where it equals minus the entropy of w.
double cross_entropy_score(const CliqueSizeDistribution& weights,
                           const CliqueSizeDistribution& model,
                           double epsilon = 1e-10);

/// KL divergence sum p~(k) * ln(p~(k) / q~(k)) with both sides smoothed over
/// the union support. Nonnegative; zero exactly when the inputs are equal.
double kl_divergence(const CliqueSizeDistribution& p,
                     const CliqueSizeDistribution& q, double epsilon = 1e-10);

/// One empirical snapshot: the graph's node count and its clique-size
/// distribution.
struct EmpiricalSnapshot {
  std::uint64_t nodes = 0;
  CliqueSizeDistribution distribution;
};

using EmpiricalSeries = std::vector<EmpiricalSnapshot>;

/// Distributions for a series of counted snapshots, in the given order.
/// Throws std::invalid_argument when node counts are not strictly increasing
/// or a profile is empty above k_min.
EmpiricalSeries empirical_series(const std::vector<CliqueProfile>& profiles,
                                 std::size_t k_min = 2,
                                 double epsilon = 1e-10);

struct ScoreOptions {
  std::size_t k_min = 2;
  double epsilon = 1e-10;
  /// Wall-clock budget per model realization, growth plus counting.
  double budget_seconds = 600.0;
  /// Per-snapshot total clique count (k >= 2) beyond which a realization is
  /// discarded. 0 = off.
  uint128 clique_cap = uint128(1000000000000ull);
  int threads = 1;
  /// Score KL(model || empirical) instead of KL(empirical || model).
  bool reverse_kl = false;
};

struct DiscardRecord {
  std::size_t realization = 0;
  CountAborted::Reason reason = CountAborted::Reason::timeout;
};

/// Scores for one parameter set against an empirical series.
struct ModelScore {
  double mean_mle = 0.0;
  double mean_kl = 0.0;
  /// Per empirical snapshot, NaN where the snapshot was skipped.
  std::vector<double> per_snapshot_mle;
  std::vector<double> per_snapshot_kl;
  std::size_t snapshots_scored = 0;
  std::size_t snapshots_skipped = 0;
  /// Realizations that completed every snapshot.
  std::size_t realizations_used = 0;
  std::vector<DiscardRecord> discards;

  std::size_t discarded(CountAborted::Reason reason) const;
};

/// Grows n_realizations of the model, snapshotting at every empirical node
/// count, and scores the realization-averaged model distribution q_t against
/// the empirical masses w_t: MeanMLE = mean over snapshots of
/// sum_k w_t(k) ln q_t(k), and mean KL likewise. Realization r uses seed
/// derive_seed(seed, r). A realization that exceeds the budget or the clique
/// cap is discarded from that point on; its completed snapshots still count.
/// Snapshots no realization reached are skipped with a warning on stderr;
/// with every snapshot skipped, mean_mle is -infinity and mean_kl infinity.
/// Throws std::invalid_argument on fewer than two snapshots, node counts not
/// strictly increasing or below 2, or zero realizations.
ModelScore score_model(const EmpiricalSeries& empirical,
                       const ModelParams& params, std::size_t n_realizations,
                       std::uint64_t seed, const ScoreOptions& options = {});

/// MeanMLE score alone. Throws std::runtime_error when every snapshot was
/// skipped.
double mean_mle(const EmpiricalSeries& empirical, const ModelParams& params,
                std::size_t n_realizations, std::uint64_t seed,
                const ScoreOptions& options = {});

/// Mean KL divergence alone. Throws std::runtime_error when every snapshot
/// was skipped.
double mean_kl(const EmpiricalSeries& empirical, const ModelParams& params,
               std::size_t n_realizations, std::uint64_t seed,
               const ScoreOptions& options = {});

enum class ModelFamily { lpam, copy, forest_fire };

const char* family_name(ModelFamily family);
std::size_t family_param_count(ModelFamily family);

struct FitResult {
  ModelParams params;
  double mean_mle = 0.0;
  double mean_kl = 0.0;
  std::vector<double> per_snapshot_mle;
  std::size_t realizations_used = 0;
  std::size_t discarded_timeout = 0;
  std::size_t discarded_cap = 0;
};

struct GridOptions {
  /// Grid resolution; must divide [0,1] into a whole number of steps.
  double step = 0.05;
  std::size_t realizations = 5;
  std::uint64_t master_seed = 0;
  ScoreOptions score;
  /// Called after each grid point is scored with the point's result, its
  /// grid index, and the total point count.
  std::function<void(const FitResult&, std::size_t, std::size_t)> on_point;
};

struct GridSearchResult {
  /// Sorted by mean_mle descending; ties keep grid order.
  std::vector<FitResult> results;
  std::size_t scheduled_realizations = 0;
  std::size_t scored_realizations = 0;
  std::size_t discarded_realizations = 0;
  /// One line per discarded realization:
  /// model,param1,param2,realization,reason with reason in
  /// {timeout, clique_cap}.
  std::vector<std::string> discard_log;
};

/// Evaluates score_model at every grid point of the family's parameter cube:
/// axis values i/n for i = 0..n with n = 1/step, so two-parameter families
/// get (n+1)^2 points and one-parameter families n+1. Grid point j seeds its
/// realizations from derive_seed(master_seed, j), making the search
/// deterministic. scored + discarded = scheduled realizations, counting a
/// partially completed realization as discarded.
GridSearchResult grid_search(ModelFamily family,
                             const EmpiricalSeries& empirical,
                             const GridOptions& options = {});

/// Rows of model,param1,param2,mean_mle,mean_kl,n_scored,n_discarded; param2
/// is empty for one-parameter models. No header.
void write_fit_csv(std::ostream& out, const std::vector<FitResult>& results);

}  // namespace cliquescale
