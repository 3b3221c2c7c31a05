#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "cliquescale/cliques.hpp"
#include "cliquescale/graph.hpp"
#include "cliquescale/growth.hpp"
#include "cliquescale/rng.hpp"
#include "cliquescale/scaling.hpp"
#include "cliquescale/schedule.hpp"
#include "cliquescale/select.hpp"

using namespace cliquescale;

namespace {

Graph complete_graph(std::size_t n) {
  Graph g(n);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

Graph path_graph(std::size_t n) {
  Graph g(n);
  for (NodeId u = 0; u + 1 < n; ++u) g.add_edge(u, u + 1);
  return g;
}

CliqueProfile make_profile(std::uint64_t nodes,
                           std::vector<std::uint64_t> counts_from_k1) {
  CliqueProfile profile;
  profile.nodes = nodes;
  profile.counts.assign(1, 0);
  for (auto c : counts_from_k1) profile.counts.push_back(uint128(c));
  if (profile.counts.size() > 2) profile.edges = counts_from_k1[1];
  return profile;
}

CliqueSizeDistribution make_dist(std::size_t k_min, std::vector<double> mass) {
  CliqueSizeDistribution d;
  d.k_min = k_min;
  d.mass = std::move(mass);
  return d;
}

double neg_entropy(const CliqueSizeDistribution& d) {
  double sum = 0.0;
  for (double m : d.mass)
    if (m > 0.0) sum += m * std::log(m);
  return sum;
}

CliqueSizeDistribution random_dist(Rng& rng, std::size_t k_min,
                                   std::size_t categories) {
  std::vector<double> mass(categories);
  double total = 0.0;
  for (double& m : mass) {
    m = rng.uniform01() + 1e-3;
    total += m;
  }
  for (double& m : mass) m /= total;
  return make_dist(k_min, std::move(mass));
}

// Empirical snapshots of the deterministic copy p=1 model, which grows the
// complete graph at every size.
EmpiricalSeries complete_series(const std::vector<std::size_t>& sizes) {
  std::vector<CliqueProfile> profiles;
  for (auto n : sizes) profiles.push_back(brute_force_cliques(complete_graph(n)));
  return empirical_series(profiles);
}

double sum_mass(const CliqueSizeDistribution& d) {
  double sum = 0.0;
  for (double m : d.mass) sum += m;
  return sum;
}

}  // namespace

TEST_CASE("clique size distribution normalizes complete graph counts") {
  const auto d = clique_size_distribution(brute_force_cliques(complete_graph(4)));
  REQUIRE(d.k_min == 2);
  REQUIRE(d.mass.size() == 3);
  CHECK(d.mass[0] == doctest::Approx(6.0 / 11.0).epsilon(1e-12));
  CHECK(d.mass[1] == doctest::Approx(4.0 / 11.0).epsilon(1e-12));
  CHECK(d.mass[2] == doctest::Approx(1.0 / 11.0).epsilon(1e-12));
  CHECK(d.mass_of(2) == d.mass[0]);
  CHECK(d.mass_of(1) == 0.0);
  CHECK(d.mass_of(5) == 0.0);
  CHECK(d.max_k() == 4);
}

TEST_CASE("clique size distribution of a triangle-free graph is all edges") {
  const auto d = clique_size_distribution(brute_force_cliques(path_graph(6)));
  REQUIRE(d.mass.size() == 1);
  CHECK(d.mass[0] == 1.0);
}

TEST_CASE("clique size distribution respects k_min") {
  const auto profile = brute_force_cliques(complete_graph(4));
  const auto d3 = clique_size_distribution(profile, 3);
  REQUIRE(d3.k_min == 3);
  REQUIRE(d3.mass.size() == 2);
  CHECK(d3.mass[0] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(d3.mass[1] == doctest::Approx(0.2).epsilon(1e-12));
  const auto d1 = clique_size_distribution(profile, 1);
  REQUIRE(d1.k_min == 1);
  REQUIRE(d1.mass.size() == 4);
  CHECK(d1.mass[0] == doctest::Approx(4.0 / 15.0).epsilon(1e-12));
}

TEST_CASE("clique size distribution rejects empty support") {
  CHECK_THROWS_AS(clique_size_distribution(brute_force_cliques(path_graph(5)), 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(clique_size_distribution(CliqueProfile{}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      clique_size_distribution(brute_force_cliques(complete_graph(4)), 0),
      std::invalid_argument);
}

TEST_CASE("clique size distribution smooths interior zero categories") {
  const auto d = clique_size_distribution(make_profile(9, {9, 5, 0, 3}));
  REQUIRE(d.mass.size() == 3);
  for (double m : d.mass) CHECK(m > 0.0);
  CHECK(sum_mass(d) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d.mass[1] == doctest::Approx(1e-10).epsilon(1e-3));
  CHECK(d.mass[0] == doctest::Approx(5.0 / 8.0).epsilon(1e-9));
}

TEST_CASE("distribution average pools union support") {
  const auto mean = average_distributions(
      {make_dist(2, {1.0}), make_dist(2, {0.5, 0.25, 0.25})});
  REQUIRE(mean.k_min == 2);
  REQUIRE(mean.mass.size() == 3);
  CHECK(mean.mass[0] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(mean.mass[1] == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(mean.mass[2] == doctest::Approx(0.125).epsilon(1e-12));
  CHECK_THROWS_AS(average_distributions({}), std::invalid_argument);
}

TEST_CASE("cross entropy score is maximized by the weights themselves") {
  Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const auto w = random_dist(rng, 2, 2 + rng.below(4));
    const double best = cross_entropy_score(w, w);
    CHECK(best == doctest::Approx(neg_entropy(w)).epsilon(1e-12));
    for (int c = 0; c < 10; ++c) {
      const auto q = random_dist(rng, 2, 2 + rng.below(4));
      CHECK(cross_entropy_score(w, q) <= best + 1e-12);
    }
  }
}

TEST_CASE("cross entropy score is dominated by epsilon off support") {
  const auto w = make_dist(5, {1.0});
  const auto q = make_dist(2, {0.5, 0.5});
  CHECK(cross_entropy_score(w, q) < -20.0);
}

TEST_CASE("kl divergence matches the hand-computed two-category case") {
  const auto p = make_dist(2, {1.0});
  const auto q = make_dist(2, {0.5, 0.5});
  CHECK(kl_divergence(p, q) == doctest::Approx(std::log(2.0)).epsilon(1e-6));
}

TEST_CASE("kl divergence is zero exactly on identical distributions") {
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_dist(rng, 2, 1 + rng.below(5));
    CHECK(kl_divergence(p, p) == 0.0);
    const auto q = random_dist(rng, 2, 1 + rng.below(5));
    CHECK(kl_divergence(p, q) >= 0.0);
  }
}

TEST_CASE("kl divergence is asymmetric") {
  const auto p = make_dist(2, {0.9, 0.1});
  const auto q = make_dist(2, {0.5, 0.5});
  CHECK(kl_divergence(p, q) != kl_divergence(q, p));
}

TEST_CASE("empirical series carries node counts and distributions") {
  SnapshotSchedule schedule;
  schedule.sizes = {50, 100, 200};
  const auto profiles =
      profile_series(CopyParams{0.5}, 200, 31, schedule);
  const auto series = empirical_series(profiles);
  REQUIRE(series.size() == 3);
  CHECK(series[0].nodes == 50);
  CHECK(series[2].nodes == 200);
  for (const auto& snapshot : series) {
    CHECK(sum_mass(snapshot.distribution) ==
          doctest::Approx(1.0).epsilon(1e-9));
    for (double m : snapshot.distribution.mass) CHECK(m > 0.0);
  }
  CHECK_THROWS_AS(empirical_series({profiles[0], profiles[0]}),
                  std::invalid_argument);
}

TEST_CASE("score of the matching deterministic model is the entropy bound") {
  const auto empirical = complete_series({4, 6, 8});
  double expected = 0.0;
  for (const auto& snapshot : empirical)
    expected += neg_entropy(snapshot.distribution);
  expected /= 3.0;

  const auto score = score_model(empirical, CopyParams{1.0}, 3, 99);
  CHECK(score.mean_mle == doctest::Approx(expected).epsilon(1e-12));
  CHECK(score.mean_kl >= 0.0);
  CHECK(score.mean_kl < 1e-12);
  CHECK(score.snapshots_scored == 3);
  CHECK(score.snapshots_skipped == 0);
  CHECK(score.realizations_used == 3);
  CHECK(score.discards.empty());
  REQUIRE(score.per_snapshot_mle.size() == 3);
  CHECK(score.per_snapshot_mle[0] ==
        doctest::Approx(neg_entropy(empirical[0].distribution)).epsilon(1e-12));
  CHECK(score.per_snapshot_kl[2] < 1e-12);
  CHECK(mean_mle(empirical, CopyParams{1.0}, 2, 1) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(mean_kl(empirical, CopyParams{1.0}, 2, 1) == 0.0);
}

TEST_CASE("realizations hitting the clique cap are discarded") {
  const auto empirical = complete_series({4, 6, 8});
  ScoreOptions options;
  options.clique_cap = uint128(10);  // below the 11 cliques of K4
  const auto score = score_model(empirical, CopyParams{1.0}, 2, 5, options);
  CHECK(score.realizations_used == 0);
  REQUIRE(score.discards.size() == 2);
  CHECK(score.discards[0].realization == 0);
  CHECK(score.discards[1].realization == 1);
  CHECK(score.discarded(CountAborted::Reason::total_cap) == 2);
  CHECK(score.snapshots_scored == 0);
  CHECK(score.snapshots_skipped == 3);
  CHECK(score.mean_mle == -std::numeric_limits<double>::infinity());
  CHECK(score.mean_kl == std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(mean_mle(empirical, CopyParams{1.0}, 2, 5, options),
                  std::runtime_error);
  CHECK_THROWS_AS(mean_kl(empirical, CopyParams{1.0}, 2, 5, options),
                  std::runtime_error);
}

TEST_CASE("aborted realizations keep their completed snapshots") {
  const auto empirical = complete_series({4, 6, 8});
  ScoreOptions options;
  options.clique_cap = uint128(30);  // K4 has 11 cliques, K6 has 57
  const auto score = score_model(empirical, CopyParams{1.0}, 3, 5, options);
  CHECK(score.realizations_used == 0);
  CHECK(score.discards.size() == 3);
  CHECK(score.snapshots_scored == 1);
  CHECK(score.snapshots_skipped == 2);
  CHECK(score.per_snapshot_mle[0] ==
        doctest::Approx(neg_entropy(empirical[0].distribution)).epsilon(1e-12));
  CHECK(std::isnan(score.per_snapshot_mle[1]));
  CHECK(std::isnan(score.per_snapshot_kl[2]));
  CHECK(score.mean_mle ==
        doctest::Approx(neg_entropy(empirical[0].distribution)).epsilon(1e-12));
}

TEST_CASE("an expired budget discards with the timeout reason") {
  const auto empirical = complete_series({4, 6});
  ScoreOptions options;
  options.budget_seconds = 0.0;
  const auto score = score_model(empirical, CopyParams{1.0}, 2, 5, options);
  CHECK(score.realizations_used == 0);
  CHECK(score.discarded(CountAborted::Reason::timeout) == 2);
  CHECK(score.snapshots_scored == 0);
}

TEST_CASE("scoring prefers the generating parameter") {
  SnapshotSchedule schedule;
  schedule.sizes = {100, 200, 400};
  const auto empirical =
      empirical_series(profile_series(CopyParams{0.2}, 400, 777, schedule));
  const auto close = score_model(empirical, CopyParams{0.2}, 4, 9001);
  const auto far = score_model(empirical, CopyParams{0.8}, 4, 9001);
  CHECK(close.mean_mle > far.mean_mle);
  CHECK(close.mean_kl < far.mean_kl);
}

TEST_CASE("reverse kl flag flips the divergence direction") {
  SnapshotSchedule schedule;
  schedule.sizes = {60, 120};
  const auto empirical =
      empirical_series(profile_series(CopyParams{0.3}, 120, 5, schedule));
  ScoreOptions forward;
  ScoreOptions reverse;
  reverse.reverse_kl = true;
  const auto f = score_model(empirical, CopyParams{0.7}, 2, 11, forward);
  const auto r = score_model(empirical, CopyParams{0.7}, 2, 11, reverse);
  CHECK(f.mean_kl >= 0.0);
  CHECK(r.mean_kl >= 0.0);
  CHECK(f.mean_kl != r.mean_kl);
  CHECK(f.mean_mle == r.mean_mle);
}

TEST_CASE("score_model validates its inputs") {
  const auto empirical = complete_series({4, 6});
  CHECK_THROWS_AS(score_model({empirical[0]}, CopyParams{0.5}, 2, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(score_model(empirical, CopyParams{0.5}, 0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(score_model(empirical, CopyParams{1.5}, 2, 1),
                  std::invalid_argument);
  auto reversed = empirical;
  std::swap(reversed[0], reversed[1]);
  CHECK_THROWS_AS(score_model(reversed, CopyParams{0.5}, 2, 1),
                  std::invalid_argument);
  auto tiny = empirical;
  tiny[0].nodes = 1;
  CHECK_THROWS_AS(score_model(tiny, CopyParams{0.5}, 2, 1),
                  std::invalid_argument);
}

TEST_CASE("grid search covers the axis and keeps full bookkeeping") {
  SnapshotSchedule schedule;
  schedule.sizes = {40, 120};
  const auto empirical =
      empirical_series(profile_series(CopyParams{0.5}, 120, 8, schedule));
  GridOptions options;
  options.step = 0.25;
  options.realizations = 2;
  options.master_seed = 321;
  options.score.clique_cap = 0;  // keep the complete-graph corner countable
  std::size_t calls = 0;
  options.on_point = [&](const FitResult&, std::size_t idx, std::size_t total) {
    CHECK(idx == calls);
    CHECK(total == 5);
    ++calls;
  };
  const auto result = grid_search(ModelFamily::copy, empirical, options);
  CHECK(calls == 5);
  REQUIRE(result.results.size() == 5);
  CHECK(result.scheduled_realizations == 10);
  CHECK(result.scored_realizations == 10);
  CHECK(result.discarded_realizations == 0);
  CHECK(result.discard_log.empty());
  std::vector<double> ps;
  for (const auto& fit : result.results) {
    ps.push_back(std::get<CopyParams>(fit.params).p);
    CHECK(fit.realizations_used == 2);
  }
  std::sort(ps.begin(), ps.end());
  const std::vector<double> expected{0.0, 0.25, 0.5, 0.75, 1.0};
  CHECK(ps == expected);
  for (std::size_t i = 1; i < result.results.size(); ++i)
    CHECK(result.results[i - 1].mean_mle >= result.results[i].mean_mle);
}

TEST_CASE("grid search logs every discarded realization") {
  SnapshotSchedule schedule;
  schedule.sizes = {40, 80};
  const auto empirical =
      empirical_series(profile_series(CopyParams{0.4}, 80, 12, schedule));
  GridOptions options;
  options.step = 0.5;
  options.realizations = 3;
  options.score.clique_cap = uint128(10);  // every 40-node graph exceeds this
  const auto result = grid_search(ModelFamily::copy, empirical, options);
  CHECK(result.scheduled_realizations == 9);
  CHECK(result.scored_realizations == 0);
  CHECK(result.discarded_realizations == 9);
  REQUIRE(result.discard_log.size() == 9);
  CHECK(result.discard_log[0] == "copy,0,,0,clique_cap");
  CHECK(result.discard_log[8] == "copy,1,,2,clique_cap");
  for (const auto& fit : result.results) {
    CHECK(fit.mean_mle == -std::numeric_limits<double>::infinity());
    CHECK(fit.discarded_cap == 3);
    CHECK(fit.discarded_timeout == 0);
  }
  CHECK(result.scored_realizations + result.discarded_realizations ==
        result.scheduled_realizations);
}

TEST_CASE("grid search is deterministic in the master seed") {
  SnapshotSchedule schedule;
  schedule.sizes = {50, 100};
  const auto empirical =
      empirical_series(profile_series(LpamParams{0.4, 0.5}, 100, 3, schedule));
  GridOptions options;
  options.step = 0.5;
  options.realizations = 2;
  options.master_seed = 7;
  options.score.clique_cap = 0;
  const auto a = grid_search(ModelFamily::lpam, empirical, options);
  const auto b = grid_search(ModelFamily::lpam, empirical, options);
  REQUIRE(a.results.size() == 9);
  REQUIRE(b.results.size() == 9);
  CHECK(a.scheduled_realizations == 18);
  for (std::size_t i = 0; i < a.results.size(); ++i) {
    CHECK(a.results[i].mean_mle == b.results[i].mean_mle);
    CHECK(a.results[i].mean_kl == b.results[i].mean_kl);
    CHECK(std::get<LpamParams>(a.results[i].params).p ==
          std::get<LpamParams>(b.results[i].params).p);
  }
}

TEST_CASE("grid search validates step, realizations and budget") {
  const auto empirical = complete_series({4, 6});
  GridOptions options;
  options.step = 0.3;
  CHECK_THROWS_AS(grid_search(ModelFamily::copy, empirical, options),
                  std::invalid_argument);
  options.step = 0.0;
  CHECK_THROWS_AS(grid_search(ModelFamily::copy, empirical, options),
                  std::invalid_argument);
  options.step = 0.5;
  options.realizations = 0;
  CHECK_THROWS_AS(grid_search(ModelFamily::copy, empirical, options),
                  std::invalid_argument);
  options.realizations = 1;
  options.score.budget_seconds = 0.0;
  CHECK_THROWS_AS(grid_search(ModelFamily::copy, empirical, options),
                  std::invalid_argument);
}

TEST_CASE("a coarse copy grid recovers the generating parameter") {
  SnapshotSchedule schedule;
  schedule.sizes = {125, 250, 500};
  const auto empirical =
      empirical_series(profile_series(CopyParams{0.6}, 500, 2026, schedule));
  GridOptions options;
  options.step = 0.2;
  options.realizations = 3;
  options.master_seed = 17;
  options.score.clique_cap = 0;
  const auto result = grid_search(ModelFamily::copy, empirical, options);
  REQUIRE(result.results.size() == 6);
  CHECK(std::get<CopyParams>(result.results.front().params).p ==
        doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("family metadata names the grids") {
  CHECK(family_name(ModelFamily::lpam) == std::string("lpam"));
  CHECK(family_name(ModelFamily::copy) == std::string("copy"));
  CHECK(family_name(ModelFamily::forest_fire) == std::string("forest_fire"));
  CHECK(family_param_count(ModelFamily::lpam) == 2);
  CHECK(family_param_count(ModelFamily::copy) == 1);
  CHECK(family_param_count(ModelFamily::forest_fire) == 2);
}

TEST_CASE("fit csv rows cover every family shape") {
  FitResult lpam;
  lpam.params = LpamParams{0.625, 0.5};
  lpam.mean_mle = -1.5;
  lpam.mean_kl = 0.25;
  lpam.realizations_used = 5;
  FitResult copy;
  copy.params = CopyParams{0.25};
  copy.mean_mle = -2.0;
  copy.mean_kl = 0.5;
  copy.realizations_used = 3;
  copy.discarded_timeout = 1;
  copy.discarded_cap = 1;
  FitResult ff;
  ff.params = ForestFireParams{0.375, 0.0};
  ff.mean_mle = -3.0;
  ff.mean_kl = 1.0;
  FitResult ba;
  ba.params = BaParams{3};
  ba.mean_mle = -4.0;
  ba.mean_kl = 2.0;
  std::ostringstream out;
  write_fit_csv(out, {lpam, copy, ff, ba});
  CHECK(out.str() ==
        "lpam,0.625,0.5,-1.5,0.25,5,0\n"
        "copy,0.25,,-2,0.5,3,2\n"
        "forest_fire,0.375,0,-3,1,0,0\n"
        "ba,3,,-4,2,0,0\n");
}
