#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "marsim/analytics.hpp"
#include "marsim/rng.hpp"

using namespace marsim;
using namespace marsim::analytics;
using Catch::Approx;

TEST_CASE("log returns of fixtures") {
  REQUIRE(log_returns({100.0, 100.0, 100.0}) ==
          std::vector<double>{0.0, 0.0});
  const auto doubled = log_returns({100.0, 200.0});
  REQUIRE(doubled[0] == Approx(0.6931471805599453));
  REQUIRE_THROWS_AS(log_returns({100.0, -1.0}), std::invalid_argument);
  REQUIRE_THROWS_AS(log_returns({100.0}), std::invalid_argument);
}

TEST_CASE("log returns telescope to the total") {
  Rng rng(2);
  std::vector<double> prices{100.0};
  for (int k = 0; k < 200; ++k)
    prices.push_back(prices.back() * std::exp(rng.uniform(-0.05, 0.05)));
  const auto returns = log_returns(prices);
  const double total = std::accumulate(returns.begin(), returns.end(), 0.0);
  REQUIRE(total == Approx(std::log(prices.back() / prices.front())).margin(1e-10));
}

TEST_CASE("volatility of fixtures") {
  REQUIRE_THROWS_AS(volatility_series({1.0, 2.0, 3.0}, 1),
                    std::invalid_argument);
  const auto flat = volatility_series(std::vector<double>(30, 100.0), 4);
  for (double v : flat) REQUIRE(v == 0.0);

  // alternating 100/102 over a window of 5 points: population stdev of
  // {100,102,100,102,100} around 100.8, divided by the current price
  std::vector<double> zigzag;
  for (int k = 0; k < 12; ++k) zigzag.push_back(k % 2 ? 102.0 : 100.0);
  const auto vol = volatility_series(zigzag, 4);
  const double mean5 = (3 * 100.0 + 2 * 102.0) / 5.0;
  double var = 0.0;
  for (double x : {100.0, 102.0, 100.0, 102.0, 100.0})
    var += (x - mean5) * (x - mean5);
  var /= 5.0;
  REQUIRE(vol[0] == Approx(std::sqrt(var) / 100.0));

  // scale invariance of sigma / P
  std::vector<double> scaled = zigzag;
  for (double& x : scaled) x *= 7.0;
  const auto vol_scaled = volatility_series(scaled, 4);
  for (std::size_t k = 0; k < vol.size(); ++k)
    REQUIRE(vol_scaled[k] == Approx(vol[k]).margin(1e-12));
}

TEST_CASE("adjacent autocorrelation on periodic and anti-periodic series") {
  // period 3: the two windows coincide
  std::vector<double> periodic;
  for (int k = 0; k < 30; ++k) periodic.push_back((k % 3) * 1.0);
  for (double c : adjacent_autocorr(periodic, 3)) REQUIRE(c == Approx(1.0));

  // x(t) = C - x(t - delta): windows are exact negatives around the mean
  std::vector<double> anti;
  for (int k = 0; k < 40; ++k) {
    const int phase = (k / 2) % 2;
    const double base = (k % 2) * 1.0;
    anti.push_back(phase ? 5.0 - base : base);
  }
  for (double c : adjacent_autocorr(anti, 2)) REQUIRE(c == Approx(-1.0));
}

TEST_CASE("white noise has near-zero mean adjacent autocorrelation") {
  Rng rng(55);
  std::vector<double> noise;
  for (int k = 0; k < 10000; ++k) noise.push_back(rng.normal());
  const auto ac = adjacent_autocorr(noise, 10);
  REQUIRE(std::fabs(mean(ac)) < 3.0 / std::sqrt(static_cast<double>(ac.size())) + 0.02);
}

TEST_CASE("zero-variance windows are skipped, not imputed") {
  std::vector<double> series(50, 1.0);
  series[40] = 2.0;  // a single blip
  const auto ac = adjacent_autocorr(series, 5);
  REQUIRE(ac.size() < 40);  // flat stretches contribute nothing
}

TEST_CASE("blended autocorrelation on trends and noise") {
  REQUIRE_THROWS_AS(blended_autocorr({1.0, 2.0, 3.0}, 2, 0),
                    std::invalid_argument);

  std::vector<double> trend;
  for (int k = 0; k < 60; ++k) trend.push_back(3.0 * k + 1.0);
  for (int shift = 1; shift <= 5; ++shift)
    for (double c : blended_autocorr(trend, 5, shift))
      REQUIRE(c == Approx(1.0));

  // Small windows carry the usual -1/n small-sample bias, so the white
  // noise null is checked on a wider window.
  Rng rng(66);
  std::vector<double> noise;
  for (int k = 0; k < 20000; ++k) noise.push_back(rng.normal());
  for (int shift : {1, 5})
    REQUIRE(std::fabs(mean_blended_autocorr(noise, 63, shift)) < 0.05);
}

TEST_CASE("run lengths on fixtures") {
  REQUIRE(run_lengths({100.0, 101.0, 102.0, 101.0, 100.0}) ==
          std::vector<int>{2, -2});
  REQUIRE(run_lengths({1.0, 2.0, 3.0, 4.0}) == std::vector<int>{3});
  REQUIRE(run_lengths({4.0, 3.0, 2.0, 1.0}) == std::vector<int>{-3});
  REQUIRE(run_lengths(std::vector<double>(10, 5.0)).empty());
  // flat days break runs
  REQUIRE(run_lengths({1.0, 2.0, 2.0, 3.0}) == std::vector<int>{1, 1});
}

TEST_CASE("kolmogorov-smirnov fixtures") {
  const std::vector<double> sample = {1.0, 2.0, 3.0, 4.0, 5.0};
  REQUIRE(ks_statistic(sample, sample) == 0.0);
  REQUIRE(ks_statistic({1.0, 2.0, 3.0}, {10.0, 11.0}) == 1.0);

  Rng rng(12);
  std::vector<double> a, b;
  for (int k = 0; k < 10000; ++k) {
    a.push_back(rng.normal());
    b.push_back(rng.normal());
  }
  REQUIRE(ks_statistic(a, b) < 0.03);

  const auto rec = compare(a, b);
  REQUIRE(rec.ks == ks_statistic(a, b));
  REQUIRE(std::fabs(rec.mean_diff) < 0.05);
}

TEST_CASE("histogram counts cover the whole sample") {
  Rng rng(14);
  std::vector<double> sample;
  for (int k = 0; k < 5000; ++k) sample.push_back(rng.normal());
  const auto edges = fd_edges(sample);
  REQUIRE(edges.size() >= 2);
  for (std::size_t k = 1; k < edges.size(); ++k)
    REQUIRE(edges[k] > edges[k - 1]);
  const auto h = histogram(sample, edges);
  long long total = 0;
  for (long long c : h.counts) total += c;
  REQUIRE(total == 5000);
}

TEST_CASE("excess kurtosis separates heavy tails from gaussian") {
  Rng rng(31);
  std::vector<double> gaussian, heavy;
  for (int k = 0; k < 40000; ++k) {
    gaussian.push_back(rng.normal());
    heavy.push_back(rng.normal() * (rng.bernoulli(0.05) ? 5.0 : 1.0));
  }
  REQUIRE(std::fabs(excess_kurtosis(gaussian)) < 0.15);
  REQUIRE(excess_kurtosis(heavy) > 1.0);
}

TEST_CASE("metric families pool every bundle") {
  Rng rng(91);
  std::vector<SeriesBundle> bundles(3);
  for (auto& b : bundles) {
    double p = 100.0;
    for (int k = 0; k < 600; ++k) {
      p *= std::exp(rng.uniform(-0.02, 0.02));
      b.prices.push_back(p);
      b.volumes.push_back(std::floor(rng.uniform(0.0, 50.0)));
    }
  }
  const auto families = compute_metric_families(bundles);
  bool saw_returns = false;
  for (const auto& m : families) {
    if (m.name == "log_returns") {
      saw_returns = true;
      REQUIRE(m.samples.size() == 3u * 599u);
    }
    if (m.name == "blended_mean_week") REQUIRE(m.samples.size() == 3);
  }
  REQUIRE(saw_returns);

  const auto distances = family_distances(families, families);
  REQUIRE_FALSE(distances.empty());
  REQUIRE(aggregate_score(distances) == 0.0);
}

namespace {

RunResult synthetic_run(int agents, int steps, double drift, std::uint64_t seed) {
  RunResult r;
  r.config.agent_count = agents;
  r.config.step_count = steps;
  r.config.stock_count = 1;
  r.seed = seed;
  r.market.resize(1);
  r.market[0].price.assign(steps, 100.0);
  r.market[0].volume.assign(steps, 0.0);
  r.market[0].spread.assign(steps, 0.0);
  r.nav.assign(static_cast<std::size_t>(agents) * steps, 0.0);
  Rng rng(seed);
  for (int i = 0; i < agents; ++i) {
    double nav = 1000.0 + 10.0 * i;
    const double agent_drift = drift * rng.uniform(0.5, 1.5);
    for (int t = 0; t < steps; ++t) {
      r.nav[static_cast<std::size_t>(i) * steps + t] = nav;
      nav *= std::exp(agent_drift + rng.uniform(-0.001, 0.001));
    }
  }
  return r;
}

}  // namespace

TEST_CASE("learning curve selection arithmetic") {
  std::vector<RunResult> batch;
  batch.push_back(synthetic_run(500, 600, 1e-4, 3));
  const auto table = learning_curves(batch);
  REQUIRE(table.top_count == 50);
  REQUIRE(table.selection_step == 540);
  REQUIRE(table.ytd_mean.size() == 60);

  std::vector<RunResult> tiny;
  tiny.push_back(synthetic_run(7, 600, 1e-4, 4));
  REQUIRE(learning_curves(tiny).top_count == 1);
}

TEST_CASE("a batch compared with itself is identical") {
  std::vector<RunResult> batch;
  batch.push_back(synthetic_run(100, 600, 5e-5, 8));
  batch.push_back(synthetic_run(100, 600, 5e-5, 9));
  const auto a = learning_curves(batch);
  const auto b = learning_curves(batch);
  REQUIRE(a.ytd_mean == b.ytd_mean);
  REQUIRE(a.sorted_annual_mean == b.sorted_annual_mean);
}

TEST_CASE("drifting agents outrank flat ones out of sample") {
  std::vector<RunResult> up, flat;
  up.push_back(synthetic_run(100, 600, 2e-4, 20));
  flat.push_back(synthetic_run(100, 600, 0.0, 21));
  REQUIRE(mean_ytd(learning_curves(up)) > mean_ytd(learning_curves(flat)));
}
