#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "marsim/forecast.hpp"
#include "marsim/rng.hpp"
#include "marsim/series_stats.hpp"

using namespace marsim;
using Catch::Approx;

namespace {

PrefixStats stats_of(const std::vector<double>& prices) {
  PrefixStats stats(100.0);
  for (double p : prices) stats.push(p);
  return stats;
}

}  // namespace

TEST_CASE("state and action codecs are inverse bijections") {
  for (int index = 0; index < forecast::state_count; ++index) {
    const auto s = forecast::decode_state(index);
    REQUIRE(s.long_vol >= 0);
    REQUIRE(s.long_vol <= 2);
    REQUIRE(forecast::encode_state(s) == index);
  }
  for (int index = 0; index < forecast::action_count; ++index)
    REQUIRE(forecast::encode_action(forecast::decode_action(index)) == index);
}

TEST_CASE("percentile bands cut at the quartiles") {
  REQUIRE(forecast::band_of(0.0, 0.25, 0.75) == 0);
  REQUIRE(forecast::band_of(0.80, 0.25, 0.75) == 2);
  REQUIRE(forecast::band_of(0.50, 0.25, 0.75) == 1);
  REQUIRE(forecast::band_of(0.25, 0.25, 0.75) == 1);  // boundary stays middle
  // absolute gap bands
  REQUIRE(forecast::band_of(0.20, 0.10, 0.30) == 1);
  REQUIRE(forecast::band_of(0.05, 0.10, 0.30) == 0);
  REQUIRE(forecast::band_of(0.35, 0.10, 0.30) == 2);
}

TEST_CASE("interval length rounds (1 + a1) tau / 2 to whole days") {
  REQUIRE(forecast::interval_days(0, 20) == 10);
  REQUIRE(forecast::interval_days(1, 20) == 20);
  REQUIRE(forecast::interval_days(2, 20) == 30);
  REQUIRE(forecast::interval_days(2, 5) == 8);  // 7.5 rounds away from zero
  REQUIRE(forecast::interval_days(0, 1) == 1);
  REQUIRE(forecast::warmup_steps(20) == 60);
  REQUIRE(forecast::warmup_steps(5) == 16);
}

TEST_CASE("constant history collapses all three tools to the price") {
  std::vector<double> prices(50, 100.0);
  const auto stats = stats_of(prices);
  for (int tool = 0; tool < 3; ++tool)
    REQUIRE(forecast::technical_forecast(stats, 49, tool, 10) == Approx(100.0));
}

TEST_CASE("tools produce the three projections from the window means") {
  // m1 = 100 over [t-2T, t-T], m2 = 110 over [t-T, t], P(t) = 112
  // -> mean-reverting 102, moving-average 105, trend-following 122
  const std::vector<double> prices = {100.0, 100.0, 100.0, 118.0, 112.0};
  const auto stats = stats_of(prices);
  REQUIRE(forecast::technical_forecast(stats, 4, 0, 2) == Approx(102.0));
  REQUIRE(forecast::technical_forecast(stats, 4, 1, 2) == Approx(105.0));
  REQUIRE(forecast::technical_forecast(stats, 4, 2, 2) == Approx(122.0));
}

TEST_CASE("mean-reverting and trend-following are antisymmetric around P") {
  Rng rng(5);
  std::vector<double> prices;
  for (int k = 0; k < 64; ++k) prices.push_back(rng.uniform(90.0, 110.0));
  const auto stats = stats_of(prices);
  const double now = prices.back();
  const double reverting = forecast::technical_forecast(stats, 63, 0, 15);
  const double following = forecast::technical_forecast(stats, 63, 2, 15);
  REQUIRE(reverting - now == Approx(now - following).epsilon(1e-9));
}

TEST_CASE("malformed interval is rejected") {
  const auto stats = stats_of(std::vector<double>(10, 100.0));
  REQUIRE_THROWS_AS(forecast::technical_forecast(stats, 9, 0, 0),
                    std::invalid_argument);
}

TEST_CASE("blend weight cases around the reflexivity midpoint") {
  REQUIRE(forecast::blend_weight(0.3, 0) == Approx(0.0));
  REQUIRE(forecast::blend_weight(0.3, 1) == Approx(0.3));
  REQUIRE(forecast::blend_weight(0.3, 2) == Approx(0.6));
  REQUIRE(forecast::blend_weight(0.8, 0) == Approx(0.6));
  REQUIRE(forecast::blend_weight(0.8, 1) == Approx(0.8));
  REQUIRE(forecast::blend_weight(0.8, 2) == Approx(1.0));
  REQUIRE(forecast::blend_forecast(110.0, 100.0, 0.3, 2) == Approx(106.0));
}

TEST_CASE("blend is a convex combination and monotone in the action") {
  Rng rng(8);
  for (int k = 0; k < 500; ++k) {
    const double technical = rng.uniform(50.0, 150.0);
    const double fundamental = rng.uniform(50.0, 150.0);
    const double rho = rng.uniform(0.0, 1.0);
    double previous_alpha = -1.0;
    for (int a2 = 0; a2 < 3; ++a2) {
      const double alpha = forecast::blend_weight(rho, a2);
      REQUIRE(alpha >= previous_alpha);
      previous_alpha = alpha;
      const double h =
          forecast::blend_forecast(technical, fundamental, rho, a2);
      REQUIRE(h >= std::min(technical, fundamental) - 1e-9);
      REQUIRE(h <= std::max(technical, fundamental) + 1e-9);
    }
  }
}

TEST_CASE("reward follows the six percentile intervals") {
  REQUIRE(forecast::reward_from_percentile(0.03) == 4);
  REQUIRE(forecast::reward_from_percentile(0.10) == 2);
  REQUIRE(forecast::reward_from_percentile(0.30) == 1);
  REQUIRE(forecast::reward_from_percentile(0.60) == -1);
  REQUIRE(forecast::reward_from_percentile(0.80) == -2);
  REQUIRE(forecast::reward_from_percentile(0.97) == -4);
  // interval edges belong to the upper bucket
  REQUIRE(forecast::reward_from_percentile(0.05) == 2);
  REQUIRE(forecast::reward_from_percentile(0.95) == -4);
}

TEST_CASE("hindsight picks the trend tool on a linear ramp") {
  // Strict uptrend: trend-following projects highest, closest to the
  // realized later price.
  std::vector<double> prices;
  for (int k = 0; k <= 80; ++k) prices.push_back(100.0 + k);
  const auto stats = stats_of(prices);
  const int t = 60;
  const double realized = 100.0 + 80;  // price 20 steps later
  const int best = forecast::best_action_hindsight(stats, t, prices[t], 1.0,
                                                   20, realized);
  REQUIRE(forecast::decode_action(best).tool == 2);
}

TEST_CASE("constant series ties break to action zero") {
  std::vector<double> prices(100, 100.0);
  const auto stats = stats_of(prices);
  REQUIRE(forecast::best_action_hindsight(stats, 80, 100.0, 0.5, 20, 100.0) ==
          0);
}

TEST_CASE("hindsight choice beats every alternative, exhaustively") {
  Rng rng(31);
  for (int round = 0; round < 200; ++round) {
    std::vector<double> prices;
    double p = 100.0;
    for (int k = 0; k < 130; ++k) {
      p *= std::exp(rng.uniform(-0.03, 0.03));
      prices.push_back(p);
    }
    const auto stats = stats_of(prices);
    const int tau = static_cast<int>(rng.uniform_int(5, 30));
    const int t = 129 - tau;
    const double rho = rng.uniform(0.0, 1.0);
    const double view = prices[t] * rng.uniform(0.9, 1.1);
    const double realized = prices.back();
    const int best =
        forecast::best_action_hindsight(stats, t, view, rho, tau, realized);
    const double best_error = std::fabs(
        forecast::hindsight_forecast(stats, t, view, rho, tau, best) -
        realized);
    for (int a = 0; a < forecast::action_count; ++a) {
      const double err = std::fabs(
          forecast::hindsight_forecast(stats, t, view, rho, tau, a) - realized);
      REQUIRE(best_error <= err + 1e-12);
    }
  }
}
