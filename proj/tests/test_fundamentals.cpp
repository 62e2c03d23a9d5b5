#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "marsim/fundamentals.hpp"
#include "marsim/rng.hpp"

using namespace marsim;
using Catch::Approx;

TEST_CASE("vanishing amplitude freezes the series") {
  Rng rng(3);
  const auto f = generate_fundamental(2875, 0.0, rng);
  REQUIRE(f.jump_times.empty());
  for (double v : f.values) REQUIRE(v == f.values.front());
  const auto stats = jump_statistics(f);
  REQUIRE(stats.annual_jump_count == 0.0);
  REQUIRE(stats.mean_amplitude == 0.0);
}

TEST_CASE("initial level brackets the $100 market price") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const auto f = generate_fundamental(300, 0.5, rng);
    REQUIRE(f.values.front() >= 50.0);
    REQUIRE(f.values.front() <= 200.0);
  }
}

TEST_CASE("generated statistics match the calibration targets") {
  // 20 seeded series of T=2875 at the reference amplitude
  double jump_sum = 0.0, amp_sum = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    const auto stats = jump_statistics(generate_fundamental(2875, 0.5, rng));
    jump_sum += stats.annual_jump_count;
    amp_sum += stats.mean_amplitude;
  }
  REQUIRE(jump_sum / 20 == Approx(12.70).margin(1.85));
  REQUIRE(amp_sum / 20 == Approx(0.0590).margin(0.0184));
}

TEST_CASE("series stays positive and piecewise constant between jumps") {
  Rng rng(17);
  const auto f = generate_fundamental(2875, 1.5, rng);
  std::size_t next_jump = 0;
  for (std::size_t t = 1; t < f.values.size(); ++t) {
    REQUIRE(f.values[t] > 0.0);
    const bool is_jump = next_jump < f.jump_times.size() &&
                         f.jump_times[next_jump] == static_cast<int>(t);
    if (is_jump) {
      REQUIRE(f.values[t] != f.values[t - 1]);
      ++next_jump;
    } else {
      REQUIRE(f.values[t] == f.values[t - 1]);
    }
  }
  REQUIRE(next_jump == f.jump_times.size());
}

TEST_CASE("constructed two-jump fixture measures exactly") {
  FundamentalSeries f;
  f.values.assign(253, 100.0);
  // jumps sized so |dT| / T(t) is exactly 0.10
  for (std::size_t t = 100; t < 200; ++t) f.values[t] = 100.0 / 0.9;
  for (std::size_t t = 200; t < 253; ++t) f.values[t] = (100.0 / 0.9) / 0.9;
  const auto stats = jump_statistics(f);
  REQUIRE(stats.annual_jump_count == Approx(2.0));
  REQUIRE(stats.mean_amplitude == Approx(0.10).epsilon(1e-12));
}

TEST_CASE("doubling the amplitude doubles the mean jump size") {
  double amp_ref = 0.0, amp_double = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng a(seed);
    amp_ref += jump_statistics(generate_fundamental(2875, 0.5, a)).mean_amplitude;
    Rng b(seed);
    amp_double +=
        jump_statistics(generate_fundamental(2875, 1.0, b)).mean_amplitude;
  }
  REQUIRE(amp_double / amp_ref == Approx(2.0).epsilon(0.10));
}

TEST_CASE("zero bias scale reproduces the true series") {
  Rng rng(5);
  const auto f = generate_fundamental(500, 0.5, rng);
  Rng vrng(6);
  const auto view = approximate_fundamental(f, 0.97, 0.0, vrng);
  for (std::size_t t = 0; t < f.values.size(); ++t)
    REQUIRE(view.values[t] == Approx(f.values[t]).epsilon(1e-12));
}

TEST_CASE("long-run mean absolute bias hits the target band") {
  double bias_sum = 0.0;
  int n = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    const auto f = generate_fundamental(2875, 0.5, rng);
    Rng vrng(seed + 1000);
    const auto view = approximate_fundamental(f, vrng);
    for (std::size_t t = 0; t < f.values.size(); ++t) {
      bias_sum += std::fabs(f.values[t] - view.values[t]) / f.values[t];
      ++n;
    }
  }
  REQUIRE(bias_sum / n == Approx(0.0237).margin(0.0136));
}

TEST_CASE("biased views stay strictly positive over a long sweep") {
  BiasedView process(0.97, 0.30);  // exaggerated bias to stress the clamp
  Rng vrng(10);
  for (int t = 0; t < 1000000; ++t)
    REQUIRE(process.step(50.0, vrng) > 0.0);
}

TEST_CASE("different seeds give different views of one truth") {
  Rng rng(21);
  const auto f = generate_fundamental(300, 0.5, rng);
  Rng v1(100), v2(200);
  const auto a = approximate_fundamental(f, v1);
  const auto b = approximate_fundamental(f, v2);
  bool differ = false;
  for (std::size_t t = 0; t < f.values.size(); ++t)
    if (a.values[t] != b.values[t]) differ = true;
  REQUIRE(differ);
}
