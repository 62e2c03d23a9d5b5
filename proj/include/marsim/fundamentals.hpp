#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "marsim/config.hpp"
#include "marsim/rng.hpp"

namespace marsim {

// True per-share value of one stock: a piecewise-constant jump process.
struct FundamentalSeries {
  std::vector<double> values;
  std::vector<int> jump_times;
  double amplitude = 0.5;  // nu used at generation
};

struct JumpStats {
  double annual_jump_count = 0.0;
  double mean_amplitude = 0.0;  // mean |dT / T(t)| at jump steps
};

// Reference amplitude at which the generator's jump statistics are
// calibrated: annual jump count 12.70, mean relative amplitude 5.90%
// (s.d. 1.84%). Amplitudes scale linearly in nu / nu0.
namespace fundamental_defaults {
inline constexpr double reference_amplitude = 0.5;  // nu0
inline constexpr double jumps_per_year = 12.70;
inline constexpr double jump_mean = 0.059;
inline constexpr double jump_sd = 0.0184;
inline constexpr double view_persistence = 0.97;   // phi of the AR(1) bias
inline constexpr double view_mean_abs_bias = 0.0237;
inline constexpr double initial_low = 80.0;
inline constexpr double initial_high = 120.0;
}  // namespace fundamental_defaults

// Draw order per step: one Bernoulli; on a jump, one normal then one sign
// draw. Jump multiplies the level by (1 +- A), A = (nu/nu0) |N(mean, sd)|,
// so nu -> 0 freezes the series and scaling nu scales amplitudes exactly.
inline FundamentalSeries generate_fundamental(int steps, double nu, Rng& rng) {
  namespace fd = fundamental_defaults;
  if (steps < 1) throw std::invalid_argument("generate_fundamental: steps < 1");
  FundamentalSeries out;
  out.amplitude = nu;
  out.values.resize(steps);
  out.values[0] = rng.uniform(fd::initial_low, fd::initial_high);
  const double jump_prob = fd::jumps_per_year / calendar::days_per_year;
  const double scale = nu / fd::reference_amplitude;
  for (int t = 1; t < steps; ++t) {
    double level = out.values[t - 1];
    if (rng.bernoulli(jump_prob)) {
      const double amp =
          scale * std::fabs(rng.normal(fd::jump_mean, fd::jump_sd));
      const bool up = rng.bernoulli(0.5);
      level *= up ? (1.0 + amp) : (1.0 - amp);
      level = std::max(level, 0.01);
      if (level != out.values[t - 1]) out.jump_times.push_back(t);
    }
    out.values[t] = level;
  }
  return out;
}

inline JumpStats jump_statistics(const FundamentalSeries& f) {
  JumpStats stats;
  const auto& v = f.values;
  if (v.size() < 2) return stats;
  int jumps = 0;
  double amplitude_sum = 0.0;
  for (std::size_t t = 1; t < v.size(); ++t) {
    if (v[t] == v[t - 1]) continue;
    ++jumps;
    amplitude_sum += std::fabs((v[t] - v[t - 1]) / v[t]);
  }
  const double years =
      static_cast<double>(v.size() - 1) / calendar::days_per_year;
  stats.annual_jump_count = jumps / years;
  stats.mean_amplitude = jumps > 0 ? amplitude_sum / jumps : 0.0;
  return stats;
}

// One agent's view of a fundamental: B(t) = T(t) (1 + eps(t)) with eps an
// AR(1) relative error started from its stationary distribution and
// calibrated so the long-run mean of |eps| hits mean_abs_bias.
class BiasedView {
 public:
  BiasedView(double persistence, double mean_abs_bias)
      : persistence_(persistence),
        stationary_sd_(mean_abs_bias * std::sqrt(M_PI / 2.0)),
        innovation_sd_(stationary_sd_ *
                       std::sqrt(1.0 - persistence * persistence)) {}

  BiasedView()
      : BiasedView(fundamental_defaults::view_persistence,
                   fundamental_defaults::view_mean_abs_bias) {}

  // One normal draw per call (including the first).
  double step(double true_value, Rng& rng) {
    if (!started_) {
      eps_ = rng.normal(0.0, stationary_sd_);
      started_ = true;
    } else {
      eps_ = persistence_ * eps_ + rng.normal(0.0, innovation_sd_);
    }
    const double factor = std::max(1.0 + eps_, 0.01);
    return true_value * factor;
  }

 private:
  double persistence_;
  double stationary_sd_;
  double innovation_sd_;
  double eps_ = 0.0;
  bool started_ = false;
};

struct FundamentalView {
  std::vector<double> values;
  double persistence = fundamental_defaults::view_persistence;
  double mean_abs_bias = fundamental_defaults::view_mean_abs_bias;
};

inline FundamentalView approximate_fundamental(const FundamentalSeries& f,
                                               double persistence,
                                               double mean_abs_bias,
                                               Rng& rng) {
  FundamentalView view;
  view.persistence = persistence;
  view.mean_abs_bias = mean_abs_bias;
  view.values.reserve(f.values.size());
  BiasedView process(persistence, mean_abs_bias);
  for (double t_value : f.values) view.values.push_back(process.step(t_value, rng));
  return view;
}

inline FundamentalView approximate_fundamental(const FundamentalSeries& f,
                                               Rng& rng) {
  namespace fd = fundamental_defaults;
  return approximate_fundamental(f, fd::view_persistence,
                                 fd::view_mean_abs_bias, rng);
}

}  // namespace marsim
