#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "marsim/series_stats.hpp"

namespace marsim::forecast {

inline constexpr int state_count = 27;
inline constexpr int action_count = 27;

// State components, each in {0,1,2}: long-horizon volatility regime,
// short-horizon volatility regime, fundamental-gap band.
struct StateParts {
  int long_vol = 0;
  int short_vol = 0;
  int gap_band = 0;
};

inline int encode_state(const StateParts& s) {
  return s.long_vol * 9 + s.short_vol * 3 + s.gap_band;
}

inline StateParts decode_state(int index) {
  return {index / 9, (index / 3) % 3, index % 3};
}

// Action components, each in {0,1,2}: econometric tool (mean-reverting /
// moving-average / trend-following), interval size, fundamentalist blend.
struct ActionParts {
  int tool = 0;
  int interval = 0;
  int blend = 0;
};

inline int encode_action(const ActionParts& a) {
  return a.tool * 9 + a.interval * 3 + a.blend;
}

inline ActionParts decode_action(int index) {
  return {index / 9, (index / 3) % 3, index % 3};
}

// Percentile cut at low/high: below low -> 0, above high -> 2, else 1.
inline int band_of(double value, double low, double high) {
  if (value < low) return 0;
  if (value > high) return 2;
  return 1;
}

// Days in the averaging interval for interval action a1: (1 + a1) tau / 2,
// rounded to the nearest whole day, at least one.
inline int interval_days(int interval_action, int horizon) {
  return std::max<int>(
      1, static_cast<int>(std::llround((1 + interval_action) * horizon / 2.0)));
}

// First step at which an agent has enough history for every action variant.
inline int warmup_steps(int horizon) {
  return 2 * interval_days(2, horizon);
}

// Mean-reverting / moving-average / trend-following projection from the two
// adjacent price-window means m1 = <P [t-2T, t-T]> and m2 = <P [t-T, t]>.
inline double technical_forecast(const PrefixStats& prices, int t, int tool,
                                 int interval) {
  if (interval < 1)
    throw std::invalid_argument("technical_forecast: malformed horizon");
  const std::size_t u = static_cast<std::size_t>(t);
  const std::size_t span = static_cast<std::size_t>(interval);
  const double m1 = prices.mean(u - 2 * span, u - span);
  const double m2 = prices.mean(u - span, u);
  const double now = prices.mean(u, u);
  switch (tool) {
    case 0: return now + m1 - m2;
    case 1: return 0.5 * (m1 + m2);
    default: return now - m1 + m2;
  }
}

// Chartist weight alpha for blend action a2 given reflexivity rho:
//   rho <= 1/2: alpha in {0, rho, 2 rho};  rho > 1/2: {2 rho - 1, rho, 1}.
inline double blend_weight(double rho, int blend_action) {
  if (rho <= 0.5) {
    if (blend_action == 0) return 0.0;
    if (blend_action == 1) return rho;
    return 2.0 * rho;
  }
  if (blend_action == 0) return 2.0 * rho - 1.0;
  if (blend_action == 1) return rho;
  return 1.0;
}

inline double blend_forecast(double technical, double fundamental, double rho,
                             int blend_action) {
  const double alpha = blend_weight(rho, blend_action);
  return alpha * technical + (1.0 - alpha) * fundamental;
}

// Percentile of the forecast error in the agent's own history -> reward.
// Small error percentile means an unusually good forecast.
inline int reward_from_percentile(double p) {
  if (p < 0.05) return 4;
  if (p < 0.25) return 2;
  if (p < 0.50) return 1;
  if (p < 0.75) return -1;
  if (p < 0.95) return -2;
  return -4;
}

// Forecast a full action would have produced at decision time, evaluated
// with hindsight. view_value is the agent's fundamental estimate B at the
// decision step.
inline double hindsight_forecast(const PrefixStats& prices, int decision_t,
                                 double view_value, double rho, int horizon,
                                 int action) {
  const ActionParts parts = decode_action(action);
  const int interval = interval_days(parts.interval, horizon);
  const double technical =
      technical_forecast(prices, decision_t, parts.tool, interval);
  return blend_forecast(technical, view_value, rho, parts.blend);
}

// Exhaustive search over all 27 actions for the one whose forecast would
// have landed closest to the realized price; ties go to the lowest index.
inline int best_action_hindsight(const PrefixStats& prices, int decision_t,
                                 double view_value, double rho, int horizon,
                                 double realized_price) {
  int best = 0;
  double best_error = std::numeric_limits<double>::infinity();
  for (int a = 0; a < action_count; ++a) {
    const double h =
        hindsight_forecast(prices, decision_t, view_value, rho, horizon, a);
    const double err = std::fabs(h - realized_price);
    if (err < best_error) {
      best_error = err;
      best = a;
    }
  }
  return best;
}

}  // namespace marsim::forecast
