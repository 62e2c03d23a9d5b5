#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace marsim {

// Trading-day calendar constants. One simulation step is one trading day.
namespace calendar {
inline constexpr int days_per_year = 252;
inline constexpr int days_per_month = 21;
inline constexpr int days_per_week = 5;
}  // namespace calendar

struct SimConfig {
  int agent_count = 500;        // I
  int stock_count = 1;          // J
  int step_count = 2875;        // T, trading days
  int run_count = 20;           // S
  double broker_fee = 0.0001;   // b, fraction of trade value per counterparty
  double annual_risk_free = 0.01;
  double annual_dividend = 0.02;
  double gesture_scalar = 1.0;        // zeta, multiplies each agent's gesture g
  double fundamental_amplitude = 0.5; // nu
  double drawdown_threshold = 0.0;    // L, percentage points added to each limit
  std::uint64_t master_seed = 42;
  bool noise_agent_mode = false;
  // Restores the paper's shared percentile->reward table for trade rewards
  // (by default the trade mapping is inverted so reward rises with cashflow).
  bool literal_trade_reward_map = false;
};

// Minimum step count so that every admissible horizon tau (up to 6 months)
// and memory interval h fit inside the run.
inline constexpr int min_step_count_exclusive =
    6 * calendar::days_per_month + 4 * calendar::days_per_week;  // 146

// Full validation, used on the configuration-file path. Returns every
// violated bound, one message per field.
inline std::vector<std::string> validate_config(const SimConfig& cfg) {
  std::vector<std::string> errors;
  if (cfg.agent_count < 1) errors.push_back("agent_count must be >= 1");
  if (cfg.stock_count < 1) errors.push_back("stock_count must be >= 1");
  if (cfg.step_count <= min_step_count_exclusive)
    errors.push_back("step_count too small for horizon bounds (need > " +
                     std::to_string(min_step_count_exclusive) + ")");
  if (cfg.run_count < 1) errors.push_back("run_count must be >= 1");
  if (cfg.broker_fee < 0.0 || cfg.broker_fee >= 1.0)
    errors.push_back("broker_fee must be in [0, 1)");
  if (cfg.annual_risk_free < 0.0)
    errors.push_back("annual_risk_free must be >= 0");
  if (cfg.annual_dividend < 0.0)
    errors.push_back("annual_dividend must be >= 0");
  if (cfg.gesture_scalar <= 0.0)
    errors.push_back("gesture_scalar must be > 0");
  if (cfg.fundamental_amplitude <= 0.0)
    errors.push_back("fundamental_amplitude must be > 0");
  return errors;
}

// Structural sanity only: what the engine itself needs to run. Deliberately
// weaker than validate_config so degenerate fixtures (e.g. step_count equal
// to one week, where no agent ever passes warm-up) stay runnable.
inline std::vector<std::string> validate_runtime(const SimConfig& cfg) {
  std::vector<std::string> errors;
  if (cfg.agent_count < 1) errors.push_back("agent_count must be >= 1");
  if (cfg.stock_count < 1) errors.push_back("stock_count must be >= 1");
  if (cfg.step_count < 2) errors.push_back("step_count must be >= 2");
  if (cfg.broker_fee < 0.0 || cfg.broker_fee >= 1.0)
    errors.push_back("broker_fee must be in [0, 1)");
  if (cfg.fundamental_amplitude < 0.0)
    errors.push_back("fundamental_amplitude must be >= 0");
  return errors;
}

}  // namespace marsim
