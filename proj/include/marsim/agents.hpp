#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "marsim/config.hpp"
#include "marsim/rng.hpp"

namespace marsim {

// Behavioral parameters drawn once per agent at initialization.
struct AgentParams {
  double initial_bonds = 0.0;
  double drawdown_limit = 0.55;  // l, after threshold shift and clamping
  double reflexivity = 0.5;      // rho
  int horizon = 21;              // tau, days until positions are liquidated
  int trading_window = 5;        // w, entry-timing denominator
  int memory = 5;                // h, rolling window capacity
  double gesture = 0.5;          // g, already scaled by zeta
  double learning_rate = 0.1;    // beta
};

// An open long position waiting for its horizon exit.
struct OpenPosition {
  long long quantity = 0;
  double price = 0.0;
  int entry_step = 0;
};

struct AgentState {
  AgentParams params;
  double bonds = 0.0;
  std::vector<long long> holdings;  // Q per stock, long-only
  double initial_equity = 0.0;      // sum_j Q(0) P(0), for the equity-health state
  double year_peak_nav = 0.0;
  bool bankrupt = false;
  int bankrupt_step = -1;
  std::vector<int> since_trade;  // k per stock, reset on every cleared trade
  std::vector<std::vector<OpenPosition>> open_positions;  // per stock, FIFO
};

// Fixed draw order: bonds, holdings per stock, drawdown limit, reflexivity,
// horizon, trading window, memory, gesture, learning rate. The gesture
// scalar and drawdown threshold modify the drawn values without consuming
// extra draws, so hyperparameter changes leave the stream aligned.
inline AgentState init_agent(const SimConfig& cfg, Rng& rng) {
  using namespace calendar;
  AgentState agent;
  agent.params.initial_bonds = rng.half_normal(1e4);
  agent.bonds = agent.params.initial_bonds;
  agent.holdings.resize(cfg.stock_count);
  for (int j = 0; j < cfg.stock_count; ++j)
    agent.holdings[j] = static_cast<long long>(std::llround(rng.half_normal(100.0)));
  const double raw_limit = rng.uniform(0.5, 0.6);
  agent.params.drawdown_limit =
      std::clamp(raw_limit + cfg.drawdown_threshold / 100.0, 0.01, 0.99);
  agent.params.reflexivity = rng.uniform(0.0, 1.0);
  agent.params.horizon =
      static_cast<int>(rng.uniform_int(days_per_week, 6 * days_per_month));
  agent.params.trading_window =
      static_cast<int>(rng.uniform_int(days_per_week, agent.params.horizon));
  const int memory_high = std::max(
      days_per_week,
      cfg.step_count - agent.params.horizon - 2 * days_per_week);
  agent.params.memory =
      static_cast<int>(rng.uniform_int(days_per_week, memory_high));
  agent.params.gesture = cfg.gesture_scalar * rng.uniform(0.2, 0.8);
  agent.params.learning_rate = rng.uniform(0.05, 0.20);
  agent.since_trade.assign(cfg.stock_count, 0);
  agent.open_positions.resize(cfg.stock_count);
  return agent;
}

inline std::vector<AgentState> init_agents(const SimConfig& cfg,
                                           std::uint64_t run_index) {
  std::vector<AgentState> agents;
  agents.reserve(cfg.agent_count);
  for (int i = 0; i < cfg.agent_count; ++i) {
    Rng rng(derive_seed(cfg.master_seed, run_index, i,
                        StreamPurpose::agent_init));
    agents.push_back(init_agent(cfg, rng));
  }
  return agents;
}

inline double net_asset_value(const AgentState& agent,
                              const std::vector<double>& prices) {
  double nav = agent.bonds;
  for (std::size_t j = 0; j < agent.holdings.size(); ++j)
    nav += static_cast<double>(agent.holdings[j]) * prices[j];
  return nav;
}

// Peak-to-bottom drawdown since the start of the year against the agent's
// limit. A non-positive peak means a degenerate portfolio: bankrupt.
inline bool check_bankruptcy(const AgentState& agent, double nav) {
  if (agent.year_peak_nav <= 0.0) return true;
  return (agent.year_peak_nav - nav) / agent.year_peak_nav >
         agent.params.drawdown_limit;
}

struct AccrualAmounts {
  double interest = 0.0;
  double dividends = 0.0;
};

// Daily risk-free compounding on bonds plus dividends credited in cash at
// the daily fraction of the annual yield on current stock value.
inline AccrualAmounts accrue(AgentState& agent,
                             const std::vector<double>& prices,
                             const SimConfig& cfg) {
  AccrualAmounts amounts;
  const double growth =
      std::pow(1.0 + cfg.annual_risk_free, 1.0 / calendar::days_per_year);
  amounts.interest = agent.bonds * (growth - 1.0);
  for (std::size_t j = 0; j < agent.holdings.size(); ++j)
    amounts.dividends += static_cast<double>(agent.holdings[j]) * prices[j] *
                         cfg.annual_dividend / calendar::days_per_year;
  agent.bonds += amounts.interest + amounts.dividends;
  return amounts;
}

}  // namespace marsim
