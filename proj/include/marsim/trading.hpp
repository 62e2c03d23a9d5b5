#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace marsim::trade {

inline constexpr int state_count = 108;  // 3 * 3 * 2 * 2 * 3
inline constexpr int action_count = 9;   // 3 * 3

// State components: forecast direction {0,1,2}, long volatility {0,1,2},
// bonds health {0,1}, equity health {0,1}, volume regime {0,1,2}.
struct StateParts {
  int direction = 1;
  int long_vol = 0;
  int bonds_health = 1;
  int equity_health = 1;
  int volume_regime = 0;
};

inline int encode_state(const StateParts& s) {
  return ((s.direction * 3 + s.long_vol) * 2 + s.bonds_health) * 6 +
         s.equity_health * 3 + s.volume_regime;
}

inline StateParts decode_state(int index) {
  StateParts s;
  s.volume_regime = index % 3;
  index /= 3;
  s.equity_health = index % 2;
  index /= 2;
  s.bonds_health = index % 2;
  index /= 2;
  s.long_vol = index % 3;
  s.direction = index / 3;
  return s;
}

// Action components: kind (0 sell-all, 1 hold, 2 buy), stance (price
// flexibility 0 soft / 1 neutral / 2 hard).
struct ActionParts {
  int kind = 1;
  int stance = 1;
};

inline int encode_action(const ActionParts& a) { return a.kind * 3 + a.stance; }

inline ActionParts decode_action(int index) { return {index / 3, index % 3}; }

// Bid concedes upward from the lower of forecast and price; ask concedes
// downward from the higher. The gesture g scales the previous spread.
inline double bid_price(double forecast, double price, double gesture,
                        double spread_prev, int stance) {
  const double base = std::min(forecast, price);
  const double concession = gesture * spread_prev;
  double bid = base;
  if (stance == 0) bid = base + concession;
  if (stance == 2) bid = base - concession;
  return std::max(bid, 0.01);
}

inline double ask_price(double forecast, double price, double gesture,
                        double spread_prev, int stance) {
  const double base = std::max(forecast, price);
  const double concession = gesture * spread_prev;
  double ask = base;
  if (stance == 0) ask = base - concession;
  if (stance == 2) ask = base + concession;
  return std::max(ask, 0.01);
}

enum class Side { bid, ask };

struct OrderIntent {
  bool present = false;
  Side side = Side::bid;
  double price = 0.0;
  long long quantity = 0;
};

// Maps the sampled trade action onto a limit order. Sells offer the full
// current holding; buys request floor(bonds / (ask * J)) shares at the bid,
// the stock count J keeping room for the other legs of the portfolio.
inline OrderIntent action_to_order(int kind, int stance, double forecast,
                                   double price, double spread_prev,
                                   double gesture, long long holdings,
                                   double bonds, int stock_count) {
  OrderIntent intent;
  if (!std::isfinite(forecast) || kind == 1) return intent;
  if (kind == 0) {
    if (holdings <= 0) return intent;
    intent.present = true;
    intent.side = Side::ask;
    intent.price = ask_price(forecast, price, gesture, spread_prev, stance);
    intent.quantity = holdings;
    return intent;
  }
  const double ask = ask_price(forecast, price, gesture, spread_prev, stance);
  if (bonds <= 0.0 || ask <= 0.0) return intent;
  const long long quantity =
      static_cast<long long>(std::floor(bonds / (ask * stock_count)));
  if (quantity <= 0) return intent;
  intent.present = true;
  intent.side = Side::bid;
  intent.price = bid_price(forecast, price, gesture, spread_prev, stance);
  intent.quantity = quantity;
  return intent;
}

// Entry-timing filter: pass when the percentile of the current best action
// value sits below the fraction of the trading window already waited out.
// Exits are never filtered.
inline bool gate_pass(double value_percentile, int since_trade,
                      int trading_window) {
  return value_percentile <
         static_cast<double>(since_trade) / trading_window;
}

// Literal shared table from the forecast algorithm: low cashflow percentile
// earns the top reward.
inline int reward_from_percentile_literal(double p) {
  if (p < 0.05) return 4;
  if (p < 0.25) return 2;
  if (p < 0.50) return 1;
  if (p < 0.75) return -1;
  if (p < 0.95) return -2;
  return -4;
}

// Default mapping: reward rises with the realized cashflow percentile.
inline int reward_from_percentile_inverted(double p) {
  if (p < 0.05) return -4;
  if (p < 0.25) return -2;
  if (p < 0.50) return -1;
  if (p < 0.75) return 1;
  if (p < 0.95) return 2;
  return 4;
}

inline int reward_from_percentile(double p, bool literal_map) {
  return literal_map ? reward_from_percentile_literal(p)
                     : reward_from_percentile_inverted(p);
}

// Cashflow attributed to a cleared transaction once the horizon has passed:
// quantity times the price move since the fill.
inline double realized_cashflow(long long cleared_quantity,
                                double cleared_price, double price_now) {
  return static_cast<double>(cleared_quantity) * (price_now - cleared_price);
}

// Everything needed to replay a trading decision with hindsight.
struct DecisionContext {
  double forecast = 0.0;     // H at the decision step
  double price = 0.0;        // P at the decision step
  double spread_prev = 0.0;  // S one step before the decision
  double bonds = 0.0;
  long long holdings = 0;
  double gesture = 0.5;
  int stock_count = 1;
};

// Cashflow an action would have produced had its order cleared in full at
// its own limit price.
inline double hypothetical_cashflow(const DecisionContext& ctx, int action,
                                    double realized_price) {
  const ActionParts parts = decode_action(action);
  const OrderIntent intent = action_to_order(
      parts.kind, parts.stance, ctx.forecast, ctx.price, ctx.spread_prev,
      ctx.gesture, ctx.holdings, ctx.bonds, ctx.stock_count);
  if (!intent.present) return 0.0;
  return realized_cashflow(intent.quantity, intent.price, realized_price);
}

// Exhaustive search over the 9 actions; ties go to the lowest index.
inline int best_action_hindsight(const DecisionContext& ctx,
                                 double realized_price) {
  int best = 0;
  double best_cashflow = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < action_count; ++a) {
    const double cashflow = hypothetical_cashflow(ctx, a, realized_price);
    if (cashflow > best_cashflow) {
      best_cashflow = cashflow;
      best = a;
    }
  }
  return best;
}

}  // namespace marsim::trade
