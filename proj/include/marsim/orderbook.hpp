#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "marsim/agents.hpp"
#include "marsim/config.hpp"

namespace marsim {

// Engine-side origin of an order; the matcher itself ignores it.
enum class OrderTag { policy = 0, horizon_exit = 1 };

struct BookOrder {
  int agent = -1;
  int stock = 0;
  double price = 0.0;
  long long quantity = 0;
  long long sequence = 0;  // submission order, used for tie-breaking
  OrderTag tag = OrderTag::policy;
};

struct Trade {
  int buyer = -1;
  int seller = -1;
  int stock = 0;
  double price = 0.0;  // mid-price of the matched bid and ask
  long long quantity = 0;
  OrderTag buyer_tag = OrderTag::policy;
  OrderTag seller_tag = OrderTag::policy;
};

// One stock's cleared step: matched trades plus the next step's market state.
struct OrderBookFrame {
  std::vector<Trade> trades;
  double next_price = 0.0;
  long long next_volume = 0;
  double next_spread = 0.0;
};

// Batch double-auction clearing. Bids sort by descending price, asks by
// ascending price (ties by submission sequence); matching walks from the
// top while the best bid is at or above the best ask, each match trading
// the smaller residual at mid-price. The next market price is the last
// (lowest-level) cleared mid-price, or the previous price if nothing
// trades. The spread is the absolute gap between the mean submitted bid
// price and the mean submitted ask price.
inline OrderBookFrame clear(std::vector<BookOrder> bids,
                            std::vector<BookOrder> asks, double prev_price) {
  OrderBookFrame frame;
  frame.next_price = prev_price;

  if (!bids.empty() && !asks.empty()) {
    double bid_mean = 0.0;
    for (const auto& order : bids) bid_mean += order.price;
    bid_mean /= static_cast<double>(bids.size());
    double ask_mean = 0.0;
    for (const auto& order : asks) ask_mean += order.price;
    ask_mean /= static_cast<double>(asks.size());
    frame.next_spread = std::fabs(bid_mean - ask_mean);
  }

  std::sort(bids.begin(), bids.end(), [](const BookOrder& a, const BookOrder& b) {
    if (a.price != b.price) return a.price > b.price;
    return a.sequence < b.sequence;
  });
  std::sort(asks.begin(), asks.end(), [](const BookOrder& a, const BookOrder& b) {
    if (a.price != b.price) return a.price < b.price;
    return a.sequence < b.sequence;
  });

  std::size_t bi = 0;
  std::size_t ai = 0;
  while (bi < bids.size() && ai < asks.size() &&
         bids[bi].price >= asks[ai].price) {
    BookOrder& bid = bids[bi];
    BookOrder& ask = asks[ai];
    const long long quantity = std::min(bid.quantity, ask.quantity);
    Trade trade;
    trade.buyer = bid.agent;
    trade.seller = ask.agent;
    trade.stock = bid.stock;
    trade.price = 0.5 * (bid.price + ask.price);
    trade.quantity = quantity;
    trade.buyer_tag = bid.tag;
    trade.seller_tag = ask.tag;
    frame.trades.push_back(trade);
    frame.next_volume += quantity;
    frame.next_price = trade.price;
    bid.quantity -= quantity;
    ask.quantity -= quantity;
    if (bid.quantity == 0) ++bi;
    if (ask.quantity == 0) ++ai;
  }
  return frame;
}

struct SettledTrade {
  Trade trade;                  // quantity after any solvency clipping
  long long clipped_away = 0;   // shares removed from the matched quantity
};

struct SettleReport {
  std::vector<SettledTrade> settled;
  double fees = 0.0;
  long long shares_settled = 0;
};

// Applies a cleared frame to the agents: cash against shares at the trade
// price, the broker fee debited from both counterparties, elapsed-trade
// counters reset, and the buyer's open-position log extended (sells retire
// positions FIFO). A buyer whose bonds cannot cover a match has the
// quantity clipped downward at settlement.
inline SettleReport settle(const OrderBookFrame& frame,
                           std::vector<AgentState>& agents,
                           const SimConfig& cfg, int step) {
  SettleReport report;
  for (const Trade& trade : frame.trades) {
    AgentState& buyer = agents[trade.buyer];
    AgentState& seller = agents[trade.seller];
    const double unit_cost = trade.price * (1.0 + cfg.broker_fee);
    long long quantity = trade.quantity;
    const long long affordable =
        unit_cost > 0.0
            ? static_cast<long long>(std::floor(buyer.bonds / unit_cost))
            : quantity;
    SettledTrade entry;
    entry.trade = trade;
    if (affordable < quantity) {
      entry.clipped_away = quantity - affordable;
      quantity = affordable;
      entry.trade.quantity = quantity;
    }
    if (quantity <= 0) {
      report.settled.push_back(entry);
      continue;
    }
    if (seller.holdings[trade.stock] < quantity)
      throw std::logic_error("settle: seller lacks shares");

    const double value = static_cast<double>(quantity) * trade.price;
    buyer.bonds -= value * (1.0 + cfg.broker_fee);
    buyer.holdings[trade.stock] += quantity;
    seller.holdings[trade.stock] -= quantity;
    seller.bonds += value * (1.0 - cfg.broker_fee);
    report.fees += 2.0 * value * cfg.broker_fee;
    report.shares_settled += quantity;

    buyer.since_trade[trade.stock] = 0;
    seller.since_trade[trade.stock] = 0;

    buyer.open_positions[trade.stock].push_back(
        {quantity, trade.price, step});
    long long to_close = quantity;
    auto& positions = seller.open_positions[trade.stock];
    while (to_close > 0 && !positions.empty()) {
      OpenPosition& front = positions.front();
      const long long closed = std::min(front.quantity, to_close);
      front.quantity -= closed;
      to_close -= closed;
      if (front.quantity == 0) positions.erase(positions.begin());
    }
    report.settled.push_back(entry);
  }
  return report;
}

}  // namespace marsim
