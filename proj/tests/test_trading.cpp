#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "marsim/rng.hpp"
#include "marsim/trading.hpp"
#include "marsim/window.hpp"

using namespace marsim;
using Catch::Approx;

TEST_CASE("trade state codec covers all 108 states bijectively") {
  bool seen[108] = {};
  for (int d = 0; d < 3; ++d)
    for (int v = 0; v < 3; ++v)
      for (int b = 0; b < 2; ++b)
        for (int e = 0; e < 2; ++e)
          for (int r = 0; r < 3; ++r) {
            trade::StateParts s{d, v, b, e, r};
            const int index = trade::encode_state(s);
            REQUIRE(index >= 0);
            REQUIRE(index < 108);
            REQUIRE_FALSE(seen[index]);
            seen[index] = true;
            const auto back = trade::decode_state(index);
            REQUIRE(back.direction == d);
            REQUIRE(back.long_vol == v);
            REQUIRE(back.bonds_health == b);
            REQUIRE(back.equity_health == e);
            REQUIRE(back.volume_regime == r);
          }
}

TEST_CASE("order prices concede by the gestured spread") {
  // H=105, P=100, g=0.5, S_prev=2 -> bids 101/100/99 and asks 104/105/106
  for (int stance = 0; stance < 3; ++stance) {
    const double bid = trade::bid_price(105.0, 100.0, 0.5, 2.0, stance);
    const double ask = trade::ask_price(105.0, 100.0, 0.5, 2.0, stance);
    REQUIRE(bid == Approx(101.0 - stance));
    REQUIRE(ask == Approx(104.0 + stance));
  }
}

TEST_CASE("buy quantity floors bonds over ask price times stock count") {
  const auto intent = trade::action_to_order(2, 1, 100.0, 100.0, 0.0, 0.5,
                                             0, 10000.0, 4);
  REQUIRE(intent.present);
  REQUIRE(intent.side == trade::Side::bid);
  REQUIRE(intent.quantity == 25);
}

TEST_CASE("hold action and degenerate inputs produce no order") {
  REQUIRE_FALSE(trade::action_to_order(1, 0, 105.0, 100.0, 2.0, 0.5, 10,
                                       10000.0, 1)
                    .present);
  // empty holdings cannot sell
  REQUIRE_FALSE(
      trade::action_to_order(0, 1, 105.0, 100.0, 2.0, 0.5, 0, 10000.0, 1)
          .present);
  // empty bonds cannot buy
  REQUIRE_FALSE(
      trade::action_to_order(2, 1, 105.0, 100.0, 2.0, 0.5, 10, 0.0, 1)
          .present);
  // non-finite forecast holds
  REQUIRE_FALSE(trade::action_to_order(2, 1, std::nan(""), 100.0, 2.0, 0.5,
                                       10, 10000.0, 1)
                    .present);
}

TEST_CASE("sell offers the whole holding at the ask") {
  const auto intent =
      trade::action_to_order(0, 2, 105.0, 100.0, 2.0, 0.5, 37, 500.0, 1);
  REQUIRE(intent.present);
  REQUIRE(intent.side == trade::Side::ask);
  REQUIRE(intent.quantity == 37);
  REQUIRE(intent.price == Approx(106.0));
}

TEST_CASE("order prices stay strictly positive") {
  const auto intent =
      trade::action_to_order(0, 0, 0.02, 0.02, 100.0, 0.8, 5, 100.0, 1);
  REQUIRE(intent.present);
  REQUIRE(intent.price > 0.0);
}

TEST_CASE("gate compares the value percentile with the waited fraction") {
  REQUIRE(trade::gate_pass(0.4, 10, 20));        // 0.4 < 0.5
  REQUIRE_FALSE(trade::gate_pass(0.9, 1, 20));   // 0.9 >= 0.05
  REQUIRE(trade::gate_pass(0.999, 20, 20));      // ratio 1, percentile < 1
  REQUIRE_FALSE(trade::gate_pass(0.0, 0, 20));   // nothing waited yet
}

TEST_CASE("literal reward table matches the forecast mapping") {
  REQUIRE(trade::reward_from_percentile_literal(0.03) == 4);
  REQUIRE(trade::reward_from_percentile_literal(0.60) == -1);
  REQUIRE(trade::reward_from_percentile_literal(0.97) == -4);
}

TEST_CASE("inverted reward table rises with the cashflow percentile") {
  REQUIRE(trade::reward_from_percentile_inverted(0.03) == -4);
  REQUIRE(trade::reward_from_percentile_inverted(0.30) == -1);
  REQUIRE(trade::reward_from_percentile_inverted(0.60) == 1);
  REQUIRE(trade::reward_from_percentile_inverted(0.97) == 4);
  REQUIRE(trade::reward_from_percentile(0.97, false) == 4);
  REQUIRE(trade::reward_from_percentile(0.97, true) == -4);
}

TEST_CASE("cashflow is quantity times the move since the fill") {
  REQUIRE(trade::realized_cashflow(10, 100.0, 105.0) == Approx(50.0));
  REQUIRE(trade::realized_cashflow(0, 100.0, 105.0) == 0.0);
}

TEST_CASE("hindsight favors buying ahead of a rise") {
  trade::DecisionContext ctx;
  ctx.forecast = 100.0;
  ctx.price = 100.0;
  ctx.spread_prev = 1.0;
  ctx.bonds = 10000.0;
  ctx.holdings = 5;
  ctx.gesture = 0.5;
  ctx.stock_count = 1;
  const int best = trade::best_action_hindsight(ctx, 110.0);
  REQUIRE(trade::decode_action(best).kind == 2);
}

TEST_CASE("flat price and zero spread tie every action at zero") {
  trade::DecisionContext ctx;
  ctx.forecast = 100.0;
  ctx.price = 100.0;
  ctx.spread_prev = 0.0;
  ctx.bonds = 10000.0;
  ctx.holdings = 5;
  ctx.gesture = 0.5;
  ctx.stock_count = 1;
  for (int a = 0; a < trade::action_count; ++a)
    REQUIRE(trade::hypothetical_cashflow(ctx, a, 100.0) == 0.0);
  REQUIRE(trade::best_action_hindsight(ctx, 100.0) == 0);
}

TEST_CASE("hindsight choice dominates all eight alternatives") {
  Rng rng(77);
  for (int round = 0; round < 500; ++round) {
    trade::DecisionContext ctx;
    ctx.price = rng.uniform(50.0, 150.0);
    ctx.forecast = ctx.price * rng.uniform(0.8, 1.2);
    ctx.spread_prev = rng.uniform(0.0, 5.0);
    ctx.bonds = rng.uniform(0.0, 20000.0);
    ctx.holdings = rng.uniform_int(0, 200);
    ctx.gesture = rng.uniform(0.2, 2.4);
    ctx.stock_count = static_cast<int>(rng.uniform_int(1, 4));
    const double realized = ctx.price * rng.uniform(0.7, 1.3);
    const int best = trade::best_action_hindsight(ctx, realized);
    const double best_cf = trade::hypothetical_cashflow(ctx, best, realized);
    for (int a = 0; a < trade::action_count; ++a)
      REQUIRE(best_cf >= trade::hypothetical_cashflow(ctx, a, realized));
  }
}

TEST_CASE("ask and bid only cross under a soft stance with a wide spread") {
  // a1 in {1,2}: ask >= bid whenever H != P
  Rng rng(13);
  for (int round = 0; round < 500; ++round) {
    const double price = rng.uniform(50.0, 150.0);
    const double forecast = price * rng.uniform(0.8, 1.2);
    const double spread = rng.uniform(0.0, 5.0);
    const double g = rng.uniform(0.2, 2.4);
    for (int stance = 1; stance < 3; ++stance) {
      const double bid = trade::bid_price(forecast, price, g, spread, stance);
      const double ask = trade::ask_price(forecast, price, g, spread, stance);
      REQUIRE(ask >= bid - 1e-12);
    }
  }
}
