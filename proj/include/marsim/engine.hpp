#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include "marsim/agents.hpp"
#include "marsim/config.hpp"
#include "marsim/forecast.hpp"
#include "marsim/fundamentals.hpp"
#include "marsim/orderbook.hpp"
#include "marsim/policy.hpp"
#include "marsim/rng.hpp"
#include "marsim/series_stats.hpp"
#include "marsim/trading.hpp"
#include "marsim/window.hpp"

namespace marsim {

struct StockSeries {
  std::vector<double> price;
  std::vector<double> volume;
  std::vector<double> spread;
};

struct AgentSummary {
  int agent_id = 0;
  AgentParams params;
  double final_nav = 0.0;
  bool bankrupt = false;
  int bankrupt_step = -1;
  std::vector<double> annual_returns;
};

// Counters from re-checking every hindsight pick against exhaustive
// enumeration (enabled via verify_hindsight).
struct HindsightAudit {
  long long forecast_checks = 0;
  long long forecast_violations = 0;
  long long trade_checks = 0;
  long long trade_violations = 0;
};

struct StepReport {
  double interest = 0.0;
  double dividends = 0.0;
  double fees = 0.0;
  long long shares_settled = 0;
  int trades = 0;
};

struct RunResult {
  SimConfig config;
  std::uint64_t seed = 0;
  std::vector<StockSeries> market;             // per stock, series length T
  std::vector<std::vector<double>> fundamentals;
  std::vector<double> nav;                     // [agent * T + t]
  std::vector<std::pair<int, int>> bankruptcies;  // (agent, step)
  std::vector<AgentSummary> agents;
  HindsightAudit audit;

  double nav_at(int agent, int t) const {
    return nav[static_cast<std::size_t>(agent) * config.step_count + t];
  }
};

namespace detail {

// Rolling mean of the last `capacity` pushed values.
class RollingMean {
 public:
  explicit RollingMean(int capacity) : buffer_(std::max(capacity, 1)) {}

  void push(double x) {
    if (count_ == buffer_.size()) {
      sum_ -= buffer_[head_];
    } else {
      ++count_;
    }
    buffer_[head_] = x;
    sum_ += x;
    head_ = (head_ + 1) % buffer_.size();
  }

  double mean() const { return count_ ? sum_ / static_cast<double>(count_) : 0.0; }

 private:
  std::vector<double> buffer_;
  std::size_t head_ = 0;
  std::size_t count_ = 0;
  double sum_ = 0.0;
};

struct ForecastRecord {
  int t = 0;
  int state = 0;
  int action = 0;
  double forecast = 0.0;
  double view_value = 0.0;
};

struct TradeRecord {
  int t = 0;
  int state = 0;
  int action = 0;
  trade::DecisionContext ctx;
};

struct PendingTradeReward {
  int due = 0;
  int state = 0;
  int action = 0;
  long long quantity = 0;
  double price = 0.0;
};

struct PerStockRuntime {
  PerStockRuntime(int memory, int horizon)
      : sigma_long(memory),
        sigma_short(memory),
        error(memory),
        mu_neg(memory),
        mu_pos(memory),
        volume(memory),
        gate(memory),
        cashflow(memory),
        gap(3 * horizon + 1) {}

  BiasedView view;
  RollingPercentileWindow sigma_long;
  RollingPercentileWindow sigma_short;
  RollingPercentileWindow error;
  RollingPercentileWindow mu_neg;
  RollingPercentileWindow mu_pos;
  RollingPercentileWindow volume;
  RollingPercentileWindow gate;
  RollingPercentileWindow cashflow;
  RollingMean gap;
  std::deque<ForecastRecord> forecasts;
  std::deque<TradeRecord> decisions;
  std::deque<PendingTradeReward> pending;
};

struct AgentRuntime {
  AgentRuntime(const SimConfig& cfg, const AgentParams& params, Rng decide_rng)
      : decide(decide_rng),
        policy_forecast(forecast::state_count, forecast::action_count),
        policy_trade(trade::state_count, trade::action_count),
        action_values(trade::state_count, trade::action_count),
        offpolicy_period(params.horizon / calendar::days_per_month + 2) {
    stocks.reserve(cfg.stock_count);
    for (int j = 0; j < cfg.stock_count; ++j)
      stocks.emplace_back(params.memory, params.horizon);
  }

  Rng decide;
  PolicyTable policy_forecast;
  PolicyTable policy_trade;
  ActionValueTable action_values;
  std::vector<PerStockRuntime> stocks;
  std::vector<Rng> view_rngs;
  int first_active = -1;
  int offpolicy_period;
};

}  // namespace detail

// One seeded simulation run, driven step by step. Each step is one trading
// day: accrual, per-agent forecasting and order formation, per-stock batch
// clearing and settlement, reward delivery and policy updates, then the
// bankruptcy sweep at the new prices.
class Simulation {
 public:
  Simulation(const SimConfig& config, std::uint64_t seed,
             bool verify_hindsight = false, std::ostream* trace = nullptr)
      : cfg_(config), seed_(seed), verify_(verify_hindsight), trace_(trace) {
    cfg_.master_seed = seed;
    auto errors = validate_runtime(cfg_);
    if (!errors.empty())
      throw std::invalid_argument("invalid config: " + errors.front());

    const int T = cfg_.step_count;
    const int J = cfg_.stock_count;
    const int I = cfg_.agent_count;

    fundamentals_.reserve(J);
    market_.resize(J);
    prefix_.reserve(J);
    for (int j = 0; j < J; ++j) {
      Rng frng(derive_seed(seed_, 0, j, StreamPurpose::fundamental));
      fundamentals_.push_back(
          generate_fundamental(T, cfg_.fundamental_amplitude, frng).values);
      market_[j].price.assign(T, 0.0);
      market_[j].volume.assign(T, 0.0);
      market_[j].spread.assign(T, 0.0);
      market_[j].price[0] = 100.0;
      prefix_.emplace_back(100.0);
      prefix_[j].push(100.0);
    }

    agents_ = init_agents(cfg_, 0);
    runtimes_.reserve(I);
    nav_.assign(static_cast<std::size_t>(I) * T, 0.0);
    std::vector<double> p0(J, 100.0);
    for (int i = 0; i < I; ++i) {
      AgentState& agent = agents_[i];
      agent.initial_equity = 0.0;
      for (int j = 0; j < J; ++j)
        agent.initial_equity += static_cast<double>(agent.holdings[j]) * 100.0;
      runtimes_.emplace_back(
          cfg_, agent.params,
          Rng(derive_seed(seed_, 0, i, StreamPurpose::agent_decide)));
      for (int j = 0; j < J; ++j)
        runtimes_[i].view_rngs.emplace_back(derive_seed(
            seed_, 0, (static_cast<std::uint64_t>(i) << 16) | j,
            StreamPurpose::agent_view));
      const double nav0 = net_asset_value(agent, p0);
      nav_[static_cast<std::size_t>(i) * T] = nav0;
      agent.year_peak_nav = nav0;
    }
  }

  int current_step() const { return t_; }
  bool done() const { return t_ >= cfg_.step_count - 1; }
  const SimConfig& config() const { return cfg_; }
  const std::vector<AgentState>& agents() const { return agents_; }
  const StockSeries& market(int j) const { return market_[j]; }
  const PolicyTable& forecast_policy(int i) const {
    return runtimes_[i].policy_forecast;
  }
  const PolicyTable& trade_policy(int i) const {
    return runtimes_[i].policy_trade;
  }
  const HindsightAudit& audit() const { return audit_; }

  StepReport step() {
    if (done()) throw std::logic_error("step: run already finished");
    const int t = t_;
    const int J = cfg_.stock_count;
    const int I = cfg_.agent_count;
    StepReport report;

    std::vector<double> price_now(J);
    for (int j = 0; j < J; ++j) price_now[j] = market_[j].price[t];

    // (1) interest and dividends
    for (auto& agent : agents_) {
      if (agent.bankrupt) continue;
      const AccrualAmounts amounts = accrue(agent, price_now, cfg_);
      report.interest += amounts.interest;
      report.dividends += amounts.dividends;
    }

    // (2)+(3) forecasting and order formation
    std::vector<std::vector<BookOrder>> bids(J), asks(J);
    long long sequence = 0;
    for (int i = 0; i < I; ++i) {
      AgentState& agent = agents_[i];
      if (agent.bankrupt) continue;
      detail::AgentRuntime& rt = runtimes_[i];
      const AgentParams& par = agent.params;
      const int tau = par.horizon;

      double equity_now = 0.0;
      for (int j = 0; j < J; ++j)
        equity_now += static_cast<double>(agent.holdings[j]) * price_now[j];

      for (int j = 0; j < J; ++j) {
        detail::PerStockRuntime& ps = rt.stocks[j];
        const double price = price_now[j];
        const double view_value =
            ps.view.step(fundamentals_[j][t], rt.view_rngs[j]);
        ps.gap.push(std::fabs(price - view_value) / price);

        double sigma_long_pct = 0.0;
        if (t >= tau) {
          const double sigma_short = prefix_[j].variance(t - tau, t);
          ps.sigma_short.insert(sigma_short);
        }
        bool have_sigma_long = false;
        if (t >= 3 * tau) {
          const double sigma_long = prefix_[j].variance(t - 3 * tau, t);
          ps.sigma_long.insert(sigma_long);
          sigma_long_pct = ps.sigma_long.percentile_of(sigma_long);
          have_sigma_long = true;
        }
        ps.volume.insert(market_[j].volume[t]);

        if (t < forecast::warmup_steps(tau)) continue;
        if (rt.first_active < 0) rt.first_active = t;

        // forecast state and action
        forecast::StateParts fs;
        fs.long_vol = forecast::band_of(sigma_long_pct, 0.25, 0.75);
        {
          const double sigma_short = prefix_[j].variance(t - tau, t);
          fs.short_vol = forecast::band_of(
              ps.sigma_short.percentile_of(sigma_short), 0.25, 0.75);
        }
        fs.gap_band = forecast::band_of(ps.gap.mean(), 0.10, 0.30);
        const int f_state = forecast::encode_state(fs);
        const int f_action =
            cfg_.noise_agent_mode
                ? static_cast<int>(rt.decide.uniform_int(0, 26))
                : rt.policy_forecast.sample(f_state, rt.decide);
        const forecast::ActionParts fa = forecast::decode_action(f_action);
        const int interval = forecast::interval_days(fa.interval, tau);
        const double technical =
            forecast::technical_forecast(prefix_[j], t, fa.tool, interval);
        double forecast_price = forecast::blend_forecast(
            technical, view_value, par.reflexivity, fa.blend);
        if (!std::isfinite(forecast_price)) forecast_price = price;
        forecast_price = std::max(forecast_price, 0.01);
        if (!cfg_.noise_agent_mode)
          ps.forecasts.push_back(
              {t, f_state, f_action, forecast_price, view_value});

        // trade state
        trade::StateParts ts;
        const double mu = (forecast_price - price) / price;
        if (mu < 0.0) {
          ps.mu_neg.insert(mu);
          ts.direction = ps.mu_neg.percentile_of(mu) < 0.95 ? 0 : 1;
        } else {
          ps.mu_pos.insert(mu);
          ts.direction = ps.mu_pos.percentile_of(mu) < 0.05 ? 1 : 2;
        }
        ts.long_vol = have_sigma_long
                          ? forecast::band_of(sigma_long_pct, 0.33, 0.67)
                          : 0;
        ts.bonds_health =
            agent.bonds < 0.6 * par.initial_bonds ? 0 : 1;
        ts.equity_health = equity_now < 0.6 * agent.initial_equity ? 0 : 1;
        if (market_[j].volume[t] == 0.0)
          ts.volume_regime = 0;
        else
          ts.volume_regime =
              ps.volume.percentile_of(market_[j].volume[t]) < 0.33 ? 1 : 2;
        const int t_state = trade::encode_state(ts);
        const int t_action =
            cfg_.noise_agent_mode
                ? static_cast<int>(rt.decide.uniform_int(0, 8))
                : rt.policy_trade.sample(t_state, rt.decide);
        const trade::ActionParts ta = trade::decode_action(t_action);

        // entry-timing filter value
        const double gate_value = rt.action_values.max_value(t_state);
        ps.gate.insert(gate_value);
        const double gate_pct = ps.gate.percentile_of(gate_value);

        const double spread_prev = t >= 1 ? market_[j].spread[t - 1] : 0.0;

        if (!cfg_.noise_agent_mode) {
          trade::DecisionContext ctx;
          ctx.forecast = forecast_price;
          ctx.price = price;
          ctx.spread_prev = spread_prev;
          ctx.bonds = agent.bonds;
          ctx.holdings = agent.holdings[j];
          ctx.gesture = par.gesture;
          ctx.stock_count = J;
          ps.decisions.push_back({t, t_state, t_action, ctx});
        }

        // horizon exits first; they are never filtered and cap what an
        // additional policy sell may offer
        long long sellable = agent.holdings[j];
        long long exit_quantity = 0;
        for (const OpenPosition& pos : agent.open_positions[j])
          if (pos.entry_step + tau <= t) exit_quantity += pos.quantity;
        exit_quantity = std::min(exit_quantity, sellable);
        if (exit_quantity > 0) {
          BookOrder order;
          order.agent = i;
          order.stock = j;
          order.price = std::max(std::max(forecast_price, price), 0.01);
          order.quantity = exit_quantity;
          order.sequence = sequence++;
          order.tag = OrderTag::horizon_exit;
          asks[j].push_back(order);
          sellable -= exit_quantity;
        }

        trade::OrderIntent intent = trade::action_to_order(
            ta.kind, ta.stance, forecast_price, price, spread_prev,
            par.gesture, sellable, agent.bonds, J);
        if (intent.present) {
          const bool is_entry = intent.side == trade::Side::bid;
          const bool pass =
              !is_entry || trade::gate_pass(gate_pct, agent.since_trade[j],
                                            par.trading_window);
          if (pass) {
            BookOrder order;
            order.agent = i;
            order.stock = j;
            order.price = intent.price;
            order.quantity = intent.quantity;
            order.sequence = sequence++;
            order.tag = OrderTag::policy;
            (is_entry ? bids[j] : asks[j]).push_back(order);
          }
        }
        if (trace_) {
          *trace_ << t << ',' << i << ',' << j << ",forecast," << f_state
                  << ',' << f_action << ',' << forecast_price << ",\n"
                  << t << ',' << i << ',' << j << ",trade," << t_state << ','
                  << t_action << ',' << gate_pct << ",\n";
          if (exit_quantity > 0)
            *trace_ << t << ',' << i << ',' << j << ",order,exit,"
                    << exit_quantity << ','
                    << std::max(std::max(forecast_price, price), 0.01)
                    << ",\n";
          if (intent.present) {
            const bool is_entry = intent.side == trade::Side::bid;
            const bool pass =
                !is_entry || trade::gate_pass(gate_pct, agent.since_trade[j],
                                              par.trading_window);
            if (pass)
              *trace_ << t << ',' << i << ',' << j << ",order,"
                      << (is_entry ? "bid" : "ask") << ',' << intent.quantity
                      << ',' << intent.price << ",\n";
          }
        }
      }
    }

    // (4) clearing and settlement per stock
    for (int j = 0; j < J; ++j) {
      OrderBookFrame frame =
          clear(std::move(bids[j]), std::move(asks[j]), market_[j].price[t]);
      market_[j].price[t + 1] = frame.next_price;
      market_[j].volume[t + 1] = static_cast<double>(frame.next_volume);
      market_[j].spread[t + 1] = frame.next_spread;
      SettleReport settle_report = settle(frame, agents_, cfg_, t);
      report.fees += settle_report.fees;
      report.shares_settled += settle_report.shares_settled;
      for (const SettledTrade& fill : settle_report.settled) {
        if (fill.trade.quantity <= 0) continue;
        ++report.trades;
        if (cfg_.noise_agent_mode) continue;
        queue_trade_reward(fill.trade.buyer, j, fill.trade.buyer_tag, t,
                           fill.trade.quantity, fill.trade.price);
        queue_trade_reward(fill.trade.seller, j, fill.trade.seller_tag, t,
                           fill.trade.quantity, fill.trade.price);
      }
      prefix_[j].push(market_[j].price[t + 1]);
    }

    // (5) reward delivery, policy updates, off-policy hindsight updates
    if (!cfg_.noise_agent_mode) {
      for (int i = 0; i < I; ++i) {
        AgentState& agent = agents_[i];
        if (agent.bankrupt) continue;
        detail::AgentRuntime& rt = runtimes_[i];
        const AgentParams& par = agent.params;
        const int tau = par.horizon;
        const bool offpolicy_due =
            rt.first_active >= 0 && t > rt.first_active &&
            (t - rt.first_active) % rt.offpolicy_period == 0;
        for (int j = 0; j < J; ++j) {
          detail::PerStockRuntime& ps = rt.stocks[j];
          const double price_real = market_[j].price[t];

          while (!ps.forecasts.empty() && ps.forecasts.front().t < t - tau)
            ps.forecasts.pop_front();
          const bool have_forecast =
              !ps.forecasts.empty() && ps.forecasts.front().t == t - tau;
          if (have_forecast) {
            const detail::ForecastRecord& rec = ps.forecasts.front();
            const double error =
                std::fabs(rec.forecast - price_real) / price_real;
            ps.error.insert(error);
            const int reward = forecast::reward_from_percentile(
                ps.error.percentile_of(error));
            rt.policy_forecast.update(rec.state, rec.action, reward,
                                      par.learning_rate);
          }

          while (!ps.pending.empty() && ps.pending.front().due <= t) {
            const detail::PendingTradeReward due = ps.pending.front();
            ps.pending.pop_front();
            const double cashflow =
                trade::realized_cashflow(due.quantity, due.price, price_real);
            ps.cashflow.insert(cashflow);
            const int reward = trade::reward_from_percentile(
                ps.cashflow.percentile_of(cashflow),
                cfg_.literal_trade_reward_map);
            rt.policy_trade.update(due.state, due.action, reward,
                                   par.learning_rate);
            rt.action_values.record(due.state, due.action, cashflow);
          }

          while (!ps.decisions.empty() && ps.decisions.front().t < t - tau)
            ps.decisions.pop_front();

          if (!offpolicy_due) continue;
          if (have_forecast) {
            const detail::ForecastRecord& rec = ps.forecasts.front();
            const int best = forecast::best_action_hindsight(
                prefix_[j], rec.t, rec.view_value, par.reflexivity, tau,
                price_real);
            if (verify_)
              audit_forecast(rec, best, price_real, par.reflexivity, tau, j);
            rt.policy_forecast.update(rec.state, best, 4, par.learning_rate);
          }
          if (!ps.decisions.empty() && ps.decisions.front().t == t - tau) {
            const detail::TradeRecord& rec = ps.decisions.front();
            const int best = trade::best_action_hindsight(rec.ctx, price_real);
            if (verify_) audit_trade(rec, best, price_real);
            rt.policy_trade.update(rec.state, best, 4, par.learning_rate);
          }
        }
      }
    }

    // (6) NAV recording and bankruptcy sweep at the new prices
    std::vector<double> price_next(J);
    for (int j = 0; j < J; ++j) price_next[j] = market_[j].price[t + 1];
    const int T = cfg_.step_count;
    for (int i = 0; i < I; ++i) {
      AgentState& agent = agents_[i];
      const std::size_t base = static_cast<std::size_t>(i) * T;
      if (agent.bankrupt) {
        nav_[base + t + 1] = nav_[base + t];
        continue;
      }
      const double nav = net_asset_value(agent, price_next);
      if ((t + 1) % calendar::days_per_year == 0)
        agent.year_peak_nav = nav;
      else
        agent.year_peak_nav = std::max(agent.year_peak_nav, nav);
      nav_[base + t + 1] = nav;
      if (check_bankruptcy(agent, nav)) {
        agent.bankrupt = true;
        agent.bankrupt_step = t + 1;
        bankruptcies_.emplace_back(i, t + 1);
      }
      for (int j = 0; j < J; ++j) ++agent.since_trade[j];
    }

    ++t_;
    return report;
  }

  RunResult finish() {
    while (!done()) step();
    RunResult result;
    result.config = cfg_;
    result.seed = seed_;
    result.market = std::move(market_);
    result.fundamentals = std::move(fundamentals_);
    result.nav = std::move(nav_);
    result.bankruptcies = std::move(bankruptcies_);
    result.audit = audit_;
    const int T = cfg_.step_count;
    result.agents.reserve(agents_.size());
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      const AgentState& agent = agents_[i];
      AgentSummary summary;
      summary.agent_id = static_cast<int>(i);
      summary.params = agent.params;
      summary.final_nav = result.nav[i * T + T - 1];
      summary.bankrupt = agent.bankrupt;
      summary.bankrupt_step = agent.bankrupt_step;
      for (int year_end = calendar::days_per_year; year_end < T;
           year_end += calendar::days_per_year) {
        const double before =
            result.nav[i * T + year_end - calendar::days_per_year];
        const double after = result.nav[i * T + year_end];
        summary.annual_returns.push_back(before > 0.0 ? after / before - 1.0
                                                      : 0.0);
      }
      result.agents.push_back(std::move(summary));
    }
    return result;
  }

 private:
  void queue_trade_reward(int agent_idx, int stock, OrderTag tag, int t,
                          long long quantity, double price) {
    if (tag != OrderTag::policy) return;
    detail::AgentRuntime& rt = runtimes_[agent_idx];
    detail::PerStockRuntime& ps = rt.stocks[stock];
    if (ps.decisions.empty() || ps.decisions.back().t != t) return;
    const detail::TradeRecord& rec = ps.decisions.back();
    ps.pending.push_back({t + agents_[agent_idx].params.horizon, rec.state,
                          rec.action, quantity, price});
  }

  void audit_forecast(const detail::ForecastRecord& rec, int chosen,
                      double realized, double rho, int tau, int stock) {
    ++audit_.forecast_checks;
    const double chosen_error =
        std::fabs(forecast::hindsight_forecast(prefix_[stock], rec.t,
                                               rec.view_value, rho, tau,
                                               chosen) -
                  realized);
    for (int a = 0; a < forecast::action_count; ++a) {
      const double err =
          std::fabs(forecast::hindsight_forecast(prefix_[stock], rec.t,
                                                 rec.view_value, rho, tau, a) -
                    realized);
      if (err < chosen_error) {
        ++audit_.forecast_violations;
        break;
      }
    }
  }

  void audit_trade(const detail::TradeRecord& rec, int chosen,
                   double realized) {
    ++audit_.trade_checks;
    const double chosen_cashflow =
        trade::hypothetical_cashflow(rec.ctx, chosen, realized);
    for (int a = 0; a < trade::action_count; ++a) {
      if (trade::hypothetical_cashflow(rec.ctx, a, realized) >
          chosen_cashflow) {
        ++audit_.trade_violations;
        break;
      }
    }
  }

  SimConfig cfg_;
  std::uint64_t seed_;
  bool verify_;
  std::ostream* trace_;
  int t_ = 0;
  std::vector<std::vector<double>> fundamentals_;
  std::vector<StockSeries> market_;
  std::vector<PrefixStats> prefix_;
  std::vector<AgentState> agents_;
  std::vector<detail::AgentRuntime> runtimes_;
  std::vector<double> nav_;
  std::vector<std::pair<int, int>> bankruptcies_;
  HindsightAudit audit_;
};

inline RunResult run(const SimConfig& cfg, std::uint64_t seed,
                     bool verify_hindsight = false) {
  Simulation sim(cfg, seed, verify_hindsight);
  try {
    return sim.finish();
  } catch (const std::exception& e) {
    throw std::runtime_error("run(seed=" + std::to_string(seed) + ", t=" +
                             std::to_string(sim.current_step()) +
                             "): " + e.what());
  }
}

template <class T>
struct BatchOutcome {
  std::uint64_t seed = 0;
  std::optional<T> value;
  std::string error;
};

// Runs the seeds on a small worker pool, applying `map` to each finished
// RunResult inside the worker (so large results can be reduced before they
// accumulate). Outcomes keep the seed-list order; a failed run reports its
// error without aborting the siblings.
template <class Map>
auto run_batch_map(const SimConfig& cfg, const std::vector<std::uint64_t>& seeds,
                   int threads, Map map)
    -> std::vector<BatchOutcome<std::invoke_result_t<Map, RunResult&&>>> {
  using Value = std::invoke_result_t<Map, RunResult&&>;
  std::vector<BatchOutcome<Value>> outcomes(seeds.size());
  if (threads <= 0)
    threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min<int>(threads, static_cast<int>(seeds.size())));

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= seeds.size()) return;
      outcomes[k].seed = seeds[k];
      try {
        outcomes[k].value = map(run(cfg, seeds[k]));
      } catch (const std::exception& e) {
        outcomes[k].error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return outcomes;
}

inline std::vector<BatchOutcome<RunResult>> run_batch(
    const SimConfig& cfg, const std::vector<std::uint64_t>& seeds,
    int threads = 0) {
  return run_batch_map(cfg, seeds, threads,
                       [](RunResult&& r) { return std::move(r); });
}

}  // namespace marsim
