#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "marsim/config.hpp"
#include "marsim/engine.hpp"

namespace marsim::analytics {

inline double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Population variance.
inline double variance(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const double m = mean(v);
  double sum = 0.0;
  for (double x : v) sum += (x - m) * (x - m);
  return sum / static_cast<double>(v.size());
}

inline double excess_kurtosis(const std::vector<double>& v) {
  const double m = mean(v);
  double m2 = 0.0, m4 = 0.0;
  for (double x : v) {
    const double d = x - m;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m2 /= static_cast<double>(v.size());
  m4 /= static_cast<double>(v.size());
  if (m2 <= 0.0) return 0.0;
  return m4 / (m2 * m2) - 3.0;
}

// Pearson correlation with population normalization; NaN when either side
// has zero variance (callers skip those samples).
inline double pearson(const double* a, const double* b, std::size_t n) {
  double ma = 0.0, mb = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    ma += a[k];
    mb += b[k];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double da = a[k] - ma;
    const double db = b[k] - mb;
    cov += da * db;
    va += da * da;
    vb += db * db;
  }
  if (va <= 0.0 || vb <= 0.0) return std::nan("");
  return cov / std::sqrt(va * vb);
}

inline std::vector<double> log_returns(const std::vector<double>& prices) {
  if (prices.size() < 2)
    throw std::invalid_argument("log_returns: need at least two prices");
  std::vector<double> out;
  out.reserve(prices.size() - 1);
  for (std::size_t t = 1; t < prices.size(); ++t) {
    if (prices[t] <= 0.0 || prices[t - 1] <= 0.0)
      throw std::invalid_argument("log_returns: non-positive price at index " +
                                  std::to_string(t));
    out.push_back(std::log(prices[t] / prices[t - 1]));
  }
  return out;
}

// Rolling price volatility sigma / P(t): population standard deviation over
// the inclusive window [t - delta, t], normalized by the current price.
inline std::vector<double> volatility_series(const std::vector<double>& prices,
                                             int delta) {
  if (delta < 2) throw std::invalid_argument("volatility_series: delta < 2");
  std::vector<double> out;
  if (prices.size() <= static_cast<std::size_t>(delta)) return out;
  out.reserve(prices.size() - delta);
  for (std::size_t t = delta; t < prices.size(); ++t) {
    const std::size_t lo = t - delta;
    double m = 0.0;
    for (std::size_t u = lo; u <= t; ++u) m += prices[u];
    m /= static_cast<double>(delta + 1);
    double var = 0.0;
    for (std::size_t u = lo; u <= t; ++u)
      var += (prices[u] - m) * (prices[u] - m);
    var /= static_cast<double>(delta + 1);
    out.push_back(std::sqrt(var) / prices[t]);
  }
  return out;
}

// Correlation between the adjacent windows [t - delta, t] and
// [t - 2 delta, t - delta] at each admissible t. Zero-variance windows are
// skipped (no value emitted for that t).
inline std::vector<double> adjacent_autocorr(const std::vector<double>& series,
                                             int delta) {
  std::vector<double> out;
  if (delta < 1 || series.size() < static_cast<std::size_t>(2 * delta) + 1)
    return out;
  const std::size_t n = static_cast<std::size_t>(delta) + 1;
  for (std::size_t t = 2 * delta; t < series.size(); ++t) {
    const double* recent = &series[t - delta];
    const double* older = &series[t - 2 * delta];
    const double c = pearson(recent, older, n);
    if (!std::isnan(c)) out.push_back(c);
  }
  return out;
}

// Correlation between [t - len, t] and the same-length window shifted back
// by `shift` days.
inline std::vector<double> blended_autocorr(const std::vector<double>& series,
                                            int len, int shift) {
  std::vector<double> out;
  if (shift < 1) throw std::invalid_argument("blended_autocorr: shift < 1");
  if (series.size() < static_cast<std::size_t>(len + shift) + 1) return out;
  const std::size_t n = static_cast<std::size_t>(len) + 1;
  for (std::size_t t = len + shift; t < series.size(); ++t) {
    const double* recent = &series[t - len];
    const double* older = &series[t - len - shift];
    const double c = pearson(recent, older, n);
    if (!std::isnan(c)) out.push_back(c);
  }
  return out;
}

inline double mean_blended_autocorr(const std::vector<double>& series, int len,
                                    int shift) {
  return mean(blended_autocorr(series, len, shift));
}

// Signed lengths of maximal runs of strictly rising (positive) or strictly
// falling (negative) prices. Flat days terminate runs and join none.
inline std::vector<int> run_lengths(const std::vector<double>& prices) {
  std::vector<int> out;
  int direction = 0;
  int length = 0;
  for (std::size_t t = 1; t < prices.size(); ++t) {
    int d = 0;
    if (prices[t] > prices[t - 1]) d = 1;
    if (prices[t] < prices[t - 1]) d = -1;
    if (d == direction && d != 0) {
      ++length;
      continue;
    }
    if (direction != 0) out.push_back(direction * length);
    direction = d;
    length = d != 0 ? 1 : 0;
  }
  if (direction != 0) out.push_back(direction * length);
  return out;
}

// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t ia = 0, ib = 0;
  double d = 0.0;
  while (ia < a.size() && ib < b.size()) {
    const double x = std::min(a[ia], b[ib]);
    while (ia < a.size() && a[ia] == x) ++ia;
    while (ib < b.size() && b[ib] == x) ++ib;
    const double fa = static_cast<double>(ia) / a.size();
    const double fb = static_cast<double>(ib) / b.size();
    d = std::max(d, std::fabs(fa - fb));
  }
  return d;
}

struct DistanceRecord {
  double ks = 0.0;
  double mean_diff = 0.0;
  double var_diff = 0.0;
};

inline DistanceRecord compare(const std::vector<double>& sim,
                              const std::vector<double>& real) {
  DistanceRecord rec;
  rec.ks = ks_statistic(sim, real);
  rec.mean_diff = mean(sim) - mean(real);
  rec.var_diff = variance(sim) - variance(real);
  return rec;
}

struct Histogram {
  std::vector<double> edges;  // strictly increasing, counts.size() + 1
  std::vector<long long> counts;
};

// Freedman-Diaconis binning; the edges may come from a different (e.g.
// combined) sample so two histograms can share bins.
inline std::vector<double> fd_edges(std::vector<double> sample) {
  if (sample.empty()) return {0.0, 1.0};
  std::sort(sample.begin(), sample.end());
  const double lo = sample.front();
  const double hi = sample.back();
  if (lo == hi) return {lo, lo + 1.0};
  const std::size_t n = sample.size();
  const double q1 = sample[n / 4];
  const double q3 = sample[(3 * n) / 4];
  double width = 2.0 * (q3 - q1) / std::cbrt(static_cast<double>(n));
  if (width <= 0.0) width = (hi - lo) / std::max<std::size_t>(1, std::min<std::size_t>(n, 50));
  int bins = static_cast<int>(std::ceil((hi - lo) / width));
  bins = std::clamp(bins, 1, 2000);
  std::vector<double> edges(bins + 1);
  for (int k = 0; k <= bins; ++k)
    edges[k] = lo + (hi - lo) * static_cast<double>(k) / bins;
  edges.front() = lo;  // pin exactly so min and max always fall inside
  edges.back() = hi;
  return edges;
}

inline Histogram histogram(const std::vector<double>& sample,
                           const std::vector<double>& edges) {
  Histogram h;
  h.edges = edges;
  h.counts.assign(edges.size() - 1, 0);
  for (double x : sample) {
    if (x < edges.front() || x > edges.back()) continue;
    const std::size_t k = static_cast<std::size_t>(
        std::upper_bound(edges.begin(), edges.end(), x) - edges.begin());
    const std::size_t bin = std::min(k == 0 ? 0 : k - 1, h.counts.size() - 1);
    ++h.counts[bin];
  }
  return h;
}

// One named sample set, e.g. volatility at a 63-day lag.
struct MetricDistribution {
  std::string name;
  std::string param;
  std::vector<double> samples;
};

// Price/volume series pair; the unit every metric family consumes. Stocks
// of a real dataset and runs of a simulated batch both map onto this.
struct SeriesBundle {
  std::vector<double> prices;
  std::vector<double> volumes;
};

// The nine metric families, pooled over all bundles:
// log returns; volatility at lags {2 weeks, 3 months, 1 year}; adjacent
// autocorrelation of returns, of two-week volatility, and of volumes;
// short blended return autocorrelation (shifts 1..5); blended-mean decay
// curves for one- and two-week windows; signed price run lengths.
inline std::vector<MetricDistribution> compute_metric_families(
    const std::vector<SeriesBundle>& bundles) {
  using namespace calendar;
  const int lags[3] = {2 * days_per_week, 3 * days_per_month, days_per_year};

  std::vector<MetricDistribution> out;
  auto add = [&out](const std::string& name, const std::string& param) {
    out.push_back({name, param, {}});
    return out.size() - 1;
  };
  auto append = [&out](std::size_t slot, const std::vector<double>& values) {
    out[slot].samples.insert(out[slot].samples.end(), values.begin(),
                             values.end());
  };

  const std::size_t returns_dist = add("log_returns", "");
  std::size_t vol_dist[3], ret_ac[3], volu_ac[3];
  for (int k = 0; k < 3; ++k) {
    vol_dist[k] = add("volatility", std::to_string(lags[k]));
    ret_ac[k] = add("return_autocorr", std::to_string(lags[k]));
    volu_ac[k] = add("volume_autocorr", std::to_string(lags[k]));
  }
  const std::size_t vol_ac =
      add("volatility_autocorr", std::to_string(2 * days_per_week));
  std::size_t blended[5], blended_mean_w[5], blended_mean_2w[5];
  for (int shift = 1; shift <= 5; ++shift)
    blended[shift - 1] = add("blended_return_autocorr", std::to_string(shift));
  for (int k = 0; k < 5; ++k)
    blended_mean_w[k] = add("blended_mean_week", std::to_string(k + 1));
  for (int k = 0; k < 5; ++k)
    blended_mean_2w[k] = add("blended_mean_2week", std::to_string(2 * (k + 1)));
  const std::size_t runs_dist = add("run_lengths", "");

  for (const SeriesBundle& bundle : bundles) {
    if (bundle.prices.size() < 2) continue;
    const std::vector<double> returns = log_returns(bundle.prices);
    append(returns_dist, returns);
    for (int k = 0; k < 3; ++k) {
      append(vol_dist[k], volatility_series(bundle.prices, lags[k]));
      append(ret_ac[k], adjacent_autocorr(returns, lags[k]));
      append(volu_ac[k], adjacent_autocorr(bundle.volumes, lags[k]));
    }
    append(vol_ac,
           adjacent_autocorr(volatility_series(bundle.prices, 2 * days_per_week),
                             2 * days_per_week));
    for (int shift = 1; shift <= 5; ++shift) {
      const auto ac = blended_autocorr(returns, days_per_week, shift);
      append(blended[shift - 1], ac);
      if (!ac.empty()) out[blended_mean_w[shift - 1]].samples.push_back(mean(ac));
      const auto ac2 = blended_autocorr(returns, 2 * days_per_week, 2 * shift);
      if (!ac2.empty())
        out[blended_mean_2w[shift - 1]].samples.push_back(mean(ac2));
    }
    for (int len : run_lengths(bundle.prices))
      out[runs_dist].samples.push_back(static_cast<double>(len));
  }
  return out;
}

inline std::vector<SeriesBundle> bundles_from_run(const RunResult& result) {
  std::vector<SeriesBundle> bundles;
  bundles.reserve(result.market.size());
  for (const StockSeries& series : result.market)
    bundles.push_back({series.price, series.volume});
  return bundles;
}

// Family name -> mean KS over its parameterizations; families present in
// only one side are skipped.
inline std::map<std::string, double> family_distances(
    const std::vector<MetricDistribution>& sim,
    const std::vector<MetricDistribution>& real) {
  std::map<std::string, std::pair<double, int>> acc;
  for (const auto& s : sim) {
    if (s.samples.empty()) continue;
    for (const auto& r : real) {
      if (r.name != s.name || r.param != s.param || r.samples.empty()) continue;
      const double ks = ks_statistic(s.samples, r.samples);
      auto& slot = acc[s.name];
      slot.first += ks;
      slot.second += 1;
    }
  }
  std::map<std::string, double> out;
  for (const auto& [name, sum_count] : acc)
    out[name] = sum_count.first / sum_count.second;
  return out;
}

inline double aggregate_score(const std::map<std::string, double>& distances) {
  if (distances.empty()) return std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (const auto& [name, d] : distances) sum += d;
  return sum / static_cast<double>(distances.size());
}

// ---- learning curves (top-decile agents observed out of sample) ----

struct CurveTable {
  int selection_step = 0;       // floor(0.9 T)
  int top_count = 0;            // agents per run in the decile
  std::vector<double> ytd_mean; // mean year-to-date return, [0.9 T, T)
  std::vector<double> sorted_annual_mean;  // sorted final-year returns
};

inline CurveTable learning_curves(const std::vector<RunResult>& batch) {
  using calendar::days_per_year;
  if (batch.empty()) throw std::invalid_argument("learning_curves: no runs");
  const int T = batch.front().config.step_count;
  const int I = batch.front().config.agent_count;
  CurveTable table;
  table.selection_step = static_cast<int>(0.9 * T);
  table.top_count = std::max(1, I / 10);
  table.ytd_mean.assign(T - table.selection_step, 0.0);
  table.sorted_annual_mean.assign(table.top_count, 0.0);

  for (const RunResult& result : batch) {
    std::vector<int> order(I);
    for (int i = 0; i < I; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double na = result.nav_at(a, table.selection_step);
      const double nb = result.nav_at(b, table.selection_step);
      if (na != nb) return na > nb;
      return a < b;
    });
    order.resize(table.top_count);

    for (int t = table.selection_step; t < T; ++t) {
      const int anchor = (t / days_per_year) * days_per_year;
      double sum = 0.0;
      for (int i : order) {
        const double base = result.nav_at(i, anchor);
        sum += base > 0.0 ? result.nav_at(i, t) / base - 1.0 : 0.0;
      }
      table.ytd_mean[t - table.selection_step] +=
          sum / static_cast<double>(table.top_count);
    }

    std::vector<double> annual;
    annual.reserve(table.top_count);
    const int last = T - 1;
    const int prior = std::max(0, last - days_per_year);
    for (int i : order) {
      const double base = result.nav_at(i, prior);
      annual.push_back(base > 0.0 ? result.nav_at(i, last) / base - 1.0 : 0.0);
    }
    std::sort(annual.begin(), annual.end());
    for (int k = 0; k < table.top_count; ++k)
      table.sorted_annual_mean[k] += annual[k];
  }

  const double runs = static_cast<double>(batch.size());
  for (double& v : table.ytd_mean) v /= runs;
  for (double& v : table.sorted_annual_mean) v /= runs;
  return table;
}

inline double mean_ytd(const CurveTable& table) {
  return mean(table.ytd_mean);
}

}  // namespace marsim::analytics
