#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "marsim/io/csv.hpp"

namespace marsim::io {

struct TickerSeries {
  std::string ticker;
  std::vector<double> close;
  std::vector<double> volume;
};

struct IngestReport {
  std::vector<TickerSeries> series;  // curated, one entry per retained ticker
  int input_tickers = 0;
  int retained = 0;
  int dropped_gaps = 0;
  int rows_rejected = 0;
  int splits_adjusted = 0;
  std::vector<std::string> warnings;
};

// Reads `date,ticker,close,volume` rows, drops tickers that miss any date in
// the file's date universe, and back-adjusts stock splits: a close-to-close
// ratio beyond split_factor (either direction) together with a volume spike
// rescales the prefix of the series so the jump disappears.
inline IngestReport ingest_real(const std::string& path,
                                double split_factor = 1.9,
                                double volume_spike_factor = 2.0) {
  IngestReport report;
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) {
    report.warnings.push_back("empty file: " + path);
    return report;
  }

  std::set<std::string> dates;
  std::map<std::string, std::map<std::string, std::pair<double, double>>> rows;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    const auto fields = split(lines[n], ',');
    double close = 0.0, volume = 0.0;
    if (fields.size() != 4 || !parse_double(fields[2], close) ||
        !parse_double(fields[3], volume)) {
      ++report.rows_rejected;
      report.warnings.push_back("unparseable row at line " +
                                std::to_string(n + 1));
      continue;
    }
    if (close <= 0.0) {
      ++report.rows_rejected;
      report.warnings.push_back("non-positive close at line " +
                                std::to_string(n + 1));
      continue;
    }
    dates.insert(fields[0]);
    rows[fields[1]][fields[0]] = {close, volume};
  }

  report.input_tickers = static_cast<int>(rows.size());
  for (auto& [ticker, by_date] : rows) {
    if (by_date.size() != dates.size()) {
      ++report.dropped_gaps;
      continue;
    }
    TickerSeries series;
    series.ticker = ticker;
    series.close.reserve(dates.size());
    series.volume.reserve(dates.size());
    for (const std::string& date : dates) {
      const auto& [close, volume] = by_date.at(date);
      series.close.push_back(close);
      series.volume.push_back(volume);
    }

    // split suppression
    for (std::size_t t = 1; t < series.close.size(); ++t) {
      const double ratio = series.close[t] / series.close[t - 1];
      if (ratio < split_factor && ratio > 1.0 / split_factor) continue;
      const std::size_t lookback = std::min<std::size_t>(t, 20);
      if (lookback < 5) continue;
      double mean_volume = 0.0;
      for (std::size_t u = t - lookback; u < t; ++u)
        mean_volume += series.volume[u];
      mean_volume /= static_cast<double>(lookback);
      if (mean_volume > 0.0 &&
          series.volume[t] < volume_spike_factor * mean_volume)
        continue;
      for (std::size_t u = 0; u < t; ++u) {
        series.close[u] *= ratio;
        series.volume[u] /= ratio;
      }
      ++report.splits_adjusted;
    }

    report.series.push_back(std::move(series));
    ++report.retained;
  }
  return report;
}

}  // namespace marsim::io
