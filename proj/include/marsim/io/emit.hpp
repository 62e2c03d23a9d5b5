#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "marsim/analytics.hpp"
#include "marsim/engine.hpp"
#include "marsim/fundamentals.hpp"
#include "marsim/io/csv.hpp"

namespace marsim::io {

struct FileEntry {
  std::string path;
  long long rows = 0;  // data rows, header excluded
  std::string checksum;
};

struct Manifest {
  std::vector<FileEntry> files;
};

namespace detail {

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& header) : path_(path) {
    out_.open(path, std::ios::binary);
    if (!out_) throw std::runtime_error("cannot write " + path);
    out_ << header << '\n';
  }

  template <class... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    ((out_ << (first ? "" : ","), first = false, put(fields)), ...);
    out_ << '\n';
    ++rows_;
  }

  FileEntry close() {
    out_.close();
    return {path_, rows_, file_checksum_hex(path_)};
  }

 private:
  void put(double v) { out_ << format_double(v); }
  void put(int v) { out_ << v; }
  void put(long long v) { out_ << v; }
  void put(std::uint64_t v) { out_ << v; }
  void put(const std::string& v) { out_ << v; }
  void put(const char* v) { out_ << v; }

  std::string path_;
  std::ofstream out_;
  long long rows_ = 0;
};

}  // namespace detail

inline void ensure_dir(const std::string& dir) {
  std::filesystem::create_directories(dir);
}

inline void write_manifest(const Manifest& manifest, const std::string& dir) {
  detail::CsvWriter writer(dir + "/manifest.csv", "file,rows,checksum");
  for (const FileEntry& f : manifest.files)
    writer.row(std::filesystem::path(f.path).filename().string(), f.rows,
               f.checksum);
  writer.close();
}

// prices.csv, agents.csv, nav.csv, bankruptcies.csv + manifest.csv
inline Manifest emit_run(const RunResult& result, const std::string& dir) {
  ensure_dir(dir);
  Manifest manifest;
  const int T = result.config.step_count;
  const int J = result.config.stock_count;
  const int I = result.config.agent_count;

  {
    detail::CsvWriter writer(dir + "/prices.csv", "t,stock,P,V,S");
    for (int t = 0; t < T; ++t)
      for (int j = 0; j < J; ++j)
        writer.row(t, j, result.market[j].price[t], result.market[j].volume[t],
                   result.market[j].spread[t]);
    manifest.files.push_back(writer.close());
  }
  {
    detail::CsvWriter writer(
        dir + "/agents.csv",
        "agent_id,initial_bonds,drawdown_limit,reflexivity,horizon,"
        "trading_window,memory,gesture,learning_rate,final_nav,bankrupt,"
        "bankrupt_step,annual_returns");
    for (const AgentSummary& a : result.agents) {
      std::string annual;
      for (std::size_t k = 0; k < a.annual_returns.size(); ++k) {
        if (k) annual += ';';
        annual += format_double(a.annual_returns[k]);
      }
      writer.row(a.agent_id, a.params.initial_bonds, a.params.drawdown_limit,
                 a.params.reflexivity, a.params.horizon,
                 a.params.trading_window, a.params.memory, a.params.gesture,
                 a.params.learning_rate, a.final_nav,
                 a.bankrupt ? "true" : "false", a.bankrupt_step, annual);
    }
    manifest.files.push_back(writer.close());
  }
  {
    detail::CsvWriter writer(dir + "/nav.csv", "t,agent,nav");
    for (int t = 0; t < T; ++t)
      for (int i = 0; i < I; ++i) writer.row(t, i, result.nav_at(i, t));
    manifest.files.push_back(writer.close());
  }
  {
    detail::CsvWriter writer(dir + "/bankruptcies.csv", "agent,t");
    for (const auto& [agent, t] : result.bankruptcies) writer.row(agent, t);
    manifest.files.push_back(writer.close());
  }
  write_manifest(manifest, dir);
  return manifest;
}

// Reads prices.csv of an emitted run back into metric inputs.
inline std::vector<analytics::SeriesBundle> load_run_bundles(
    const std::string& dir) {
  const auto lines = read_lines(dir + "/prices.csv");
  std::map<long long, analytics::SeriesBundle> per_stock;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    const auto fields = split(lines[n], ',');
    long long t = 0, stock = 0;
    double price = 0.0, volume = 0.0, spread = 0.0;
    if (fields.size() != 5 || !parse_int64(fields[0], t) ||
        !parse_int64(fields[1], stock) || !parse_double(fields[2], price) ||
        !parse_double(fields[3], volume) || !parse_double(fields[4], spread))
      throw std::runtime_error("bad row in prices.csv at line " +
                               std::to_string(n + 1));
    auto& bundle = per_stock[stock];
    bundle.prices.push_back(price);
    bundle.volumes.push_back(volume);
  }
  std::vector<analytics::SeriesBundle> out;
  out.reserve(per_stock.size());
  for (auto& [stock, bundle] : per_stock) out.push_back(std::move(bundle));
  return out;
}

inline Manifest emit_metrics(const std::vector<analytics::MetricDistribution>& metrics,
                             const std::string& dir) {
  ensure_dir(dir);
  Manifest manifest;
  {
    detail::CsvWriter writer(dir + "/metrics.csv",
                             "metric,param,count,mean,variance,min,max");
    for (const auto& m : metrics) {
      double lo = 0.0, hi = 0.0;
      if (!m.samples.empty()) {
        lo = *std::min_element(m.samples.begin(), m.samples.end());
        hi = *std::max_element(m.samples.begin(), m.samples.end());
      }
      writer.row(m.name, m.param, static_cast<long long>(m.samples.size()),
                 analytics::mean(m.samples), analytics::variance(m.samples),
                 lo, hi);
    }
    manifest.files.push_back(writer.close());
  }
  {
    detail::CsvWriter writer(dir + "/histograms.csv",
                             "metric,param,bin_lo,bin_hi,count");
    for (const auto& m : metrics) {
      if (m.samples.empty()) continue;
      const auto edges = analytics::fd_edges(m.samples);
      const auto hist = analytics::histogram(m.samples, edges);
      for (std::size_t k = 0; k < hist.counts.size(); ++k)
        writer.row(m.name, m.param, hist.edges[k], hist.edges[k + 1],
                   hist.counts[k]);
    }
    manifest.files.push_back(writer.close());
  }
  write_manifest(manifest, dir);
  return manifest;
}

inline Manifest emit_comparison(
    const std::vector<analytics::MetricDistribution>& sim,
    const std::vector<analytics::MetricDistribution>& real,
    const std::string& dir) {
  ensure_dir(dir);
  Manifest manifest;
  detail::CsvWriter writer(dir + "/comparison.csv",
                           "metric,param,ks,mean_diff,var_diff");
  for (const auto& s : sim) {
    if (s.samples.empty()) continue;
    for (const auto& r : real) {
      if (r.name != s.name || r.param != s.param || r.samples.empty()) continue;
      const auto rec = analytics::compare(s.samples, r.samples);
      writer.row(s.name, s.param, rec.ks, rec.mean_diff, rec.var_diff);
    }
  }
  const auto distances = analytics::family_distances(sim, real);
  writer.row("overall", "", analytics::aggregate_score(distances), 0.0, 0.0);
  manifest.files.push_back(writer.close());
  write_manifest(manifest, dir);
  return manifest;
}

// t,stock,true_value,agent_id,biased_value rows for sample agent views.
inline Manifest emit_fundamentals(const std::vector<FundamentalSeries>& truths,
                                  const std::vector<std::vector<FundamentalView>>& views,
                                  const std::string& dir) {
  ensure_dir(dir);
  Manifest manifest;
  detail::CsvWriter writer(dir + "/fundamentals.csv",
                           "t,stock,true_value,agent_id,biased_value");
  for (std::size_t j = 0; j < truths.size(); ++j) {
    const auto& truth = truths[j];
    for (std::size_t i = 0; i < views[j].size(); ++i)
      for (std::size_t t = 0; t < truth.values.size(); ++t)
        writer.row(static_cast<long long>(t), static_cast<long long>(j),
                   truth.values[t], static_cast<long long>(i),
                   views[j][i].values[t]);
  }
  manifest.files.push_back(writer.close());
  write_manifest(manifest, dir);
  return manifest;
}

}  // namespace marsim::io
