#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "marsim/analytics.hpp"
#include "marsim/config.hpp"
#include "marsim/engine.hpp"
#include "marsim/io/csv.hpp"

namespace marsim::calib {

// Fixed column order for reports and checkpoints.
inline constexpr const char* metric_family_names[9] = {
    "log_returns",        "volatility",
    "return_autocorr",    "volatility_autocorr",
    "volume_autocorr",    "blended_return_autocorr",
    "blended_mean_week",  "blended_mean_2week",
    "run_lengths"};

struct GridPoint {
  int agent_count = 500;
  double gesture_scalar = 1.0;
  double fundamental_amplitude = 0.1;
  double drawdown_threshold = -50.0;
  double score = std::numeric_limits<double>::infinity();       // train half
  double score_test = std::numeric_limits<double>::infinity();  // other half
  std::map<std::string, double> family_distances;
  std::string error;

  std::string key() const {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%d|%.2f|%.2f|%.0f", agent_count,
                  gesture_scalar, fundamental_amplitude, drawdown_threshold);
    return buf;
  }
};

// Full hyperparameter grid: agents 500..5000 step 500, gesture scalar
// 1.0..3.0 step 0.5, fundamental amplitude 0.1..1.5 step 0.2, drawdown
// threshold -50..30 step 10. Bounds inclusive; 3600 points.
inline std::vector<GridPoint> enumerate_grid() {
  std::vector<GridPoint> grid;
  grid.reserve(10 * 5 * 8 * 9);
  for (int i = 1; i <= 10; ++i)
    for (int z = 0; z <= 4; ++z)
      for (int v = 0; v <= 7; ++v)
        for (int l = 0; l <= 8; ++l) {
          GridPoint p;
          p.agent_count = 500 * i;
          p.gesture_scalar = (2 + z) / 2.0;
          p.fundamental_amplitude = (1 + 2 * v) / 10.0;
          p.drawdown_threshold = -50.0 + 10.0 * l;
          grid.push_back(p);
        }
  return grid;
}

inline SimConfig apply_point(SimConfig base, const GridPoint& p) {
  base.agent_count = p.agent_count;
  base.gesture_scalar = p.gesture_scalar;
  base.fundamental_amplitude = p.fundamental_amplitude;
  base.drawdown_threshold = p.drawdown_threshold;
  return base;
}

// Runs the configured batch at the point and scores the pooled simulated
// metric families against the reference metrics: mean KS over families.
// A failed batch leaves the score infinite with the diagnostic attached.
inline GridPoint score_point(
    GridPoint point, const std::vector<analytics::MetricDistribution>& real_train,
    const std::vector<analytics::MetricDistribution>& real_test,
    const SimConfig& base, const std::vector<std::uint64_t>& seeds,
    int threads = 1) {
  const SimConfig cfg = apply_point(base, point);
  auto outcomes = run_batch_map(
      cfg, seeds, threads, [](RunResult&& result) {
        return analytics::bundles_from_run(result);
      });
  std::vector<analytics::SeriesBundle> bundles;
  for (auto& outcome : outcomes) {
    if (!outcome.value) {
      point.error = "seed " + std::to_string(outcome.seed) + ": " + outcome.error;
      return point;
    }
    for (auto& bundle : *outcome.value) bundles.push_back(std::move(bundle));
  }
  const auto sim_metrics = analytics::compute_metric_families(bundles);
  point.family_distances = analytics::family_distances(sim_metrics, real_train);
  point.score = analytics::aggregate_score(point.family_distances);
  if (!real_test.empty())
    point.score_test = analytics::aggregate_score(
        analytics::family_distances(sim_metrics, real_test));
  return point;
}

struct SweepReport {
  std::vector<GridPoint> ranked;  // ascending score
  int evaluated = 0;
  int restored = 0;  // taken from the checkpoint
};

namespace detail {

inline std::string checkpoint_line(const GridPoint& p) {
  std::string line = std::to_string(p.agent_count) + "," +
                     io::format_double(p.gesture_scalar) + "," +
                     io::format_double(p.fundamental_amplitude) + "," +
                     io::format_double(p.drawdown_threshold) + "," +
                     io::format_double(p.score) + "," +
                     io::format_double(p.score_test);
  for (const char* family : metric_family_names) {
    const auto it = p.family_distances.find(family);
    line += ",";
    if (it != p.family_distances.end()) line += io::format_double(it->second);
  }
  return line;
}

inline bool parse_checkpoint_line(const std::string& line, GridPoint& p) {
  const auto fields = io::split(line, ',');
  if (fields.size() != 15) return false;
  long long agents = 0;
  double zeta = 0.0, nu = 0.0, threshold = 0.0, score = 0.0, score_test = 0.0;
  if (!io::parse_int64(fields[0], agents) || !io::parse_double(fields[1], zeta) ||
      !io::parse_double(fields[2], nu) || !io::parse_double(fields[3], threshold) ||
      !io::parse_double(fields[4], score) || !io::parse_double(fields[5], score_test))
    return false;
  p.agent_count = static_cast<int>(agents);
  p.gesture_scalar = zeta;
  p.fundamental_amplitude = nu;
  p.drawdown_threshold = threshold;
  p.score = score;
  p.score_test = score_test;
  for (int k = 0; k < 9; ++k) {
    double d = 0.0;
    if (!fields[6 + k].empty() && io::parse_double(fields[6 + k], d))
      p.family_distances[metric_family_names[k]] = d;
  }
  return true;
}

}  // namespace detail

// Evaluates the points on a worker pool with an append-only checkpoint:
// finished points are skipped on resume, malformed checkpoint lines are
// recomputed. Ranking is by training score, ties by key.
inline SweepReport sweep(
    const std::vector<GridPoint>& points,
    const std::vector<analytics::MetricDistribution>& real_train,
    const std::vector<analytics::MetricDistribution>& real_test,
    const SimConfig& base, const std::vector<std::uint64_t>& seeds,
    const std::string& checkpoint_path, int threads = 1) {
  SweepReport report;
  std::map<std::string, GridPoint> done;
  if (!checkpoint_path.empty()) {
    std::ifstream in(checkpoint_path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line.front() == '#') continue;
      GridPoint p;
      if (detail::parse_checkpoint_line(line, p)) done[p.key()] = p;
    }
  }
  report.restored = static_cast<int>(done.size());

  std::ofstream checkpoint;
  if (!checkpoint_path.empty()) {
    const bool fresh = done.empty();
    checkpoint.open(checkpoint_path, std::ios::app);
    if (fresh && checkpoint) {
      checkpoint << "# marsim sweep checkpoint: I,zeta,nu,L,score,score_test";
      for (const char* family : metric_family_names) checkpoint << ',' << family;
      checkpoint << '\n';
    }
  }

  std::vector<GridPoint> todo;
  for (const GridPoint& p : points) {
    auto it = done.find(p.key());
    if (it != done.end())
      report.ranked.push_back(it->second);
    else
      todo.push_back(p);
  }

  std::mutex sink;
  std::atomic<std::size_t> next{0};
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(todo.size() ? todo.size() : 1)));
  auto worker = [&]() {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= todo.size()) return;
      GridPoint scored =
          score_point(todo[k], real_train, real_test, base, seeds, 1);
      std::lock_guard<std::mutex> lock(sink);
      report.ranked.push_back(scored);
      ++report.evaluated;
      if (checkpoint && scored.error.empty()) {
        checkpoint << detail::checkpoint_line(scored) << '\n';
        checkpoint.flush();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  std::sort(report.ranked.begin(), report.ranked.end(),
            [](const GridPoint& a, const GridPoint& b) {
              if (a.score != b.score) return a.score < b.score;
              return a.key() < b.key();
            });
  return report;
}

}  // namespace marsim::calib
