// Command-line front end: run / batch / sweep / analyze / compare /
// gen-fundamentals. Exit codes: 0 success, 1 validation error, 2 runtime
// error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "marsim/analytics.hpp"
#include "marsim/calibration.hpp"
#include "marsim/config.hpp"
#include "marsim/engine.hpp"
#include "marsim/fundamentals.hpp"
#include "marsim/io/config_file.hpp"
#include "marsim/io/emit.hpp"
#include "marsim/io/ingest.hpp"

namespace {

namespace fs = std::filesystem;
using namespace marsim;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct Failure {
  int code;
  std::string message;
};

SimConfig load_config(const std::string& path) {
  const io::ConfigParse parsed = io::parse_config(path);
  if (!parsed.ok()) {
    std::string all = "config errors in " + path + ":";
    for (const auto& e : parsed.errors) all += "\n  " + e;
    throw Failure{kExitValidation, all};
  }
  return parsed.config;
}

void prepare_outdir(const std::string& dir, bool force) {
  if (fs::exists(fs::path(dir) / "manifest.csv") && !force)
    throw Failure{kExitValidation,
                  dir + " already holds results; pass --force to overwrite"};
  io::ensure_dir(dir);
}

void print_manifest(const io::Manifest& manifest) {
  for (const auto& f : manifest.files)
    std::cout << "  " << f.path << "  rows=" << f.rows
              << "  checksum=" << f.checksum << '\n';
}

std::vector<std::uint64_t> batch_seeds(std::uint64_t first, int count) {
  std::vector<std::uint64_t> seeds(count);
  for (int k = 0; k < count; ++k) seeds[k] = first + k;
  return seeds;
}

std::vector<analytics::SeriesBundle> bundles_from_tickers(
    const std::vector<io::TickerSeries>& tickers) {
  std::vector<analytics::SeriesBundle> bundles;
  bundles.reserve(tickers.size());
  for (const auto& t : tickers) bundles.push_back({t.close, t.volume});
  return bundles;
}

std::vector<analytics::SeriesBundle> load_sim_bundles(const std::string& dir) {
  if (fs::exists(fs::path(dir) / "prices.csv")) return io::load_run_bundles(dir);
  std::vector<analytics::SeriesBundle> bundles;
  std::vector<fs::path> run_dirs;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_directory() && fs::exists(entry.path() / "prices.csv"))
      run_dirs.push_back(entry.path());
  std::sort(run_dirs.begin(), run_dirs.end());
  for (const auto& run_dir : run_dirs) {
    auto one = io::load_run_bundles(run_dir.string());
    for (auto& b : one) bundles.push_back(std::move(b));
  }
  if (bundles.empty())
    throw Failure{kExitValidation, "no prices.csv found under " + dir};
  return bundles;
}

int cmd_run(const std::string& config_path, const std::string& outdir,
            std::int64_t seed_override, bool has_seed, bool noise, bool force,
            const std::string& trace_path) {
  SimConfig cfg = load_config(config_path);
  if (noise) cfg.noise_agent_mode = true;
  const std::uint64_t seed =
      has_seed ? static_cast<std::uint64_t>(seed_override) : cfg.master_seed;
  prepare_outdir(outdir, force);

  std::ofstream trace;
  std::ostream* trace_sink = nullptr;
  if (!trace_path.empty()) {
    trace.open(trace_path);
    if (!trace) throw Failure{kExitValidation, "cannot write " + trace_path};
    trace << "t,agent,stock,f_state,f_action,forecast,t_state,t_action,gate_pct\n";
    trace_sink = &trace;
  }

  Simulation sim(cfg, seed, false, trace_sink);
  RunResult result = sim.finish();
  const io::Manifest manifest = io::emit_run(result, outdir);
  std::cout << "run seed=" << seed << " steps=" << cfg.step_count
            << " bankruptcies=" << result.bankruptcies.size() << '\n';
  print_manifest(manifest);
  return kExitOk;
}

int cmd_batch(const std::string& config_path, const std::string& outdir,
              int runs, int threads, bool noise, bool force) {
  SimConfig cfg = load_config(config_path);
  if (noise) cfg.noise_agent_mode = true;
  if (runs <= 0) runs = cfg.run_count;
  prepare_outdir(outdir, force);
  const auto seeds = batch_seeds(cfg.master_seed, runs);
  auto outcomes = run_batch_map(cfg, seeds, threads, [&](RunResult&& result) {
    const std::string dir =
        outdir + "/run_" + std::to_string(result.seed);
    io::emit_run(result, dir);
    return result.bankruptcies.size();
  });
  int failures = 0;
  for (const auto& outcome : outcomes) {
    if (outcome.value) {
      std::cout << "seed " << outcome.seed << ": ok, bankruptcies="
                << *outcome.value << '\n';
    } else {
      ++failures;
      std::cout << "seed " << outcome.seed << ": FAILED: " << outcome.error
                << '\n';
    }
  }
  return failures == 0 ? kExitOk : kExitRuntime;
}

int cmd_analyze(const std::string& indir, const std::string& outdir,
                bool force) {
  prepare_outdir(outdir, force);
  const auto bundles = load_sim_bundles(indir);
  const auto metrics = analytics::compute_metric_families(bundles);
  const io::Manifest manifest = io::emit_metrics(metrics, outdir);
  print_manifest(manifest);
  return kExitOk;
}

int cmd_compare(const std::string& sim_dir, const std::string& real_path,
                const std::string& outdir, bool force) {
  prepare_outdir(outdir, force);
  const auto sim_metrics =
      analytics::compute_metric_families(load_sim_bundles(sim_dir));
  const io::IngestReport ingested = io::ingest_real(real_path);
  std::cout << "real data: " << ingested.retained << " of "
            << ingested.input_tickers << " tickers retained, "
            << ingested.rows_rejected << " rows rejected\n";
  if (ingested.series.empty())
    throw Failure{kExitValidation, "no usable tickers in " + real_path};
  const auto real_metrics = analytics::compute_metric_families(
      bundles_from_tickers(ingested.series));
  const io::Manifest manifest =
      io::emit_comparison(sim_metrics, real_metrics, outdir);
  const auto distances = analytics::family_distances(sim_metrics, real_metrics);
  std::cout << "overall score (mean KS over " << distances.size()
            << " families): " << analytics::aggregate_score(distances) << '\n';
  print_manifest(manifest);
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& real_path,
              const std::string& outdir, bool resume, int max_points,
              int runs_per_point, int threads, std::int64_t split_seed,
              bool has_split_seed) {
  SimConfig cfg = load_config(config_path);
  io::ensure_dir(outdir);
  const std::string checkpoint = outdir + "/checkpoint.csv";
  if (!resume && fs::exists(checkpoint))
    throw Failure{kExitValidation,
                  checkpoint + " exists; pass --resume to continue it"};

  const io::IngestReport ingested = io::ingest_real(real_path);
  if (ingested.series.empty())
    throw Failure{kExitValidation, "no usable tickers in " + real_path};

  // deterministic half split of the tickers into train and test
  std::vector<io::TickerSeries> train, test;
  {
    const std::uint64_t sseed = has_split_seed
                                    ? static_cast<std::uint64_t>(split_seed)
                                    : cfg.master_seed;
    Rng rng(derive_seed(sseed, 0, 0, StreamPurpose::misc));
    std::vector<std::size_t> order(ingested.series.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    for (std::size_t k = order.size(); k > 1; --k)
      std::swap(order[k - 1],
                order[static_cast<std::size_t>(rng.uniform_int(0, k - 1))]);
    const std::size_t half = (order.size() + 1) / 2;
    for (std::size_t k = 0; k < order.size(); ++k)
      (k < half ? train : test).push_back(ingested.series[order[k]]);
  }
  const auto real_train =
      analytics::compute_metric_families(bundles_from_tickers(train));
  const auto real_test =
      test.empty() ? std::vector<analytics::MetricDistribution>{}
                   : analytics::compute_metric_families(bundles_from_tickers(test));

  std::vector<calib::GridPoint> points = calib::enumerate_grid();
  if (max_points > 0 && static_cast<int>(points.size()) > max_points)
    points.resize(max_points);
  const auto seeds = batch_seeds(cfg.master_seed, runs_per_point);

  std::cout << "sweeping " << points.size() << " grid points, "
            << seeds.size() << " runs each (train half: " << train.size()
            << " tickers, test half: " << test.size() << ")\n";
  const calib::SweepReport report = calib::sweep(
      points, real_train, real_test, cfg, seeds, checkpoint, threads);

  std::ofstream out(outdir + "/sweep_report.csv");
  out << "rank,I,zeta,nu,L,score,score_test";
  for (const char* f : calib::metric_family_names) out << ',' << f;
  out << ",error\n";
  int rank = 1;
  for (const auto& p : report.ranked) {
    out << rank++ << ',' << p.agent_count << ','
        << io::format_double(p.gesture_scalar) << ','
        << io::format_double(p.fundamental_amplitude) << ','
        << io::format_double(p.drawdown_threshold) << ','
        << io::format_double(p.score) << ',' << io::format_double(p.score_test);
    for (const char* f : calib::metric_family_names) {
      auto it = p.family_distances.find(f);
      out << ',' << (it == p.family_distances.end()
                         ? ""
                         : io::format_double(it->second));
    }
    out << ',' << p.error << '\n';
  }
  out.close();
  std::cout << "evaluated " << report.evaluated << " points ("
            << report.restored << " restored from checkpoint); report at "
            << outdir << "/sweep_report.csv\n";
  if (!report.ranked.empty()) {
    const auto& best = report.ranked.front();
    std::cout << "best point: I=" << best.agent_count
              << " zeta=" << best.gesture_scalar
              << " nu=" << best.fundamental_amplitude
              << " L=" << best.drawdown_threshold << " score=" << best.score
              << '\n';
  }
  return kExitOk;
}

int cmd_gen_fundamentals(const std::string& config_path,
                         const std::string& outdir, int views, bool force) {
  SimConfig cfg = load_config(config_path);
  prepare_outdir(outdir, force);
  std::vector<FundamentalSeries> truths;
  std::vector<std::vector<FundamentalView>> agent_views;
  for (int j = 0; j < cfg.stock_count; ++j) {
    Rng frng(derive_seed(cfg.master_seed, 0, j, StreamPurpose::fundamental));
    truths.push_back(
        generate_fundamental(cfg.step_count, cfg.fundamental_amplitude, frng));
    agent_views.emplace_back();
    for (int i = 0; i < views; ++i) {
      Rng vrng(derive_seed(cfg.master_seed, 0,
                           (static_cast<std::uint64_t>(i) << 16) | j,
                           StreamPurpose::agent_view));
      agent_views.back().push_back(approximate_fundamental(truths[j], vrng));
    }
  }
  const io::Manifest manifest =
      io::emit_fundamentals(truths, agent_views, outdir);
  for (int j = 0; j < cfg.stock_count; ++j) {
    const JumpStats stats = jump_statistics(truths[j]);
    std::cout << "stock " << j << ": " << stats.annual_jump_count
              << " jumps/year, mean amplitude " << stats.mean_amplitude
              << '\n';
  }
  print_manifest(manifest);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-agent reinforcement-learning stock market simulator"};
  app.require_subcommand(1);

  std::string config_path, outdir, indir, sim_dir, real_path, trace_path;
  std::int64_t seed = 0, split_seed = 0;
  int runs = 0, threads = 0, max_points = 12, views = 3;
  bool noise = false, force = false, resume = false;

  auto* run_cmd = app.add_subcommand("run", "single seeded simulation run");
  run_cmd->add_option("-c,--config", config_path, "config file")->required();
  run_cmd->add_option("-o,--out", outdir, "output directory")->required();
  auto* seed_opt = run_cmd->add_option("--seed", seed, "master seed override");
  run_cmd->add_flag("--noise", noise, "zero-intelligence agents");
  run_cmd->add_flag("--force", force, "overwrite existing outputs");
  run_cmd->add_option("--trace", trace_path, "per-decision debug CSV");

  auto* batch_cmd = app.add_subcommand("batch", "independent runs over consecutive seeds");
  batch_cmd->add_option("-c,--config", config_path, "config file")->required();
  batch_cmd->add_option("-o,--out", outdir, "output directory")->required();
  batch_cmd->add_option("--runs", runs, "number of runs (default run_count)");
  batch_cmd->add_option("--threads", threads, "worker threads (default all)");
  batch_cmd->add_flag("--noise", noise, "zero-intelligence agents");
  batch_cmd->add_flag("--force", force, "overwrite existing outputs");

  auto* sweep_cmd = app.add_subcommand("sweep", "hyperparameter grid search against real data");
  sweep_cmd->add_option("-c,--config", config_path, "base config file")->required();
  sweep_cmd->add_option("--real", real_path, "real data CSV (date,ticker,close,volume)")->required();
  sweep_cmd->add_option("-o,--out", outdir, "output directory")->required();
  sweep_cmd->add_flag("--resume", resume, "continue from checkpoint");
  sweep_cmd->add_option("--max-points", max_points,
                        "grid points to evaluate, 0 = full grid (default 12)");
  sweep_cmd->add_option("--runs", runs, "runs per point (default 2)");
  sweep_cmd->add_option("--threads", threads, "worker threads");
  auto* split_opt =
      sweep_cmd->add_option("--split-seed", split_seed, "train/test split seed");

  auto* analyze_cmd = app.add_subcommand("analyze", "metrics from an emitted run");
  analyze_cmd->add_option("-i,--in", indir, "run or batch directory")->required();
  analyze_cmd->add_option("-o,--out", outdir, "output directory")->required();
  analyze_cmd->add_flag("--force", force, "overwrite existing outputs");

  auto* compare_cmd = app.add_subcommand("compare", "simulated vs real metric tables");
  compare_cmd->add_option("--sim", sim_dir, "run or batch directory")->required();
  compare_cmd->add_option("--real", real_path, "real data CSV")->required();
  compare_cmd->add_option("-o,--out", outdir, "output directory")->required();
  compare_cmd->add_flag("--force", force, "overwrite existing outputs");

  auto* gen_cmd = app.add_subcommand("gen-fundamentals", "fundamental series with sample agent views");
  gen_cmd->add_option("-c,--config", config_path, "config file")->required();
  gen_cmd->add_option("-o,--out", outdir, "output directory")->required();
  gen_cmd->add_option("--views", views, "agent views per stock (default 3)");
  gen_cmd->add_flag("--force", force, "overwrite existing outputs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed())
      return cmd_run(config_path, outdir, seed, !seed_opt->empty(), noise,
                     force, trace_path);
    if (batch_cmd->parsed())
      return cmd_batch(config_path, outdir, runs, threads, noise, force);
    if (sweep_cmd->parsed())
      return cmd_sweep(config_path, real_path, outdir, resume, max_points,
                       runs > 0 ? runs : 2, threads, split_seed,
                       !split_opt->empty());
    if (analyze_cmd->parsed()) return cmd_analyze(indir, outdir, force);
    if (compare_cmd->parsed())
      return cmd_compare(sim_dir, real_path, outdir, force);
    if (gen_cmd->parsed())
      return cmd_gen_fundamentals(config_path, outdir, views, force);
  } catch (const Failure& failure) {
    std::cerr << "error: " << failure.message << '\n';
    return failure.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitValidation;
}
