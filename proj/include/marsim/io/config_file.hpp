#pragma once

#include <string>
#include <vector>

#include "marsim/config.hpp"
#include "marsim/io/csv.hpp"

namespace marsim::io {

struct ConfigParse {
  SimConfig config;
  std::vector<std::string> errors;  // empty on success
  bool ok() const { return errors.empty(); }
};

// Flat `key = value` file; '#' starts a comment; unknown keys are rejected.
// An empty file yields the defaults. Every error carries its line number,
// and range violations from validate_config are appended afterwards.
inline ConfigParse parse_config(const std::string& path) {
  ConfigParse out;
  std::vector<std::string> lines;
  try {
    lines = read_lines(path);
  } catch (const std::exception& e) {
    out.errors.push_back(e.what());
    return out;
  }

  for (std::size_t n = 0; n < lines.size(); ++n) {
    std::string line = lines[n];
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = " at line " + std::to_string(n + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      out.errors.push_back("malformed line (expected key = value)" + where);
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    SimConfig& cfg = out.config;

    auto as_int = [&](int& slot) {
      long long v = 0;
      if (!parse_int64(value, v))
        out.errors.push_back("invalid integer for " + key + where);
      else
        slot = static_cast<int>(v);
    };
    auto as_double = [&](double& slot) {
      double v = 0.0;
      if (!parse_double(value, v))
        out.errors.push_back("invalid number for " + key + where);
      else
        slot = v;
    };
    auto as_bool = [&](bool& slot) {
      if (value == "true" || value == "1")
        slot = true;
      else if (value == "false" || value == "0")
        slot = false;
      else
        out.errors.push_back("invalid boolean for " + key + where);
    };

    if (key == "agent_count") as_int(cfg.agent_count);
    else if (key == "stock_count") as_int(cfg.stock_count);
    else if (key == "step_count") as_int(cfg.step_count);
    else if (key == "run_count") as_int(cfg.run_count);
    else if (key == "broker_fee") as_double(cfg.broker_fee);
    else if (key == "annual_risk_free") as_double(cfg.annual_risk_free);
    else if (key == "annual_dividend") as_double(cfg.annual_dividend);
    else if (key == "gesture_scalar") as_double(cfg.gesture_scalar);
    else if (key == "fundamental_amplitude") as_double(cfg.fundamental_amplitude);
    else if (key == "drawdown_threshold") as_double(cfg.drawdown_threshold);
    else if (key == "master_seed") {
      long long v = 0;
      if (!parse_int64(value, v))
        out.errors.push_back("invalid integer for master_seed" + where);
      else
        cfg.master_seed = static_cast<std::uint64_t>(v);
    } else if (key == "noise_agent_mode") as_bool(cfg.noise_agent_mode);
    else if (key == "literal_trade_reward_map")
      as_bool(cfg.literal_trade_reward_map);
    else out.errors.push_back("unknown key '" + key + "'" + where);
  }

  for (const std::string& err : validate_config(out.config))
    out.errors.push_back(err);
  return out;
}

}  // namespace marsim::io
