#include <catch2/catch_amalgamated.hpp>

#include "marsim/config.hpp"

using namespace marsim;

TEST_CASE("paper headline configuration is valid") {
  SimConfig cfg;
  cfg.agent_count = 500;
  cfg.stock_count = 1;
  cfg.step_count = 2875;
  cfg.run_count = 20;
  REQUIRE(validate_config(cfg).empty());
}

TEST_CASE("zero agents rejected") {
  SimConfig cfg;
  cfg.agent_count = 0;
  const auto errors = validate_config(cfg);
  REQUIRE(errors.size() == 1);
  REQUIRE(errors[0] == "agent_count must be >= 1");
}

TEST_CASE("step count below the horizon bound rejected") {
  // 6 months plus four weeks of trading days
  REQUIRE(min_step_count_exclusive == 146);
  SimConfig cfg;
  cfg.step_count = 10;
  const auto errors = validate_config(cfg);
  REQUIRE(errors.size() == 1);
  REQUIRE(errors[0].find("step_count too small") != std::string::npos);

  cfg.step_count = 146;
  REQUIRE_FALSE(validate_config(cfg).empty());
  cfg.step_count = 147;
  REQUIRE(validate_config(cfg).empty());
}

TEST_CASE("every violated bound is reported") {
  SimConfig cfg;
  cfg.agent_count = -2;
  cfg.stock_count = 0;
  cfg.broker_fee = 1.5;
  cfg.fundamental_amplitude = 0.0;
  const auto errors = validate_config(cfg);
  REQUIRE(errors.size() == 4);
}

TEST_CASE("runtime validation tolerates tiny step counts") {
  SimConfig cfg;
  cfg.step_count = calendar::days_per_week;
  REQUIRE(validate_runtime(cfg).empty());
  REQUIRE_FALSE(validate_config(cfg).empty());
}
