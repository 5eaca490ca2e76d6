#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "homog/config.hpp"

using namespace homog;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("homog_cfg_" + name);
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("config file fields are applied") {
  const auto path = write_temp("ok.json", R"({"alpha": 2, "beta": 3, "lambda": 0.25, "eps_grid": [0.5, 0.25],
    "tolerances": {"g1": 0.01}, "seed": 9, "threads": 3, "output_dir": "x"})");
  const auto cfg = load_config(path);
  CHECK(cfg.alpha == 2.0);
  CHECK(cfg.lambda == 0.25);
  CHECK(cfg.eps_grid == std::vector<double>{0.5, 0.25});
  CHECK(cfg.tolerances.g1 == 0.01);
  CHECK(cfg.tolerances.limit == 1e-2);
  CHECK(cfg.seed == 9);
  validate(cfg);
}

TEST_CASE("config errors name the field") {
  CHECK_THROWS_AS(load_config("/nonexistent/homog.json"), ConfigError);
  try {
    load_config(write_temp("typo.json", R"({"alpah": 1})"));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("alpah") != std::string::npos);
  }
  try {
    load_config(write_temp("type.json", R"({"eps_grid": [0.5, "a"]})"));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("eps_grid[1]") != std::string::npos);
  }
  try {
    load_config(write_temp("syntax.json", "{\n\"alpha\": 1,\n}"));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line") != std::string::npos);
  }
}

TEST_CASE("validation") {
  RunConfig cfg;
  cfg.tolerances.g1 = 0.0;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = RunConfig{};
  cfg.lambda = 1.0;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = RunConfig{};
  cfg.potential = "quartic";
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = RunConfig{};
  cfg.kernel = nlohmann::json{{"breakpoints", {0.0, 0.5}}, {"values", {1.0, -1.0}}};
  CHECK_THROWS_AS(validate(cfg), ConfigError);
}

TEST_CASE("provenance JSON leaves out execution-only fields") {
  RunConfig a, b;
  b.threads = 8;
  b.output_dir = "elsewhere";
  CHECK(to_json(a).dump() == to_json(b).dump());
  CHECK_FALSE(to_json(a).contains("threads"));
  CHECK(to_json(a).at("alpha") == 1.0);
}
