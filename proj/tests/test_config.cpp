#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "qwalk/config.hpp"
#include "qwalk/errors.hpp"

using namespace qwalk;

namespace {

// Path of the ConfigError raised while parsing `text`, or "<none>".
std::string error_path(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<none>";
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("defaults validate for every experiment") {
  for (const auto& name : experiment_names()) {
    const auto c = ExperimentConfig::defaults(name);
    CHECK(c.experiment == name);
    CHECK_NOTHROW(c.validate());
  }
  CHECK_THROWS_AS(ExperimentConfig::defaults("nope"), ConfigError);
}

TEST_CASE("figure defaults") {
  const auto heat = ExperimentConfig::defaults("heatmap");
  CHECK(heat.grid.theta.count == 64);
  CHECK(heat.grid.eta.count == 64);
  CHECK(heat.grid.theta.min == 0.01);
  CHECK(heat.grid.theta.max == doctest::Approx(std::numbers::pi / 2 - 0.01));
  CHECK(heat.steps == std::vector<int>{100});

  const auto dist = ExperimentConfig::defaults("distribution");
  CHECK(dist.steps == std::vector<int>{50, 100, 200});

  const auto dec = ExperimentConfig::defaults("decoherence");
  CHECK(dec.link_probabilities == std::vector<double>{0.01, 0.1, 0.3, 0.5});
  CHECK(dec.realizations == 1000);

  const auto cr = ExperimentConfig::defaults("compare-returns");
  CHECK(cr.model.ic == InitialCoinState::up());
  CHECK(cr.model.decoherence == DecoherenceSpec::broken_links(0.3));
  CHECK(cr.model.steps_per_horizon == 100);
  CHECK(cr.returns.stable.alpha == 0.5);
  CHECK(cr.returns.stable.c == doctest::Approx(1 / std::sqrt(2.0)));
}

TEST_CASE("grid axis values include both ends") {
  const GridAxis a{0.0, 1.0, 5};
  const auto v = a.values();
  REQUIRE(v.size() == 5);
  CHECK(v.front() == 0.0);
  CHECK(v.back() == 1.0);
  CHECK(v[2] == 0.5);
}

TEST_CASE("round trip through JSON") {
  for (const auto& name : experiment_names()) {
    const auto c = ExperimentConfig::defaults(name);
    CHECK(parse_config(serialize_config(c)) == c);
  }

  auto c = ExperimentConfig::defaults("compare-returns");
  c.seed = 123456789012345ULL;
  c.model.scaler = DiffusionScaler::table({{0, 1}, {10, 0.3}});
  c.model.lattice_scale = 0.0125;
  c.model.angles = CoinAngles::theta_only(0.3);
  c.model.decoherence = DecoherenceSpec::random_phase(0.25);
  c.returns.bins = 41;
  c.format = OutputFormat::json;
  c.initial_states = {{"odd", {{0.6, 0.0}, {0.0, 0.8}}}};
  c.coins = {CoinAngles(0.1, 0.2, 0.3), CoinAngles(1.1, 0.7, 2.9)};
  c.axis = PositionAxis::scaled_ballistic;
  const auto back = parse_config(serialize_config(c));
  CHECK(back == c);
  CHECK(serialize_config(back) == serialize_config(c));
}

TEST_CASE("absent fields keep the defaults") {
  const auto c = parse_config(R"({"experiment": "heatmap", "seed": 7})");
  auto expected = ExperimentConfig::defaults("heatmap");
  expected.seed = 7;
  CHECK(c == expected);
}

TEST_CASE("partial nested objects") {
  const auto c = parse_config(
      R"({"experiment": "heatmap", "grid": {"theta": {"count": 8}}, "statistic": "variance_over_n2"})");
  CHECK(c.grid.theta.count == 8);
  CHECK(c.grid.theta.min == 0.01);
  CHECK(c.grid.eta.count == 64);
  CHECK(c.statistic == HeatmapStatistic::variance_over_n2);
}

TEST_CASE("errors name the offending field") {
  CHECK(error_path(R"({"experiment": "heatmap", "bogus": 1})") == "bogus");
  CHECK(error_path(R"({"experiment": "heatmap", "grid": {"theta": {"cnt": 3}}})") == "grid.theta.cnt");
  CHECK(error_path(R"({"experiment": "heatmap", "grid": {"theta": {"count": "x"}}})") == "grid.theta.count");
  CHECK(error_path(R"({"experiment": "heatmap", "grid": {"theta": {"count": 1}}})") == "grid.theta.count");
  CHECK(error_path(R"({"experiment": "heatmap", "grid": {"theta": {"max": 1.5707963267948966}}})") ==
        "grid.theta.max");
  CHECK(error_path(R"({"experiment": "heatmap", "grid": {"eta": {"max": 2.0}}})") == "grid.eta.max");
  CHECK(error_path(R"({"experiment": "heatmap", "grid": {"eta": {"min": -0.1}}})") == "grid.eta.min");
  CHECK(error_path(R"({"experiment": "heatmap", "statistic": "kurtosis"})") == "statistic");
  CHECK(error_path(R"({"experiment": "distribution", "steps": [10, -1]})") == "steps[1]");
  CHECK(error_path(R"({"experiment": "distribution", "initial_states": [{"a0": [1, 0], "b0": [1, 0]}]})") ==
        "initial_states[0]");
  CHECK(error_path(R"({"experiment": "distribution", "initial_states": [{"a0": [1], "b0": [0, 0]}]})") ==
        "initial_states[0].a0");
  CHECK(error_path(R"({"experiment": "distribution", "coins": [{"theta": 0.1, "phi": 2}]})") ==
        "coins[0].phi");
  CHECK(error_path(R"({"experiment": "decoherence", "link_probabilities": [0.1, 1.5]})") ==
        "link_probabilities[1]");
  CHECK(error_path(R"({"experiment": "compare-returns", "model": {"decoherence": {"mode": "dephase"}}})") ==
        "model.decoherence.mode");
  CHECK(error_path(R"({"experiment": "compare-returns", "model": {"scaler": {"mode": "table"}}})") ==
        "model.scaler.table");
  CHECK(error_path(R"({"experiment": "compare-returns", "returns": {"stable": {"alpha": 3}}})") ==
        "returns.stable");
  CHECK(error_path(R"({"experiment": "compare-returns", "model": {"coin": {"xi": 0.4}}})") == "model.coin");
  CHECK(error_path(R"({"experiment": "price-path", "output": {"format": "xml"}})") == "output.format");
  CHECK(error_path(R"({"seed": 1})") == "experiment");
  CHECK(error_path(R"({"experiment": "spectrum"})") == "experiment");
  CHECK(error_path(R"({"experiment": "heatmap", "seed": -3})") == "seed");
  CHECK(error_path(R"([1, 2])") == "");
}

TEST_CASE("malformed JSON is a config error") {
  CHECK_THROWS_AS(parse_config("{\"experiment\": "), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("enum names") {
  CHECK(std::string(to_string(PositionAxis::scaled_n)) == "scaled_n");
  CHECK(std::string(to_string(HeatmapStatistic::skewness)) == "skewness");
  CHECK(std::string(to_string(OutputFormat::json)) == "json");
}

}
