#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qwalk/classical.hpp"
#include "qwalk/coin.hpp"
#include "qwalk/decoherence.hpp"
#include "qwalk/pricing.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

/// Inclusive range sampled at `count` equally spaced points.
struct GridAxis {
  double min = 0.0;
  double max = 1.0;
  int count = 2;

  std::vector<double> values() const;
  bool operator==(const GridAxis&) const = default;
};

struct SweepGrid {
  GridAxis eta;
  GridAxis theta;
  bool operator==(const SweepGrid&) const = default;
};

struct NamedInitialState {
  std::string name;
  InitialCoinState state;
  bool operator==(const NamedInitialState&) const = default;
};

/// Axis written next to the site index in distribution output.
enum class PositionAxis { site, scaled_n, scaled_ballistic };

enum class HeatmapStatistic { skewness, variance_over_n2 };

enum class OutputFormat { csv, json };

struct ReturnAxis {
  double g_min = -8.0;
  double g_max = 8.0;
  int bins = 161;
  double gaussian_mu = 0.0;
  double gaussian_sigma = 1.0;
  StableParams stable{0.5, 0.5, 0.70710678118654752, 0.0};
  bool operator==(const ReturnAxis&) const = default;
};

/// Everything one CLI command needs. Every experiment is a pure function of
/// this struct (the seed is part of it).
struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 42;
  int realizations = 1000;
  std::vector<int> steps{100};
  std::vector<NamedInitialState> initial_states;
  std::vector<CoinAngles> coins;
  PositionAxis axis = PositionAxis::site;
  int bin_width = 1;
  SweepGrid grid;
  HeatmapStatistic statistic = HeatmapStatistic::skewness;
  std::vector<double> link_probabilities;
  std::vector<double> phase_probabilities;
  ReturnAxis returns;
  QwPriceModel model;
  int total_steps = 10000;
  std::string output_dir = ".";
  OutputFormat format = OutputFormat::csv;

  /// Defaults reproducing the corresponding figure for `experiment`.
  static ExperimentConfig defaults(const std::string& experiment);

  /// Throws ConfigError naming the first offending field.
  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Commands understood by the CLI.
const std::vector<std::string>& experiment_names();

/// Parse a JSON document; fields absent from the document keep the defaults
/// of the named experiment. Unknown keys are errors.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

/// Full JSON echo of the config (every field, defaults included).
std::string serialize_config(const ExperimentConfig& config, int indent = 2);

const char* to_string(PositionAxis axis);
const char* to_string(HeatmapStatistic statistic);
const char* to_string(OutputFormat format);

}  // namespace qwalk
