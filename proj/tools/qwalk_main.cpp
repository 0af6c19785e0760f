#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qwalk/config.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/experiments.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct RunOptions {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> realizations;
  std::optional<std::string> format;
};

qwalk::ExperimentConfig resolve_config(const std::string& experiment, const RunOptions& opts) {
  qwalk::ExperimentConfig config = opts.config_path.empty()
                                       ? qwalk::ExperimentConfig::defaults(experiment)
                                       : qwalk::load_config(opts.config_path);
  if (config.experiment != experiment)
    throw qwalk::ConfigError("experiment", "config is for '" + config.experiment +
                                               "' but the command is '" + experiment + "'");
  if (opts.seed) config.seed = *opts.seed;
  if (opts.realizations) config.realizations = *opts.realizations;
  if (opts.format) config.format = *opts.format == "json" ? qwalk::OutputFormat::json
                                                          : qwalk::OutputFormat::csv;
  if (!opts.out_dir.empty()) config.output_dir = opts.out_dir;
  config.validate();
  return config;
}

// gnuplot script for the artifact of one experiment.
std::string plot_script(const std::string& experiment) {
  const std::string head = "set datafile separator ','\nset key autotitle columnhead\n";
  if (experiment == "distribution")
    return head + "set xlabel 'x'\nset ylabel 'P'\n"
                  "plot 'distribution.csv' using 7:8 with linespoints pt 7 ps 0.4\n";
  if (experiment == "heatmap")
    return head + "set view map\nset xlabel 'eta'\nset ylabel 'theta'\n"
                  "splot 'heatmap.csv' using 1:2:3 with points pt 5 ps 1 palette\n";
  if (experiment == "entropy")
    return head + "set xlabel 'theta'\nset ylabel 'H (nats)'\n"
                  "plot 'entropy.csv' using 4:($1 eq 'classical' ? NaN : $5) with points pt 7\n";
  if (experiment == "decoherence")
    return head + "set xlabel 'j'\nset ylabel 'P'\n"
                  "plot 'decoherence.csv' using 4:7 with points pt 7 ps 0.4\n";
  if (experiment == "compare-returns")
    return head + "set logscale y\nset xlabel 'g'\n"
                  "plot 'returns.csv' using 1:2 with lines, '' using 1:3 with lines, "
                  "'' using 1:4 with lines\n";
  if (experiment == "price-path")
    return head + "set xlabel 'step'\nset ylabel 'S'\n"
                  "plot 'price_path.csv' using 2:3 with lines\n";
  throw qwalk::ConfigError("experiment", "unknown experiment '" + experiment + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-walk return distributions and classical baselines"};
  app.require_subcommand(1);
  app.set_version_flag("--version", qwalk::library_version());

  RunOptions opts;
  std::map<CLI::App*, std::string> commands;
  for (const auto& name : qwalk::experiment_names()) {
    CLI::App* sub = app.add_subcommand(name, "Run the " + name + " experiment");
    sub->add_option("--config", opts.config_path, "JSON config file (defaults when omitted)")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out_dir, "Output directory");
    sub->add_option("--seed", opts.seed, "Master seed");
    sub->add_option("--realizations", opts.realizations, "Ensemble size")
        ->check(CLI::PositiveNumber);
    sub->add_option("--format", opts.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    commands[sub] = name;
  }

  std::string plot_experiment;
  std::string plot_out = ".";
  CLI::App* plot = app.add_subcommand("plot", "Write a gnuplot script for an experiment's output");
  plot->add_option("experiment", plot_experiment, "Experiment name")
      ->required()
      ->check(CLI::IsMember(qwalk::experiment_names()));
  plot->add_option("--out", plot_out, "Directory holding the experiment output");

  std::string show_experiment;
  CLI::App* show = app.add_subcommand("show-config", "Print the default config of an experiment");
  show->add_option("experiment", show_experiment, "Experiment name")
      ->required()
      ->check(CLI::IsMember(qwalk::experiment_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (show->parsed()) {
      std::cout << qwalk::serialize_config(qwalk::ExperimentConfig::defaults(show_experiment))
                << "\n";
      return 0;
    }
    if (plot->parsed()) {
      const std::filesystem::path path = std::filesystem::path(plot_out) / (plot_experiment + ".gp");
      std::filesystem::create_directories(plot_out);
      std::ofstream(path) << plot_script(plot_experiment);
      std::cout << path.string() << "\n";
      return 0;
    }
    for (const auto& [sub, name] : commands) {
      if (!sub->parsed()) continue;
      const auto config = resolve_config(name, opts);
      const auto artifacts = qwalk::run_experiment(config);
      for (const auto& p : qwalk::write_artifacts(config, artifacts, config.output_dir))
        std::cout << p.string() << "\n";
      return 0;
    }
  } catch (const qwalk::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const qwalk::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
