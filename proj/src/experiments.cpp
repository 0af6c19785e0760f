#include "qwalk/experiments.hpp"

#include <cfloat>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "qwalk/classical.hpp"
#include "qwalk/decoherence.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/pricing.hpp"
#include "qwalk/stats.hpp"
#include "qwalk/walk.hpp"

#ifndef QWALK_VERSION
#define QWALK_VERSION "0.0.0"
#endif

namespace qwalk {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

PositionDistribution unitary_distribution(const InitialCoinState& ic, const CoinAngles& angles,
                                          int n) {
  return position_distribution(evolve(ic, make_su2_coin(angles), n));
}

double axis_value(PositionAxis axis, int j, int n) {
  switch (axis) {
    case PositionAxis::site: return j;
    case PositionAxis::scaled_n: return n > 0 ? double(j) / n : 0.0;
    case PositionAxis::scaled_ballistic:
      return n > 0 ? double(j) * std::numbers::sqrt2 / n : 0.0;
  }
  return j;
}

// Spread the work out, keep the rows in input order.
template <typename Row, typename Fn>
std::vector<Row> ordered_map(std::size_t count, Fn&& fn) {
  std::vector<Row> out(count);
  parallel_for(count, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace

const char* library_version() { return QWALK_VERSION; }

std::vector<Artifact> run_distribution(const ExperimentConfig& config) {
  struct Job {
    const NamedInitialState* ic;
    const CoinAngles* coin;
    int n;
  };
  std::vector<Job> jobs;
  for (const auto& ic : config.initial_states)
    for (const auto& coin : config.coins)
      for (int n : config.steps) jobs.push_back({&ic, &coin, n});

  const auto dists = ordered_map<PositionDistribution>(jobs.size(), [&](std::size_t i) {
    return unitary_distribution(jobs[i].ic->state, *jobs[i].coin, jobs[i].n);
  });

  Table table({"ic", "xi", "theta", "zeta", "n", "j", "x", "P"});
  Table hist({"ic", "xi", "theta", "zeta", "n", "bin_lo", "bin_hi", "center", "mass"});
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& [ic, coin, n] = jobs[i];
    const auto& d = dists[i];
    for (Eigen::Index k = 0; k < d.size(); ++k)
      table.add_row({ic->name, coin->xi(), coin->theta(), coin->zeta(), std::int64_t(n),
                     std::int64_t(d.site(k)), axis_value(config.axis, d.site(k), n), d.probs(k)});
    if (config.bin_width > 1) {
      const Histogram h = aggregate_histogram(d, config.bin_width);
      for (Eigen::Index b = 0; b < h.bins(); ++b)
        hist.add_row({ic->name, coin->xi(), coin->theta(), coin->zeta(), std::int64_t(n),
                      h.bin_edges(b), h.bin_edges(b + 1), h.center(b), h.masses(b)});
    }
  }
  std::vector<Artifact> out{{"distribution", std::move(table)}};
  if (config.bin_width > 1) out.push_back({"histogram", std::move(hist)});
  return out;
}

std::vector<Artifact> run_heatmap(const ExperimentConfig& config) {
  const auto etas = config.grid.eta.values();
  const auto thetas = config.grid.theta.values();
  const auto& ic = config.initial_states.front().state;
  const int n = config.steps.front();

  const auto values = ordered_map<double>(etas.size() * thetas.size(), [&](std::size_t i) {
    const double eta = etas[i / thetas.size()];
    const double theta = thetas[i % thetas.size()];
    const SummaryStats s = moments(unitary_distribution(ic, CoinAngles(eta, theta, 0.0), n));
    if (config.statistic == HeatmapStatistic::skewness) return s.skewness;
    return n > 0 ? s.variance / (double(n) * n) : 0.0;
  });

  Table table({"eta", "theta", to_string(config.statistic)});
  for (std::size_t i = 0; i < values.size(); ++i)
    table.add_row({etas[i / thetas.size()], thetas[i % thetas.size()], values[i]});
  return {{"heatmap", std::move(table)}};
}

std::vector<Artifact> run_entropy(const ExperimentConfig& config) {
  const auto thetas = config.grid.theta.values();
  const auto& ic = config.initial_states.front().state;

  struct Job {
    int n;
    double p_tilde;
    double theta;
  };
  std::vector<Job> jobs;
  for (int n : config.steps)
    for (double p : config.phase_probabilities)
      for (double theta : thetas) jobs.push_back({n, p, theta});

  const auto entropies = ordered_map<double>(jobs.size(), [&](std::size_t i) {
    const auto& job = jobs[i];
    const DecoherenceSpec spec =
        job.p_tilde > 0 ? DecoherenceSpec::random_phase(job.p_tilde) : DecoherenceSpec::none();
    const auto result = run_ensemble(ic, job.theta, spec, job.n, config.realizations, config.seed);
    return shannon_entropy(result.mean.probs);
  });

  Table table({"series", "n", "p_tilde", "theta", "entropy"});
  for (std::size_t i = 0; i < jobs.size(); ++i)
    table.add_row({std::string(jobs[i].p_tilde > 0 ? "random_phase" : "unitary"),
                   std::int64_t(jobs[i].n), jobs[i].p_tilde, jobs[i].theta, entropies[i]});
  for (int n : config.steps) {
    table.add_row({std::string("classical"), std::int64_t(n), kNaN, kNaN,
                   shannon_entropy(classical_rw_distribution(n).probs)});
    table.add_row({std::string("uniform"), std::int64_t(n), kNaN, kNaN, std::log(n + 1.0)});
  }
  return {{"entropy", std::move(table)}};
}

std::vector<Artifact> run_decoherence(const ExperimentConfig& config) {
  const auto& ic = config.initial_states.front().state;
  const CoinAngles& coin = config.coins.front();
  if (coin.xi() != 0 || coin.zeta() != 0)
    throw ConfigError("coins[0]", "broken links need a U_theta coin (xi = zeta = 0)");

  struct Job {
    int n;
    double p;
  };
  std::vector<Job> jobs;
  for (int n : config.steps)
    for (double p : config.link_probabilities) jobs.push_back({n, p});

  const auto results = ordered_map<EnsembleResult>(jobs.size(), [&](std::size_t i) {
    const DecoherenceSpec spec =
        jobs[i].p > 0 ? DecoherenceSpec::broken_links(jobs[i].p) : DecoherenceSpec::none();
    return run_ensemble(ic, coin, spec, jobs[i].n, config.realizations, config.seed);
  });

  Table dist({"series", "p", "n", "j", "P", "sem", "P_normalized"});
  Table summary({"p", "n", "tv_classical", "binned_tv_classical", "tv_unitary",
                 "binned_tv_unitary", "variance_over_n2", "entropy"});
  for (int n : config.steps) {
    const PositionDistribution classical = classical_rw_distribution(n);
    const PositionDistribution unitary = unitary_distribution(ic, coin, n);
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (jobs[i].n != n) continue;
      const auto& r = results[i];
      const PositionDistribution scaled = normalize_to_reference(r.mean, classical);
      for (Eigen::Index k = 0; k < r.mean.size(); ++k)
        dist.add_row({std::string("broken_links"), jobs[i].p, std::int64_t(n),
                      std::int64_t(r.mean.site(k)), r.mean.probs(k), r.sem(k), scaled.probs(k)});
      const SummaryStats s = moments(r.mean);
      summary.add_row({jobs[i].p, std::int64_t(n), total_variation(r.mean, classical),
                       binned_total_variation(r.mean, classical),
                       total_variation(r.mean, unitary), binned_total_variation(r.mean, unitary),
                       n > 0 ? s.variance / (double(n) * n) : 0.0, s.entropy});
    }
    for (Eigen::Index k = 0; k < classical.size(); ++k)
      dist.add_row({std::string("classical"), kNaN, std::int64_t(n),
                    std::int64_t(classical.site(k)), classical.probs(k), 0.0, classical.probs(k)});
  }
  return {{"decoherence", std::move(dist)}, {"decoherence_summary", std::move(summary)}};
}

std::vector<Artifact> run_compare_returns(const ExperimentConfig& config) {
  const ReturnAxis& ax = config.returns;
  const int bins = ax.bins;
  const double width = (ax.g_max - ax.g_min) / (bins - 1);
  std::vector<double> g(static_cast<std::size_t>(bins));
  for (int i = 0; i < bins; ++i)
    g[std::size_t(i)] = (ax.g_min * (bins - 1 - i) + ax.g_max * i) / (bins - 1);

  std::vector<double> gaussian(g.size()), stable(g.size()), quantum(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i)
    gaussian[i] = gaussian_pdf(g[i], ax.gaussian_mu, ax.gaussian_sigma) * width;
  parallel_for(g.size(), [&](std::size_t i) { stable[i] = stable_pdf(g[i], ax.stable) * width; });

  const ReturnDistribution qr = qw_return_distribution(config.model, config.seed, config.realizations);
  for (Eigen::Index k = 0; k < qr.returns.size(); ++k) {
    const double pos = (qr.returns(k) - ax.g_min) / width;
    const long bin = std::lround(pos);
    if (bin >= 0 && bin < bins) quantum[std::size_t(bin)] += qr.probs(k);
  }

  auto normalize = [](std::vector<double>& col) {
    double total = 0;
    for (double v : col) total += v;
    if (!(total > 0)) throw NumericalError("compare-returns: a column has no mass in the window");
    for (double& v : col) v = std::max(v / total, DBL_MIN);
  };
  normalize(gaussian);
  normalize(stable);
  normalize(quantum);

  Table table({"g", "gaussian", "stable", "quantum"});
  for (std::size_t i = 0; i < g.size(); ++i) table.add_row({g[i], gaussian[i], stable[i], quantum[i]});

  auto window_tail = [&](const std::vector<double>& col, double t) {
    double s = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (std::abs(g[i]) > t) s += col[i];
    return s;
  };
  Table summary({"column", "tail_mass_3", "skewness"});
  summary.add_row({std::string("gaussian"),
                   2.0 * (1.0 - gaussian_cdf(3.0, ax.gaussian_mu, ax.gaussian_sigma)), 0.0});
  summary.add_row({std::string("stable"), window_tail(stable, 3.0), kNaN});
  summary.add_row({std::string("quantum"), qr.tail_mass(3.0), qr.skewness()});
  return {{"returns", std::move(table)}, {"returns_summary", std::move(summary)}};
}

std::vector<Artifact> run_price_path(const ExperimentConfig& config) {
  const Eigen::ArrayXd prices = qw_price_path(config.model, config.total_steps, config.seed);
  const int n = config.model.steps_per_horizon;

  Table path({"k", "step", "price"});
  for (Eigen::Index k = 0; k < prices.size(); ++k)
    path.add_row({std::int64_t(k), std::int64_t(std::min<long>(k * n, config.total_steps)),
                  prices(k)});
  std::vector<Artifact> out{{"price_path", std::move(path)}};

  if (prices.size() > 2) {
    const Eigen::ArrayXd g = normalized_returns(prices);
    Table returns({"k", "g"});
    for (Eigen::Index k = 0; k < g.size(); ++k) returns.add_row({std::int64_t(k + 1), g(k)});
    out.push_back({"normalized_returns", std::move(returns)});
  }
  return out;
}

std::vector<Artifact> run_experiment(const ExperimentConfig& config) {
  config.validate();
  const std::string& e = config.experiment;
  if (e == "distribution") return run_distribution(config);
  if (e == "heatmap") return run_heatmap(config);
  if (e == "entropy") return run_entropy(config);
  if (e == "decoherence") return run_decoherence(config);
  if (e == "compare-returns") return run_compare_returns(config);
  if (e == "price-path") return run_price_path(config);
  throw ConfigError("experiment", "unknown experiment '" + e + "'");
}

std::string meta_json(const ExperimentConfig& config, const std::vector<Artifact>& artifacts) {
  nlohmann::ordered_json names = nlohmann::ordered_json::array();
  for (const auto& a : artifacts) names.push_back(a.name);
  nlohmann::ordered_json meta;
  meta["experiment"] = config.experiment;
  meta["seed"] = config.seed;
  meta["version"] = library_version();
  meta["format"] = to_string(config.format);
  meta["artifacts"] = names;
  meta["config"] = nlohmann::ordered_json::parse(serialize_config(config, -1));
  return meta.dump(2) + "\n";
}

std::vector<std::filesystem::path> write_artifacts(const ExperimentConfig& config,
                                                   const std::vector<Artifact>& artifacts,
                                                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto write = [&](const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + path.string());
    written.push_back(path);
  };
  const bool csv = config.format == OutputFormat::csv;
  for (const auto& a : artifacts)
    write(dir / (a.name + (csv ? ".csv" : ".json")), csv ? to_csv(a.table) : to_json(a.table));
  write(dir / (config.experiment + ".meta.json"), meta_json(config, artifacts));
  return written;
}

}  // namespace qwalk
