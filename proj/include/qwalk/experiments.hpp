#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <filesystem>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "qwalk/config.hpp"
#include "qwalk/table.hpp"

namespace qwalk {

/// One output file, named without extension.
struct Artifact {
  std::string name;
  Table table;
};

/// (ic, xi, theta, zeta, n, j, x, P); plus a "histogram" artifact when
/// bin_width > 1.
std::vector<Artifact> run_distribution(const ExperimentConfig& config);
/// (eta, theta, value) over grid.eta x grid.theta, first initial state and
/// first step count.
std::vector<Artifact> run_heatmap(const ExperimentConfig& config);
/// (series, n, p_tilde, theta, entropy) for each n and p_tilde, with
/// classical and uniform reference rows (theta = nan).
std::vector<Artifact> run_entropy(const ExperimentConfig& config);
/// Ensemble means with sem per link probability, the classical reference,
/// and a summary of distances.
std::vector<Artifact> run_decoherence(const ExperimentConfig& config);
/// Gaussian, stable and quantum-walk masses on a shared normalized-return
/// axis, plus a summary of tail masses.
std::vector<Artifact> run_compare_returns(const ExperimentConfig& config);
/// Price path and its normalized returns.
std::vector<Artifact> run_price_path(const ExperimentConfig& config);

/// Dispatch on config.experiment. Validates first.
std::vector<Artifact> run_experiment(const ExperimentConfig& config);

/// Write each artifact as <dir>/<name>.<csv|json> and a
/// <dir>/<experiment>.meta.json sidecar (config echo, seed, version).
/// Returns the paths written, in order.
std::vector<std::filesystem::path> write_artifacts(const ExperimentConfig& config,
                                                   const std::vector<Artifact>& artifacts,
                                                   const std::filesystem::path& dir);

std::string meta_json(const ExperimentConfig& config, const std::vector<Artifact>& artifacts);

const char* library_version();

/// Run fn(i) for i in [0, count) on up to hardware_concurrency threads.
/// fn must write only to its own slot; the first exception is rethrown.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next = count;
          }
        }
      });
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace qwalk
