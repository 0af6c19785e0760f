#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "qwalk/coin.hpp"
#include "qwalk/decoherence.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

/// f(t) in dS = mu S dt + sigma S f(t) dQ.
class DiffusionScaler {
 public:
  enum class Mode { unit, inverse_sqrt, table };

  static DiffusionScaler unit() { return DiffusionScaler(Mode::unit, {}); }
  /// f(t) = t^{-1/2}, with f(0) := 1.
  static DiffusionScaler inverse_sqrt() { return DiffusionScaler(Mode::inverse_sqrt, {}); }
  /// Piecewise-linear through (t, f) points sorted by t; held constant
  /// outside the table. Every f must be positive.
  static DiffusionScaler table(std::vector<std::pair<double, double>> points);

  Mode mode() const noexcept { return mode_; }
  const std::vector<std::pair<double, double>>& points() const noexcept { return points_; }

  double operator()(double t) const;

  bool operator==(const DiffusionScaler&) const = default;

 private:
  DiffusionScaler(Mode mode, std::vector<std::pair<double, double>> points)
      : mode_(mode), points_(std::move(points)) {}

  Mode mode_;
  std::vector<std::pair<double, double>> points_;
};

const char* to_string(DiffusionScaler::Mode mode);

/// Quantum-walk asset price model. The Wiener increment of GBM is replaced
/// by the walk displacement after `steps_per_horizon` steps, read out on a
/// lattice of spacing `lattice_scale` in log-return units.
struct QwPriceModel {
  double mu = 0.0;
  double sigma = 1.0;
  InitialCoinState ic = InitialCoinState::symmetric();
  CoinAngles angles = CoinAngles::hadamard();
  DecoherenceSpec decoherence = DecoherenceSpec::none();
  int steps_per_horizon = 100;
  double dt_per_step = 1.0;
  DiffusionScaler scaler = DiffusionScaler::unit();
  double s0 = 1.0;
  /// Log-return per lattice site before sigma and f are applied. When empty
  /// it is calibrated at the model's own horizon so that the return standard
  /// deviation equals sigma.
  std::optional<double> lattice_scale;

  double horizon() const noexcept { return steps_per_horizon * dt_per_step; }
  bool operator==(const QwPriceModel&) const = default;
  void validate() const;
};

struct ReturnDistribution {
  /// Return value attached to each lattice site.
  Eigen::ArrayXd returns;
  Eigen::ArrayXd probs;
  double horizon = 0.0;

  double mean() const;
  double variance() const;
  double skewness() const;
  /// P(|r| > threshold)
  double tail_mass(double threshold) const;
};

/// Walk distribution of the model at `steps` steps (ensemble mean when the
/// model decoheres).
PositionDistribution model_walk_distribution(const QwPriceModel& model, int steps,
                                             std::uint64_t seed, int realizations);

/// 1 / (f(horizon) std_j) so that sigma f(horizon) std_j dx = sigma.
double calibrate_lattice_scale(const QwPriceModel& model, std::uint64_t seed, int realizations);

/// Log-returns r_j = mu dt + sigma f(dt) j dx over one horizon of `steps`
/// steps, before normalization. Uses model.lattice_scale when set and
/// calibrates at `steps` otherwise.
ReturnDistribution raw_return_distribution(const QwPriceModel& model, int steps,
                                           std::uint64_t seed, int realizations);

/// Raw returns divided by their standard deviation: g = r / sd(r).
/// Throws std::invalid_argument for a zero-variance walk.
ReturnDistribution qw_return_distribution(const QwPriceModel& model, std::uint64_t seed,
                                          int realizations);

/// Prices at horizon boundaries 0, n, 2n, ..., total_steps (the last horizon
/// may be shorter). Each horizon samples one site from a freshly evolved walk
/// (a measurement at the horizon end) and compounds S <- S exp(r).
///
/// The walk is measured only at horizon boundaries: measuring every step
/// would reduce it to the classical random walk.
Eigen::ArrayXd qw_price_path(const QwPriceModel& model, int total_steps, std::uint64_t seed);

/// r / sd(r) with the N - 1 sample standard deviation. Idempotent.
/// Throws std::invalid_argument when the values are constant.
Eigen::ArrayXd unit_variance(const Eigen::Ref<const Eigen::ArrayXd>& values);

/// Lag-`lag` log-differences divided by their sample standard deviation
/// (N - 1 denominator), so the output has unit sample variance.
Eigen::ArrayXd normalized_returns(const Eigen::Ref<const Eigen::ArrayXd>& prices, int lag = 1);

}  // namespace qwalk
