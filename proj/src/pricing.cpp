#include "qwalk/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "qwalk/random.hpp"
#include "qwalk/stats.hpp"

namespace qwalk {

namespace {

constexpr int kDefaultCalibrationRealizations = 1000;

// Stream ids for price paths; kept apart from ensemble realization ids.
constexpr std::uint64_t kSamplingStream = 0x5a3f'0000'0000'0000ULL;
constexpr std::uint64_t kHorizonStream = 0x6b4e'0000'0000'0000ULL;

double weighted_sd(const PositionDistribution& d) { return std::sqrt(moments(d).variance); }

int sample_site(const PositionDistribution& d, double u) {
  double acc = 0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    acc += d.probs(i);
    if (u < acc) return d.site(i);
  }
  for (Eigen::Index i = d.size() - 1; i >= 0; --i)
    if (d.probs(i) > 0) return d.site(i);
  return 0;
}

}  // namespace

DiffusionScaler DiffusionScaler::table(std::vector<std::pair<double, double>> points) {
  if (points.empty()) throw std::invalid_argument("scaler table must not be empty");
  std::sort(points.begin(), points.end());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i].first) || !(points[i].second > 0) ||
        !std::isfinite(points[i].second))
      throw std::invalid_argument("scaler table needs finite t and positive f");
    if (i > 0 && points[i].first == points[i - 1].first)
      throw std::invalid_argument("scaler table has duplicate t");
  }
  return DiffusionScaler(Mode::table, std::move(points));
}

double DiffusionScaler::operator()(double t) const {
  switch (mode_) {
    case Mode::unit: return 1.0;
    case Mode::inverse_sqrt: return t > 0 ? 1.0 / std::sqrt(t) : 1.0;
    case Mode::table: {
      if (t <= points_.front().first) return points_.front().second;
      if (t >= points_.back().first) return points_.back().second;
      const auto hi = std::upper_bound(points_.begin(), points_.end(), t,
                                       [](double v, const auto& p) { return v < p.first; });
      const auto lo = hi - 1;
      const double w = (t - lo->first) / (hi->first - lo->first);
      return lo->second + w * (hi->second - lo->second);
    }
  }
  return 1.0;
}

const char* to_string(DiffusionScaler::Mode mode) {
  switch (mode) {
    case DiffusionScaler::Mode::unit: return "unit";
    case DiffusionScaler::Mode::inverse_sqrt: return "inverse_sqrt";
    case DiffusionScaler::Mode::table: return "table";
  }
  return "?";
}

void QwPriceModel::validate() const {
  if (!std::isfinite(mu)) throw std::invalid_argument("mu must be finite");
  if (!(sigma >= 0) || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be >= 0");
  if (!(s0 > 0) || !std::isfinite(s0)) throw std::invalid_argument("s0 must be > 0");
  if (steps_per_horizon < 1) throw std::invalid_argument("steps_per_horizon must be >= 1");
  if (!(dt_per_step > 0) || !std::isfinite(dt_per_step))
    throw std::invalid_argument("dt_per_step must be > 0");
  if (std::abs(ic.norm() - 1.0) > 1e-9) throw std::invalid_argument("initial state not normalized");
  if (lattice_scale && !(*lattice_scale > 0)) throw std::invalid_argument("lattice_scale must be > 0");
}

double ReturnDistribution::mean() const { return (returns * probs).sum() / probs.sum(); }

double ReturnDistribution::variance() const {
  const double m = mean();
  return ((returns - m).square() * probs).sum() / probs.sum();
}

double ReturnDistribution::skewness() const {
  const double m = mean();
  const double v = variance();
  return ((returns - m).cube() * probs).sum() / probs.sum() / std::pow(v, 1.5);
}

double ReturnDistribution::tail_mass(double threshold) const {
  return (returns.abs() > threshold).select(probs, 0.0).sum();
}

PositionDistribution model_walk_distribution(const QwPriceModel& model, int steps,
                                             std::uint64_t seed, int realizations) {
  return run_ensemble(model.ic, model.angles, model.decoherence, steps, realizations, seed).mean;
}

double calibrate_lattice_scale(const QwPriceModel& model, std::uint64_t seed, int realizations) {
  model.validate();
  const auto dist = model_walk_distribution(model, model.steps_per_horizon, seed, realizations);
  const double sd = weighted_sd(dist);
  if (!(sd > 0)) throw std::invalid_argument("walk distribution has zero variance");
  return 1.0 / (model.scaler(model.horizon()) * sd);
}

ReturnDistribution raw_return_distribution(const QwPriceModel& model, int steps,
                                           std::uint64_t seed, int realizations) {
  model.validate();
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  const auto dist = model_walk_distribution(model, steps, seed, realizations);
  const double sd = weighted_sd(dist);
  if (!(sd > 0)) throw std::invalid_argument("walk distribution has zero variance");

  const double dt = steps * model.dt_per_step;
  const double f = model.scaler(dt);
  const double dx = model.lattice_scale ? *model.lattice_scale : 1.0 / (f * sd);

  ReturnDistribution out;
  out.horizon = dt;
  out.probs = dist.probs;
  out.returns.resize(dist.size());
  for (Eigen::Index i = 0; i < dist.size(); ++i)
    out.returns(i) = model.mu * dt + model.sigma * f * dist.site(i) * dx;
  return out;
}

ReturnDistribution qw_return_distribution(const QwPriceModel& model, std::uint64_t seed,
                                          int realizations) {
  ReturnDistribution out =
      raw_return_distribution(model, model.steps_per_horizon, seed, realizations);
  const double sd = std::sqrt(out.variance());
  if (!(sd > 0)) throw std::invalid_argument("return distribution has zero variance");
  out.returns /= sd;
  return out;
}

Eigen::ArrayXd qw_price_path(const QwPriceModel& model, int total_steps, std::uint64_t seed) {
  model.validate();
  if (total_steps < 1) throw std::invalid_argument("total_steps must be >= 1");

  const double dx = model.lattice_scale
                        ? *model.lattice_scale
                        : calibrate_lattice_scale(model, seed, kDefaultCalibrationRealizations);
  const int n = model.steps_per_horizon;
  const int horizons = (total_steps + n - 1) / n;
  const bool stochastic = model.decoherence.mode != DecoherenceSpec::Mode::none;

  RandomSource sampler = RandomSource::for_stream(seed, kSamplingStream);
  std::map<int, PositionDistribution> unitary_cache;

  Eigen::ArrayXd prices(horizons + 1);
  prices(0) = model.s0;
  double log_s = std::log(model.s0);
  for (int h = 0; h < horizons; ++h) {
    const int steps = std::min(n, total_steps - h * n);
    PositionDistribution dist;
    if (stochastic) {
      dist = run_realization(model.ic, model.angles, model.decoherence, steps,
                             stream_seed(seed, kHorizonStream), std::uint64_t(h));
    } else {
      auto it = unitary_cache.find(steps);
      if (it == unitary_cache.end())
        it = unitary_cache.emplace(steps, model_walk_distribution(model, steps, seed, 1)).first;
      dist = it->second;
    }
    const int j = sample_site(dist, sampler.uniform());
    const double dt = steps * model.dt_per_step;
    log_s += model.mu * dt + model.sigma * model.scaler(dt) * j * dx;
    prices(h + 1) = std::exp(log_s);
  }
  return prices;
}

Eigen::ArrayXd normalized_returns(const Eigen::Ref<const Eigen::ArrayXd>& prices, int lag) {
  if (lag < 1) throw std::invalid_argument("lag must be >= 1");
  if (prices.size() <= lag + 1) throw std::invalid_argument("series too short for the lag");
  if (!(prices > 0).all()) throw std::invalid_argument("prices must be positive");
  const Eigen::Index m = prices.size() - lag;
  const Eigen::ArrayXd logs = prices.log();
  return unit_variance(logs.tail(m) - logs.head(m));
}

Eigen::ArrayXd unit_variance(const Eigen::Ref<const Eigen::ArrayXd>& values) {
  if (values.size() < 2) throw std::invalid_argument("need at least two values");
  const double mean = values.mean();
  const double var = (values - mean).square().sum() / double(values.size() - 1);
  const double scale = std::max(1.0, values.abs().maxCoeff());
  if (!(var > 1e-24 * scale * scale)) throw std::invalid_argument("values have zero variance");
  return values / std::sqrt(var);
}

}  // namespace qwalk
