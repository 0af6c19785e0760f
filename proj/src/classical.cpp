#include "qwalk/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "qwalk/errors.hpp"
#include "qwalk/random.hpp"

namespace qwalk {

namespace {

using std::numbers::pi;

// Small alpha pushes the truncation point out very far; give up rather
// than grind through it.
constexpr long kMaxPanels = 2'000'000;

bool alpha_is_one(double alpha) { return std::abs(alpha - 1.0) < kAlphaOneBand; }

// Upper bound on |d(phase)/dt| of exp(-ixt) phi(t) near t, used to size
// panels to about half an oscillation.
double phase_rate(double x, double t, const StableParams& p) {
  double rate = std::abs(x - p.mu);
  const double ct = std::max(p.c * t, 1e-300);
  if (alpha_is_one(p.alpha)) {
    rate += std::abs(p.beta) * (2.0 / pi) * p.c * (std::abs(std::log(ct)) + 1.0);
  } else {
    rate += std::abs(p.beta * std::tan(pi * p.alpha / 2)) * p.alpha * p.c *
            std::pow(ct, p.alpha - 1.0);
  }
  return rate;
}

struct PanelSum {
  double value = 0;
  double error = 0;
};

double inversion_integrand(double x, double t, const StableParams& p) {
  return (std::exp(std::complex<double>(0, -x * t)) * stable_cf(t, p)).real();
}

// |t|^alpha has a cusp at the origin that Gauss-Kronrod bisection cannot
// resolve; tanh-sinh clusters its nodes at the endpoints and handles it.
PanelSum integrate_head(double x, const StableParams& p, double to) {
  boost::math::quadrature::tanh_sinh<double> ts;
  PanelSum out;
  out.value = ts.integrate([&](double t) { return inversion_integrand(x, t, p); }, 0.0, to,
                           1e-13, &out.error);
  return out;
}

// Bisect until the Kronrod error estimate fits an absolute budget. Boost's
// own refinement is relative to the panel's L1 norm, which cannot be met
// where |phi| is already near the cutoff.
template <typename F>
PanelSum kronrod_absolute(const F& f, double a, double b, double budget, int depth) {
  PanelSum out;
  out.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &out.error);
  if (out.error <= budget || depth <= 0) return out;
  const double mid = 0.5 * (a + b);
  const PanelSum l = kronrod_absolute(f, a, mid, 0.5 * budget, depth - 1);
  const PanelSum r = kronrod_absolute(f, mid, b, 0.5 * budget, depth - 1);
  return {l.value + r.value, l.error + r.error};
}

PanelSum integrate_panels(double x, const StableParams& p, double from, double to,
                          const QuadratureSpec& quad) {
  auto integrand = [&](double t) { return inversion_integrand(x, t, p); };
  const double budget_per_t = 0.25 * quad.abs_tol * pi / (to - from);
  PanelSum out;
  if ((to - from) * p.c / 8.0 > double(kMaxPanels))
    throw NumericalError("stable_pdf: inversion needs more than " + std::to_string(kMaxPanels) +
                         " panels at x = " + std::to_string(x));
  double t = from;
  long panels = 0;
  while (t < to) {
    if (++panels > kMaxPanels)
      throw NumericalError("stable_pdf: inversion needs more than " + std::to_string(kMaxPanels) +
                           " panels at x = " + std::to_string(x));
    // Rate is largest at the panel start for alpha < 1 and at the end
    // otherwise; probe both.
    const double probe = std::max(t, 1e-3 / p.c);
    double rate = std::max(phase_rate(x, probe, p), phase_rate(x, probe + 1.0 / p.c, p));
    double width = std::clamp(pi / (rate + 0.5), 1e-3 / p.c, 8.0 / p.c);
    const double end = std::min(to, t + width);
    const PanelSum s = kronrod_absolute(integrand, t, end, budget_per_t * (end - t), quad.max_depth);
    out.value += s.value;
    out.error += s.error;
    t = end;
  }
  return out;
}

}  // namespace

void GbmParams::validate() const {
  if (!std::isfinite(mu)) throw std::invalid_argument("gbm mu must be finite");
  if (!(sigma >= 0) || !std::isfinite(sigma)) throw std::invalid_argument("gbm sigma must be >= 0");
  if (!(s0 > 0) || !std::isfinite(s0)) throw std::invalid_argument("gbm s0 must be > 0");
}

void StableParams::validate() const {
  if (!(alpha > 0 && alpha <= 2)) throw std::invalid_argument("stable alpha must lie in (0, 2]");
  if (!(beta >= -1 && beta <= 1)) throw std::invalid_argument("stable beta must lie in [-1, 1]");
  if (!(c > 0) || !std::isfinite(c)) throw std::invalid_argument("stable c must be > 0");
  if (!std::isfinite(mu)) throw std::invalid_argument("stable mu must be finite");
}

Eigen::ArrayXd gbm_terminal_samples(const GbmParams& params, double t, int count,
                                    std::uint64_t seed) {
  params.validate();
  if (!(t >= 0)) throw std::invalid_argument("horizon must be non-negative");
  if (count < 1) throw std::invalid_argument("sample count must be at least 1");
  RandomSource rng(seed);
  const double drift = (params.mu - 0.5 * params.sigma * params.sigma) * t;
  const double scale = params.sigma * std::sqrt(t);
  Eigen::ArrayXd out(count);
  for (int i = 0; i < count; ++i) out(i) = params.s0 * std::exp(scale * rng.normal() + drift);
  return out;
}

Eigen::ArrayXd gbm_path(const GbmParams& params, double dt, int steps, std::uint64_t seed) {
  params.validate();
  if (!(dt > 0)) throw std::invalid_argument("dt must be positive");
  if (steps < 1) throw std::invalid_argument("steps must be at least 1");
  RandomSource rng(seed);
  const double drift = (params.mu - 0.5 * params.sigma * params.sigma) * dt;
  const double scale = params.sigma * std::sqrt(dt);
  Eigen::ArrayXd s(steps + 1);
  double log_s = std::log(params.s0);
  s(0) = params.s0;
  for (int k = 1; k <= steps; ++k) {
    log_s += scale * rng.normal() + drift;
    s(k) = std::exp(log_s);
  }
  return s;
}

PositionDistribution classical_rw_distribution(int n) {
  if (n < 0) throw std::invalid_argument("step count must be non-negative");
  Eigen::ArrayXd p = Eigen::ArrayXd::Zero(2 * Eigen::Index(n) + 1);
  const double log_norm = std::lgamma(n + 1.0) - n * std::numbers::ln2;
  for (int k = 0; k <= n; ++k)
    p(2 * k) = std::exp(log_norm - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
  return {n, std::move(p)};
}

std::complex<double> stable_cf(double t, const StableParams& p) {
  if (t == 0.0) return {1.0, 0.0};
  const double at = std::abs(t);
  const double sign = t > 0 ? 1.0 : -1.0;
  const double omega =
      alpha_is_one(p.alpha) ? -(2.0 / pi) * std::log(at) : std::tan(pi * p.alpha / 2);
  const double scale = std::pow(p.c * at, alpha_is_one(p.alpha) ? 1.0 : p.alpha);
  const std::complex<double> exponent(-scale, p.mu * t + scale * p.beta * sign * omega);
  return std::exp(exponent);
}

double stable_pdf(double x, const StableParams& params, const QuadratureSpec& quad) {
  params.validate();
  const double alpha = alpha_is_one(params.alpha) ? 1.0 : params.alpha;
  const double cutoff = std::pow(-std::log(quad.cf_cutoff), 1.0 / alpha) / params.c;

  const double head_end = std::min(cutoff, std::min(1.0 / params.c,
                                                    pi / (std::abs(x - params.mu) + 0.5)));
  PanelSum main = integrate_head(x, params, head_end);
  const PanelSum body = integrate_panels(x, params, head_end, cutoff, quad);
  main.value += body.value;
  main.error += body.error;
  const PanelSum tail = integrate_panels(x, params, cutoff, 2.0 * cutoff, quad);
  if (main.error + tail.error > quad.abs_tol * pi)
    throw NumericalError("stable_pdf: quadrature error estimate above tolerance at x = " +
                         std::to_string(x));
  if (std::abs(tail.value) > quad.abs_tol * pi)
    throw NumericalError("stable_pdf: doubling the truncation changed the result at x = " +
                         std::to_string(x));
  return std::max(0.0, main.value / pi);
}

double gaussian_pdf(double x, double mu, double sigma) {
  if (!(sigma > 0)) throw std::invalid_argument("sigma must be positive");
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * pi));
}

double gaussian_cdf(double x, double mu, double sigma) {
  if (!(sigma > 0)) throw std::invalid_argument("sigma must be positive");
  return 0.5 * std::erfc(-(x - mu) / (sigma * std::numbers::sqrt2));
}

}  // namespace qwalk
