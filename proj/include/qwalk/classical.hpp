#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Core>

#include "qwalk/walk.hpp"

namespace qwalk {

/// dS = mu S dt + sigma S dW
struct GbmParams {
  double mu = 0.0;
  double sigma = 1.0;
  double s0 = 1.0;

  void validate() const;
  bool operator==(const GbmParams&) const = default;
};

/// Stable law with characteristic function
///   phi(t) = exp(i mu t - |c t|^alpha (1 - i beta sign(t) omega(|t|, alpha)))
/// where omega = tan(pi alpha / 2) for alpha != 1 and -(2/pi) ln|t| for
/// alpha = 1. This is the parameterization used verbatim; no conversion to
/// other conventions is attempted.
struct StableParams {
  double alpha = 2.0;
  double beta = 0.0;
  double c = 1.0;
  double mu = 0.0;

  void validate() const;
  bool operator==(const StableParams&) const = default;
};

/// Alpha within this distance of 1 takes the logarithmic branch.
inline constexpr double kAlphaOneBand = 1e-8;

struct QuadratureSpec {
  /// Target absolute error of the inversion integral.
  double abs_tol = 1e-9;
  /// Truncate where |phi(t)| drops below this.
  double cf_cutoff = 1e-16;
  int max_depth = 12;
};

/// S(0) exp(sigma sqrt(t) Z + (mu - sigma^2/2) t), Z ~ N(0, 1).
Eigen::ArrayXd gbm_terminal_samples(const GbmParams& params, double t, int count,
                                    std::uint64_t seed);

/// Price path on a uniform grid using exact log-increments; steps + 1 prices.
Eigen::ArrayXd gbm_path(const GbmParams& params, double dt, int steps, std::uint64_t seed);

/// Binomial C(n, (n+j)/2) / 2^n on parity-allowed sites.
PositionDistribution classical_rw_distribution(int n);

std::complex<double> stable_cf(double t, const StableParams& params);

/// Density by Fourier inversion,
///   f(x) = (1/pi) int_0^inf Re[exp(-i x t) phi(t)] dt,
/// truncated where |phi| < cf_cutoff and integrated panel by panel with
/// Gauss-Kronrod. Throws NumericalError when the quadrature error estimate
/// or the doubled-truncation check exceeds abs_tol. Clamped at zero.
double stable_pdf(double x, const StableParams& params, const QuadratureSpec& quad = {});

double gaussian_pdf(double x, double mu, double sigma);
double gaussian_cdf(double x, double mu, double sigma);

}  // namespace qwalk
