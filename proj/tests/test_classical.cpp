#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qwalk/classical.hpp"
#include "qwalk/errors.hpp"

using namespace qwalk;
using std::numbers::pi;

TEST_SUITE("classical") {

TEST_CASE("classical walk is binomial on the parity sites") {
  for (int n : {0, 1, 2, 17, 100, 400}) {
    const auto d = classical_rw_distribution(n);
    const auto ref = oracle::binomial_sites(n);
    CHECK(d.steps == n);
    CHECK(std::abs(d.total() - 1.0) < 1e-12);
    for (Eigen::Index i = 0; i < d.size(); ++i)
      CHECK(d.probs(i) == doctest::Approx(ref[std::size_t(i)]).epsilon(1e-11));
  }
  CHECK_THROWS_AS(classical_rw_distribution(-1), std::invalid_argument);
}

TEST_CASE("gbm terminal log-price moments") {
  const GbmParams p{0.05, 0.2, 100.0};
  const double t = 2.0;
  const auto s = gbm_terminal_samples(p, t, 200000, 17);
  const Eigen::ArrayXd x = (s / p.s0).log();
  const double mean = x.mean();
  const double var = (x - mean).square().sum() / double(x.size() - 1);
  const double m_exact = (p.mu - 0.5 * p.sigma * p.sigma) * t;
  const double v_exact = p.sigma * p.sigma * t;
  CHECK(std::abs(mean - m_exact) < 4 * std::sqrt(v_exact / x.size()));
  CHECK(std::abs(var - v_exact) < 4 * v_exact * std::sqrt(2.0 / x.size()));
  CHECK((s > 0).all());
  CHECK((gbm_terminal_samples(p, t, 10, 3) == gbm_terminal_samples(p, t, 10, 3)).all());
}

TEST_CASE("gbm path") {
  const GbmParams p{0.1, 0.0, 2.0};
  const auto path = gbm_path(p, 0.5, 8, 1);
  CHECK(path.size() == 9);
  CHECK(path(0) == 2.0);
  CHECK(path(8) == doctest::Approx(2.0 * std::exp(0.1 * 4.0)).epsilon(1e-13));

  const GbmParams q{0.045, 0.3, 1.0};
  const auto noisy = gbm_path(q, 1.0, 20000, 5);
  const Eigen::ArrayXd lr = noisy.tail(20000).log() - noisy.head(20000).log();
  const double var = (lr - lr.mean()).square().sum() / 19999.0;
  CHECK(var == doctest::Approx(0.09).epsilon(0.05));
  CHECK_THROWS_AS(gbm_path(q, 0.0, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(gbm_path(GbmParams{0, -1, 1}, 1.0, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(gbm_terminal_samples(GbmParams{0, 1, 0}, 1.0, 10, 1), std::invalid_argument);
}

TEST_CASE("stable parameter validation") {
  CHECK_THROWS_AS((StableParams{0.0, 0, 1, 0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((StableParams{2.5, 0, 1, 0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((StableParams{1.5, 1.2, 1, 0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((StableParams{1.5, 0, 0, 0}.validate()), std::invalid_argument);
  CHECK_NOTHROW((StableParams{2.0, -1, 0.1, 3}.validate()));
}

TEST_CASE("characteristic function") {
  const StableParams p{0.7, 0.4, 1.3, 0.2};
  CHECK(stable_cf(0.0, p) == std::complex<double>(1, 0));
  for (double t : {-5.0, -0.1, 0.3, 2.0}) {
    CHECK(std::abs(stable_cf(t, p)) <= 1.0);
    CHECK(std::abs(stable_cf(-t, p) - std::conj(stable_cf(t, p))) < 1e-15);
  }
  const StableParams g{2.0, 0, 1 / std::sqrt(2.0), 0};
  CHECK(std::abs(stable_cf(1.5, g) - std::exp(-0.5 * 1.5 * 1.5)) < 1e-15);
}

TEST_CASE("alpha = 2 is the normal density") {
  const StableParams p{2.0, 0.0, 1 / std::sqrt(2.0), 0.0};
  double worst = 0;
  for (double x = -6; x <= 6; x += 0.25)
    worst = std::max(worst, std::abs(stable_pdf(x, p) - gaussian_pdf(x, 0, 1)));
  CHECK(worst < 1e-6);
}

TEST_CASE("alpha = 1, beta = 0 is Cauchy") {
  for (double c : {0.5, 1.0, 2.0}) {
    const StableParams p{1.0, 0.0, c, 0.0};
    for (double x = -10; x <= 10; x += 0.5)
      CHECK(std::abs(stable_pdf(x, p) - oracle::cauchy_pdf(x, c)) < 1e-8);
  }
}

TEST_CASE("heavy-tailed density matches the series away from the origin") {
  const oracle::StableSeries series{0.5, 0.5, 1 / std::sqrt(2.0)};
  const StableParams p{0.5, 0.5, 1 / std::sqrt(2.0), 0.0};
  for (double x : {-40.0, -10.0, -4.0, 4.0, 10.0, 40.0})
    CHECK(stable_pdf(x, p) == doctest::Approx(series.pdf(x)).epsilon(1e-7));
}

TEST_CASE("location shifts the density") {
  const StableParams p{1.4, 0.3, 0.8, 0.0};
  const StableParams q{1.4, 0.3, 0.8, 1.5};
  for (double x : {-2.0, 0.0, 1.0})
    CHECK(stable_pdf(x + 1.5, q) == doctest::Approx(stable_pdf(x, p)).epsilon(1e-9));
}

TEST_CASE("alpha within the band of one uses the logarithmic form") {
  const StableParams one{1.0, 0.6, 1.0, 0.0};
  const StableParams near{1.0 + 1e-9, 0.6, 1.0, 0.0};
  for (double x : {-3.0, 0.0, 2.0}) CHECK(stable_pdf(x, near) == stable_pdf(x, one));
  // beta = 0 has no discontinuity at alpha = 1.
  const StableParams sym{1.0, 0.0, 1.0, 0.0};
  const StableParams sym_near{1.001, 0.0, 1.0, 0.0};
  CHECK(stable_pdf(0.5, sym_near) == doctest::Approx(stable_pdf(0.5, sym)).epsilon(1e-3));
}

TEST_CASE("skewed densities are non-negative and lean with beta") {
  const StableParams p{1.5, 1.0, 1.0, 0.0};
  const StableParams m{1.5, -1.0, 1.0, 0.0};
  for (double x : {-3.0, -1.0, 0.0, 1.0, 3.0}) {
    CHECK(stable_pdf(x, p) >= 0.0);
    CHECK(stable_pdf(x, p) == doctest::Approx(stable_pdf(-x, m)).epsilon(1e-9));
  }
}

TEST_CASE("failed self-check raises NumericalError") {
  QuadratureSpec strict;
  strict.abs_tol = 1e-30;
  CHECK_THROWS_AS(stable_pdf(0.3, StableParams{0.5, 0.5, 1.0, 0.0}, strict), NumericalError);
  CHECK_THROWS_AS(stable_pdf(0.3, StableParams{0.05, 0.0, 1.0, 0.0}), NumericalError);
}

TEST_CASE("gaussian helpers") {
  CHECK(gaussian_pdf(0, 0, 1) == doctest::Approx(1 / std::sqrt(2 * pi)).epsilon(1e-15));
  CHECK(gaussian_cdf(0, 0, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(gaussian_cdf(1.3, 0, 1) + gaussian_cdf(-1.3, 0, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gaussian_cdf(3, 1, 2) == doctest::Approx(gaussian_cdf(1, 0, 1)).epsilon(1e-15));
  CHECK_THROWS_AS(gaussian_pdf(0, 0, 0), std::invalid_argument);
}

}
