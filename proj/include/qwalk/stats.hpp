#pragma once

#include <Eigen/Core>

#include "qwalk/walk.hpp"

namespace qwalk {

struct SummaryStats {
  double mean = 0;
  /// kappa_2
  double variance = 0;
  /// gamma_1 = kappa_3 / kappa_2^{3/2}; NaN when the variance is zero.
  double skewness = 0;
  bool skewness_defined = true;
  /// Shannon entropy in nats.
  double entropy = 0;
};

/// Mean, variance, skewness and entropy of P_j over the site index j.
///
/// Sums use Neumaier compensation; central moments come from a second pass
/// around the mean. Sites with P_j = 0 do not contribute to the entropy.
SummaryStats moments(const PositionDistribution& dist);

/// -sum p ln p over the nonzero entries.
double shannon_entropy(const Eigen::Ref<const Eigen::ArrayXd>& probs);

struct Histogram {
  Eigen::ArrayXd bin_edges;
  Eigen::ArrayXd masses;

  Eigen::Index bins() const noexcept { return masses.size(); }
  double center(Eigen::Index i) const { return 0.5 * (bin_edges(i) + bin_edges(i + 1)); }
};

/// Sum P_j over consecutive runs of `bin_width` sites starting at j = -n.
///
/// Edges sit at half-integers. With width 2 and even n every bin holds
/// exactly one parity-allowed site.
Histogram aggregate_histogram(const PositionDistribution& dist, int bin_width = 2);

/// Trapezoidal integral of P_j over all sites [-n, n] with unit spacing.
double trapezoid_integral(const PositionDistribution& dist);

/// Scale `dist` so its trapezoidal integral matches that of `ref`.
PositionDistribution normalize_to_reference(const PositionDistribution& dist,
                                            const PositionDistribution& ref);

/// Zero-pad to a common support [-max(n1, n2), max(n1, n2)].
PositionDistribution pad_to(const PositionDistribution& dist, int steps);

/// 1/2 sum_j |P1_j - P2_j| over the common support.
double total_variation(const PositionDistribution& d1, const PositionDistribution& d2);

/// Total variation between width-`bin_width` aggregates of the two
/// distributions on the common support. Width 2 removes the even/odd site
/// structure, so walks that can stay in place compare meaningfully against
/// parity-supported references.
double binned_total_variation(const PositionDistribution& d1, const PositionDistribution& d2,
                              int bin_width = 2);

/// P'_j = P_{-j}
PositionDistribution reflect(const PositionDistribution& dist);

}  // namespace qwalk
