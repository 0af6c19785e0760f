#include "qwalk/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qwalk {

namespace {

class NeumaierSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0;
  double comp_ = 0;
};

}  // namespace

double shannon_entropy(const Eigen::Ref<const Eigen::ArrayXd>& probs) {
  NeumaierSum h;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    const double p = probs(i);
    if (p < 0) throw std::invalid_argument("probabilities must be non-negative");
    if (p > 0) h.add(-p * std::log(p));
  }
  return std::max(0.0, h.value());
}

SummaryStats moments(const PositionDistribution& dist) {
  NeumaierSum total, first;
  for (Eigen::Index i = 0; i < dist.size(); ++i) {
    total.add(dist.probs(i));
    first.add(dist.site(i) * dist.probs(i));
  }
  if (!(total.value() > 0)) throw std::invalid_argument("distribution has no mass");

  SummaryStats out;
  out.mean = first.value() / total.value();

  NeumaierSum second, third;
  for (Eigen::Index i = 0; i < dist.size(); ++i) {
    const double d = dist.site(i) - out.mean;
    const double w = dist.probs(i);
    second.add(d * d * w);
    third.add(d * d * d * w);
  }
  out.variance = std::max(0.0, second.value() / total.value());
  const double k3 = third.value() / total.value();
  if (out.variance > 0) {
    out.skewness = k3 / std::pow(out.variance, 1.5);
  } else {
    out.skewness = std::numeric_limits<double>::quiet_NaN();
    out.skewness_defined = false;
  }
  out.entropy = shannon_entropy(dist.probs);
  return out;
}

Histogram aggregate_histogram(const PositionDistribution& dist, int bin_width) {
  if (bin_width < 1) throw std::invalid_argument("bin width must be at least one site");
  const Eigen::Index sites = dist.size();
  const Eigen::Index bins = (sites + bin_width - 1) / bin_width;
  Histogram h;
  h.masses = Eigen::ArrayXd::Zero(bins);
  h.bin_edges.resize(bins + 1);
  for (Eigen::Index k = 0; k <= bins; ++k)
    h.bin_edges(k) = dist.first_site() - 0.5 + double(k * bin_width);
  h.bin_edges(bins) = std::min(h.bin_edges(bins), dist.last_site() + 0.5);
  for (Eigen::Index i = 0; i < sites; ++i) h.masses(i / bin_width) += dist.probs(i);
  return h;
}

double trapezoid_integral(const PositionDistribution& dist) {
  if (dist.size() == 1) return dist.probs(0);
  return dist.probs.sum() - 0.5 * (dist.probs(0) + dist.probs(dist.size() - 1));
}

PositionDistribution normalize_to_reference(const PositionDistribution& dist,
                                            const PositionDistribution& ref) {
  const double target = trapezoid_integral(ref);
  const double current = trapezoid_integral(dist);
  if (!(current > 0)) throw std::invalid_argument("distribution has zero integral");
  return {dist.steps, dist.probs * (target / current)};
}

PositionDistribution pad_to(const PositionDistribution& dist, int steps) {
  if (steps < dist.steps) throw std::invalid_argument("cannot pad to a smaller support");
  Eigen::ArrayXd p = Eigen::ArrayXd::Zero(2 * Eigen::Index(steps) + 1);
  p.segment(steps - dist.steps, dist.size()) = dist.probs;
  return {steps, std::move(p)};
}

double total_variation(const PositionDistribution& d1, const PositionDistribution& d2) {
  const int n = std::max(d1.steps, d2.steps);
  const auto p = pad_to(d1, n);
  const auto q = pad_to(d2, n);
  return 0.5 * (p.probs - q.probs).abs().sum();
}

double binned_total_variation(const PositionDistribution& d1, const PositionDistribution& d2,
                              int bin_width) {
  const int n = std::max(d1.steps, d2.steps);
  const auto p = aggregate_histogram(pad_to(d1, n), bin_width);
  const auto q = aggregate_histogram(pad_to(d2, n), bin_width);
  return 0.5 * (p.masses - q.masses).abs().sum();
}

PositionDistribution reflect(const PositionDistribution& dist) {
  return {dist.steps, dist.probs.reverse().eval()};
}

}  // namespace qwalk
