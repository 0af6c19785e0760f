#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "qwalk/coin.hpp"
#include "qwalk/random.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

/// Which decoherence mechanism governs a run.
///
/// Other mechanisms found in the literature (coin measurement, completely
/// positive maps on the coin, periodic joint measurement, a different coin
/// per step, bit-flip channels) are not provided.
struct DecoherenceSpec {
  enum class Mode { none, broken_links, random_phase };

  Mode mode = Mode::none;
  /// p for broken_links, p_tilde for random_phase; unused for none.
  double probability = 0.0;

  static DecoherenceSpec none() { return {}; }
  static DecoherenceSpec broken_links(double p);
  static DecoherenceSpec random_phase(double p_tilde);

  bool operator==(const DecoherenceSpec&) const = default;
};

const char* to_string(DecoherenceSpec::Mode mode);

/// Broken flags for links (j, j+1), j in [-radius-1, radius], for one step.
class LinkMask {
 public:
  explicit LinkMask(int radius = 0, bool broken = false);

  /// Fresh i.i.d. Bernoulli(p) mask, links drawn left to right.
  static LinkMask sample(int radius, double p, RandomSource& rng);

  int radius() const noexcept { return radius_; }
  int first_link() const noexcept { return -radius_ - 1; }
  int last_link() const noexcept { return radius_; }

  /// Whether link (j, j+1) is broken. Links outside the universe are intact.
  bool broken(int j) const noexcept {
    return j >= first_link() && j <= last_link() && flags_[std::size_t(j - first_link())] != 0;
  }
  void set_broken(int j, bool value);

 private:
  int radius_;
  std::vector<std::uint8_t> flags_;
};

/// One step of the U_theta walk with broken links, in place.
///
/// Per site j, with cos/sin of theta as (c, s):
///   both links intact : the unitary recurrence
///   (j, j+1) broken   : a_j' = c a_{j-1} + s b_{j-1},  b_j' = c a_j + s b_j
///   (j-1, j) broken   : a_j' = s a_j - c b_j,          b_j' = s a_{j+1} - c b_{j+1}
///   both broken       : a_j' = s a_j - c b_j,          b_j' = c a_j + s b_j
/// Flux that would cross a broken link is handed to the other coin
/// component on the same site, so the total norm is conserved. The mask must
/// cover links [-n-1, n] of the current support.
void step_broken_links_inplace(WalkState& state, double theta, const LinkMask& mask);
WalkState step_broken_links(WalkState state, double theta, const LinkMask& mask);

/// Same, taking the coin explicitly; throws unless it is a U_theta coin.
WalkState step_broken_links(WalkState state, const CoinOperator& coin, const LinkMask& mask);

/// Averaged distribution over stochastic realizations.
struct EnsembleResult {
  PositionDistribution mean;
  /// Standard error of the mean per site.
  Eigen::ArrayXd sem;
  int realizations = 0;
  std::uint64_t seed = 0;
};

/// Distribution of one realization. Realization r draws from
/// RandomSource::for_stream(seed, r), so it does not depend on scheduling.
PositionDistribution run_realization(const InitialCoinState& ic, const CoinAngles& angles,
                                     const DecoherenceSpec& spec, int n, std::uint64_t seed,
                                     std::uint64_t realization);

/// Ensemble mean and per-site standard error.
///
/// Realizations are grouped in fixed blocks of consecutive indices; blocks
/// may run on any thread, and are merged in block order, so the result is a
/// pure function of the arguments. The mean is renormalized to sum to one.
/// With Mode::none the walk is deterministic and evaluated once.
///
/// Broken links and random phase are defined for U_theta coins only; a coin
/// with nonzero xi or zeta is rejected for those modes.
EnsembleResult run_ensemble(const InitialCoinState& ic, const CoinAngles& angles,
                            const DecoherenceSpec& spec, int n, int realizations,
                            std::uint64_t seed);

inline EnsembleResult run_ensemble(const InitialCoinState& ic, double theta,
                                   const DecoherenceSpec& spec, int n, int realizations,
                                   std::uint64_t seed) {
  return run_ensemble(ic, CoinAngles::theta_only(theta), spec, n, realizations, seed);
}

}  // namespace qwalk
