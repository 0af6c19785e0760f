#include "qwalk/decoherence.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace qwalk {

namespace {

constexpr int kBlockSize = 16;

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability must lie in [0, 1]");
}

void check_theta_family(const CoinAngles& angles, const DecoherenceSpec& spec) {
  if (spec.mode != DecoherenceSpec::Mode::none && (angles.xi() != 0.0 || angles.zeta() != 0.0))
    throw std::invalid_argument(std::string(to_string(spec.mode)) +
                                " decoherence requires a U_theta coin (xi = zeta = 0)");
}

// Running mean / M2 for one block, merged with Chan's update.
struct Moments {
  double count = 0;
  Eigen::ArrayXd mean;
  Eigen::ArrayXd m2;

  void add(const Eigen::ArrayXd& x) {
    if (count == 0) {
      count = 1;
      mean = x;
      m2 = Eigen::ArrayXd::Zero(x.size());
      return;
    }
    count += 1;
    const Eigen::ArrayXd delta = x - mean;
    mean += delta / count;
    m2 += delta * (x - mean);
  }

  void merge(const Moments& other) {
    if (other.count == 0) return;
    if (count == 0) {
      *this = other;
      return;
    }
    const double total = count + other.count;
    const Eigen::ArrayXd delta = other.mean - mean;
    mean += delta * (other.count / total);
    m2 += other.m2 + delta.square() * (count * other.count / total);
    count = total;
  }
};

}  // namespace

DecoherenceSpec DecoherenceSpec::broken_links(double p) {
  check_probability(p);
  return {Mode::broken_links, p};
}

DecoherenceSpec DecoherenceSpec::random_phase(double p_tilde) {
  check_probability(p_tilde);
  return {Mode::random_phase, p_tilde};
}

const char* to_string(DecoherenceSpec::Mode mode) {
  switch (mode) {
    case DecoherenceSpec::Mode::none: return "none";
    case DecoherenceSpec::Mode::broken_links: return "broken_links";
    case DecoherenceSpec::Mode::random_phase: return "random_phase";
  }
  return "?";
}

LinkMask::LinkMask(int radius, bool broken)
    : radius_(radius), flags_(std::size_t(2 * radius + 2), broken ? 1 : 0) {
  if (radius < 0) throw std::invalid_argument("link mask radius must be non-negative");
}

LinkMask LinkMask::sample(int radius, double p, RandomSource& rng) {
  check_probability(p);
  LinkMask mask(radius);
  for (auto& f : mask.flags_) f = rng.bernoulli(p) ? 1 : 0;
  return mask;
}

void LinkMask::set_broken(int j, bool value) {
  if (j < first_link() || j > last_link()) throw std::out_of_range("link outside mask");
  flags_[std::size_t(j - first_link())] = value ? 1 : 0;
}

void step_broken_links_inplace(WalkState& state, double theta, const LinkMask& mask) {
  const int n = state.steps();
  if (mask.radius() < n) throw std::invalid_argument("link mask does not cover the support");

  state.reserve_step();
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const Eigen::Index off = state.offset();
  auto& a = state.up();
  auto& b = state.down();

  // Coin outputs per site; a/b now hold up_j / down_j.
  Matrix2c<double> m;
  m << c, s, s, -c;
  detail::toss_coin(state, m);

  // Route across each link (j, j+1) of the grown support. New a_{j+1} and new
  // b_j are both fed by this link only, so one pass with two carried values
  // suffices: intact sends up_j right and down_{j+1} left; broken reflects
  // them onto the other component of their own site.
  WalkState::Amplitudes next_a = WalkState::Amplitudes::Zero(a.size());
  WalkState::Amplitudes next_b = WalkState::Amplitudes::Zero(b.size());
  for (int j = -n - 1; j <= n; ++j) {
    const auto up_j = a(j + off);
    const auto down_next = b(j + 1 + off);
    if (mask.broken(j)) {
      next_b(j + off) = up_j;
      next_a(j + 1 + off) = down_next;
    } else {
      next_a(j + 1 + off) = up_j;
      next_b(j + off) = down_next;
    }
  }
  a.swap(next_a);
  b.swap(next_b);
  state.advance_step_count();
}

WalkState step_broken_links(WalkState state, double theta, const LinkMask& mask) {
  step_broken_links_inplace(state, theta, mask);
  return state;
}

WalkState step_broken_links(WalkState state, const CoinOperator& coin, const LinkMask& mask) {
  if (!coin.is_theta_family())
    throw std::invalid_argument("broken-link update is defined for U_theta coins only");
  const double theta = std::atan2(coin(0, 1).real(), coin(0, 0).real());
  step_broken_links_inplace(state, theta, mask);
  return state;
}

PositionDistribution run_realization(const InitialCoinState& ic, const CoinAngles& angles,
                                     const DecoherenceSpec& spec, int n, std::uint64_t seed,
                                     std::uint64_t realization) {
  if (n < 0) throw std::invalid_argument("step count must be non-negative");
  check_theta_family(angles, spec);

  WalkState state = init_state(ic, n);
  switch (spec.mode) {
    case DecoherenceSpec::Mode::none: {
      const CoinOperator coin = make_su2_coin(angles);
      for (int k = 0; k < n; ++k) step_unitary_inplace(state, coin);
      break;
    }
    case DecoherenceSpec::Mode::broken_links: {
      RandomSource rng = RandomSource::for_stream(seed, realization);
      for (int k = 0; k < n; ++k) {
        const LinkMask mask = LinkMask::sample(n, spec.probability, rng);
        step_broken_links_inplace(state, angles.theta(), mask);
      }
      break;
    }
    case DecoherenceSpec::Mode::random_phase: {
      RandomSource rng = RandomSource::for_stream(seed, realization);
      for (int k = 0; k < n; ++k) {
        const CoinOperator coin = sample_random_phase_coin(angles.theta(), spec.probability, rng);
        step_unitary_inplace(state, coin);
      }
      break;
    }
  }
  return position_distribution(state);
}

EnsembleResult run_ensemble(const InitialCoinState& ic, const CoinAngles& angles,
                            const DecoherenceSpec& spec, int n, int realizations,
                            std::uint64_t seed) {
  if (realizations < 1) throw std::invalid_argument("realizations must be at least 1");
  check_theta_family(angles, spec);

  EnsembleResult out;
  out.realizations = realizations;
  out.seed = seed;

  if (spec.mode == DecoherenceSpec::Mode::none) {
    out.mean = run_realization(ic, angles, spec, n, seed, 0);
    out.sem = Eigen::ArrayXd::Zero(out.mean.size());
    return out;
  }

  const int blocks = (realizations + kBlockSize - 1) / kBlockSize;
  std::vector<Moments> partial(std::size_t(blocks), Moments{});
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int blk = next++; blk < blocks; blk = next++) {
      const int lo = blk * kBlockSize;
      const int hi = std::min(realizations, lo + kBlockSize);
      Moments& m = partial[std::size_t(blk)];
      for (int r = lo; r < hi; ++r)
        m.add(run_realization(ic, angles, spec, n, seed, std::uint64_t(r)).probs);
    }
  };
  const unsigned threads =
      std::clamp<unsigned>(std::thread::hardware_concurrency(), 1u, unsigned(blocks));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  Moments total;
  for (const auto& m : partial) total.merge(m);

  Eigen::ArrayXd mean = total.mean;
  mean /= mean.sum();
  out.mean = PositionDistribution(n, std::move(mean));
  if (realizations > 1)
    out.sem = (total.m2.max(0.0) / (realizations - 1.0)).sqrt() / std::sqrt(double(realizations));
  else
    out.sem = Eigen::ArrayXd::Zero(out.mean.size());
  return out;
}

}  // namespace qwalk
