#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "qwalk/coin.hpp"
#include "qwalk/walk.hpp"

namespace testing {

/// Seeded generator for hand-rolled property tests.
struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

  qwalk::CoinAngles angles() {
    const double two_pi = 2 * std::numbers::pi;
    return {uniform(0, two_pi), uniform(0, std::numbers::pi), uniform(0, two_pi)};
  }

  qwalk::InitialCoinState ic() {
    const double chi = uniform(0, std::numbers::pi / 2);
    return {std::polar(std::cos(chi), uniform(0, 2 * std::numbers::pi)),
            std::polar(std::sin(chi), uniform(0, 2 * std::numbers::pi))};
  }
};

}  // namespace testing
