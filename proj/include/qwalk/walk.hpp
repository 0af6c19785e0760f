#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <utility>

#include "qwalk/coin.hpp"

namespace qwalk {

template <typename Scalar>
using ArrayXc = Eigen::Array<std::complex<Scalar>, Eigen::Dynamic, 1>;

/// Coin state of a walker localized at the origin at n = 0.
template <typename Scalar>
struct InitialCoinStateT {
  std::complex<Scalar> a0{1};
  std::complex<Scalar> b0{0};

  Scalar norm() const { return std::norm(a0) + std::norm(b0); }

  /// (|up> + i|down>)/sqrt 2, which gives a P_j symmetric about j = 0 under
  /// the Hadamard coin.
  static InitialCoinStateT symmetric() {
    const Scalar h = Scalar(1) / std::sqrt(Scalar(2));
    return {{h, 0}, {0, h}};
  }
  static InitialCoinStateT up() { return {{1, 0}, {0, 0}}; }
  static InitialCoinStateT down() { return {{0, 0}, {1, 0}}; }

  bool operator==(const InitialCoinStateT&) const = default;
};

/// Real probability vector over sites [-n, +n] after n steps.
template <typename Scalar>
struct PositionDistributionT {
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  int steps = 0;
  Array probs = Array::Ones(1);

  PositionDistributionT() = default;
  PositionDistributionT(int n, Array p) : steps(n), probs(std::move(p)) {
    if (n < 0) throw std::invalid_argument("step count must be non-negative");
    if (probs.size() != 2 * Eigen::Index(n) + 1)
      throw std::invalid_argument("distribution must span sites [-n, n]");
  }

  Eigen::Index size() const noexcept { return probs.size(); }
  int first_site() const noexcept { return -steps; }
  int last_site() const noexcept { return steps; }
  int site(Eigen::Index i) const noexcept { return int(i) - steps; }

  /// P_j, zero outside [-n, n].
  Scalar at(int j) const noexcept {
    return (j < -steps || j > steps) ? Scalar(0) : probs(j + steps);
  }

  Scalar total() const { return probs.sum(); }
};

/// Amplitudes (a_j, b_j) on a dense lattice of radius `capacity`.
///
/// Site j lives at index j + offset(); sites outside [-n, n] hold exact
/// zeros. The lattice grows by reallocation only when n reaches capacity.
template <typename Scalar>
class WalkStateT {
 public:
  using Amplitudes = ArrayXc<Scalar>;

  explicit WalkStateT(int capacity = 0)
      : capacity_(capacity),
        up_(Amplitudes::Zero(2 * Eigen::Index(capacity) + 1)),
        down_(Amplitudes::Zero(2 * Eigen::Index(capacity) + 1)) {
    if (capacity < 0) throw std::invalid_argument("capacity must be non-negative");
  }

  int steps() const noexcept { return steps_; }
  int capacity() const noexcept { return capacity_; }
  Eigen::Index offset() const noexcept { return capacity_; }

  /// Raw storage over [-capacity, capacity].
  const Amplitudes& up() const noexcept { return up_; }
  const Amplitudes& down() const noexcept { return down_; }
  Amplitudes& up() noexcept { return up_; }
  Amplitudes& down() noexcept { return down_; }

  std::complex<Scalar> a(int j) const noexcept {
    return in_lattice(j) ? up_(j + offset()) : std::complex<Scalar>{};
  }
  std::complex<Scalar> b(int j) const noexcept {
    return in_lattice(j) ? down_(j + offset()) : std::complex<Scalar>{};
  }

  Scalar norm() const { return up_.abs2().sum() + down_.abs2().sum(); }

  /// Make room for one more step.
  void reserve_step() {
    if (steps_ + 1 <= capacity_) return;
    const int grown = std::max(2 * capacity_, steps_ + 1);
    Amplitudes u = Amplitudes::Zero(2 * Eigen::Index(grown) + 1);
    Amplitudes d = Amplitudes::Zero(2 * Eigen::Index(grown) + 1);
    const Eigen::Index shift = grown - capacity_;
    u.segment(shift, up_.size()) = up_;
    d.segment(shift, down_.size()) = down_;
    up_.swap(u);
    down_.swap(d);
    capacity_ = grown;
  }

  void advance_step_count() noexcept { ++steps_; }

 private:
  bool in_lattice(int j) const noexcept { return j >= -capacity_ && j <= capacity_; }

  int steps_ = 0;
  int capacity_ = 0;
  Amplitudes up_;
  Amplitudes down_;
};

using InitialCoinState = InitialCoinStateT<double>;
using PositionDistribution = PositionDistributionT<double>;
using WalkState = WalkStateT<double>;

template <typename Scalar>
WalkStateT<Scalar> init_state(const InitialCoinStateT<Scalar>& ic, int capacity = 0) {
  if (!std::isfinite(std::abs(ic.a0)) || !std::isfinite(std::abs(ic.b0)) ||
      std::abs(ic.norm() - Scalar(1)) >
          std::max(Scalar(1e-9), 16 * std::numeric_limits<Scalar>::epsilon()))
    throw std::invalid_argument("initial coin state must satisfy |a0|^2 + |b0|^2 = 1");
  WalkStateT<Scalar> state(capacity);
  state.up()(state.offset()) = ic.a0;
  state.down()(state.offset()) = ic.b0;
  return state;
}

namespace detail {

/// Apply the coin to every site of the current support, in place.
template <typename Scalar>
void toss_coin(WalkStateT<Scalar>& s, const Matrix2c<Scalar>& m) {
  const Eigen::Index lo = s.offset() - s.steps();
  const Eigen::Index len = 2 * Eigen::Index(s.steps()) + 1;
  auto a = s.up().segment(lo, len);
  auto b = s.down().segment(lo, len);
  const ArrayXc<Scalar> a_old = a;
  a = m(0, 0) * a_old + m(0, 1) * b;
  b = m(1, 0) * a_old + m(1, 1) * b;
}

/// Conditional shift: up components move j -> j+1, down components j -> j-1.
template <typename Scalar>
void shift(WalkStateT<Scalar>& s) {
  const Eigen::Index lo = s.offset() - s.steps();
  const Eigen::Index hi = s.offset() + s.steps();
  auto& a = s.up();
  auto& b = s.down();
  for (Eigen::Index i = hi + 1; i > lo; --i) a(i) = a(i - 1);
  a(lo) = 0;
  for (Eigen::Index i = lo - 1; i < hi; ++i) b(i) = b(i + 1);
  b(hi) = 0;
}

}  // namespace detail

/// One step of the unitary walk, in place:
///   a_j(n+1) = C00 a_{j-1}(n) + C01 b_{j-1}(n)
///   b_j(n+1) = C10 a_{j+1}(n) + C11 b_{j+1}(n)
template <typename Scalar>
void step_unitary_inplace(WalkStateT<Scalar>& state, const CoinOperatorT<Scalar>& coin) {
  state.reserve_step();
  detail::toss_coin(state, coin.matrix());
  detail::shift(state);
  state.advance_step_count();
}

template <typename Scalar>
WalkStateT<Scalar> step_unitary(WalkStateT<Scalar> state, const CoinOperatorT<Scalar>& coin) {
  step_unitary_inplace(state, coin);
  return state;
}

/// V^n applied to the walker initialized at the origin.
template <typename Scalar>
WalkStateT<Scalar> evolve(const InitialCoinStateT<Scalar>& ic, const CoinOperatorT<Scalar>& coin,
                          int n) {
  if (n < 0) throw std::invalid_argument("step count must be non-negative");
  WalkStateT<Scalar> state = init_state(ic, n);
  for (int k = 0; k < n; ++k) step_unitary_inplace(state, coin);
  return state;
}

/// P_j = |a_j|^2 + |b_j|^2 over [-n, n].
template <typename Scalar>
PositionDistributionT<Scalar> position_distribution(const WalkStateT<Scalar>& state) {
  const Eigen::Index lo = state.offset() - state.steps();
  const Eigen::Index len = 2 * Eigen::Index(state.steps()) + 1;
  typename PositionDistributionT<Scalar>::Array p =
      state.up().segment(lo, len).abs2() + state.down().segment(lo, len).abs2();
  return {state.steps(), std::move(p)};
}

}  // namespace qwalk
