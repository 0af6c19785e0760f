#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace qwalk {

template <typename Scalar>
using Matrix2c = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

template <typename Scalar>
using Vector2c = Eigen::Matrix<std::complex<Scalar>, 2, 1>;

/// Reduce `value` into [0, period).
template <typename Scalar>
Scalar wrap_angle(Scalar value, Scalar period) {
  Scalar r = std::fmod(value, period);
  if (r < Scalar(0)) r += period;
  if (r >= period) r = Scalar(0);
  return r;
}

/// Cayley-Klein angles of an SU(2) coin.
///
/// xi and zeta are reduced into [0, 2pi), theta into [0, pi). Reducing theta
/// modulo pi flips the sign of the whole matrix, which is a global phase and
/// leaves every position distribution unchanged.
template <typename Scalar>
class CoinAnglesT {
 public:
  CoinAnglesT(Scalar xi, Scalar theta, Scalar zeta) {
    if (!std::isfinite(xi) || !std::isfinite(theta) || !std::isfinite(zeta))
      throw std::invalid_argument("coin angles must be finite");
    constexpr Scalar two_pi = 2 * std::numbers::pi_v<Scalar>;
    xi_ = wrap_angle(xi, two_pi);
    theta_ = wrap_angle(theta, std::numbers::pi_v<Scalar>);
    zeta_ = wrap_angle(zeta, two_pi);
  }

  static CoinAnglesT theta_only(Scalar theta) { return {0, theta, 0}; }
  static CoinAnglesT hadamard() { return theta_only(std::numbers::pi_v<Scalar> / 4); }

  Scalar xi() const noexcept { return xi_; }
  Scalar theta() const noexcept { return theta_; }
  Scalar zeta() const noexcept { return zeta_; }

  /// eta = xi - zeta in [0, 2pi); together with theta it fixes P_j(n) for a
  /// walker started at the origin.
  Scalar eta() const { return wrap_angle(xi_ - zeta_, 2 * std::numbers::pi_v<Scalar>); }

  bool operator==(const CoinAnglesT&) const = default;

 private:
  Scalar xi_{};
  Scalar theta_{};
  Scalar zeta_{};
};

/// A 2x2 unitary acting on the coin degree of freedom.
template <typename Scalar>
class CoinOperatorT {
 public:
  using Matrix = Matrix2c<Scalar>;

  // 1e-12 in double; a few ulps for narrower types.
  static constexpr Scalar kUnitarityTolerance =
      std::max(Scalar(1e-12), 64 * std::numeric_limits<Scalar>::epsilon());

  explicit CoinOperatorT(const Matrix& m) : m_(m) {
    if (!m_.allFinite()) throw std::invalid_argument("coin entries must be finite");
    if (unitarity_error() > kUnitarityTolerance)
      throw std::invalid_argument("coin matrix is not unitary");
  }

  const Matrix& matrix() const noexcept { return m_; }
  const std::complex<Scalar>& operator()(Eigen::Index r, Eigen::Index c) const { return m_(r, c); }

  /// max |(C C^dagger - I)_{rc}|
  Scalar unitarity_error() const {
    return (m_ * m_.adjoint() - Matrix::Identity()).cwiseAbs().maxCoeff();
  }

  Vector2c<Scalar> apply(const Vector2c<Scalar>& v) const { return m_ * v; }

  /// True when the matrix has the real form [[cos t, sin t], [sin t, -cos t]].
  bool is_theta_family(Scalar tol = Scalar(1e-12)) const {
    return m_.imag().cwiseAbs().maxCoeff() <= tol &&
           std::abs(m_(0, 1) - m_(1, 0)) <= tol &&
           std::abs(m_(0, 0) + m_(1, 1)) <= tol;
  }

 private:
  Matrix m_;
};

using CoinAngles = CoinAnglesT<double>;
using CoinOperator = CoinOperatorT<double>;

/// U_{xi,theta,zeta} = [[e^{i xi} cos t, e^{i zeta} sin t], [e^{-i zeta} sin t, -e^{-i xi} cos t]]
template <typename Scalar>
CoinOperatorT<Scalar> make_su2_coin(const CoinAnglesT<Scalar>& angles) {
  using C = std::complex<Scalar>;
  const Scalar c = std::cos(angles.theta());
  const Scalar s = std::sin(angles.theta());
  const C e_xi = std::polar(Scalar(1), angles.xi());
  const C e_zeta = std::polar(Scalar(1), angles.zeta());
  Matrix2c<Scalar> m;
  m << e_xi * c, e_zeta * s,
       std::conj(e_zeta) * s, -std::conj(e_xi) * c;
  return CoinOperatorT<Scalar>(m);
}

template <typename Scalar>
CoinOperatorT<Scalar> make_theta_coin(Scalar theta) {
  return make_su2_coin(CoinAnglesT<Scalar>::theta_only(theta));
}

/// Random-phase decoherence coin: with probability p_tilde the coin is
/// U_{0,theta,zeta} with zeta ~ U[0, 2pi), otherwise U_theta.
///
/// `Rng` needs a `double uniform()` returning values in [0, 1). One uniform
/// decides the branch; a second one is consumed only when the phase is drawn.
template <typename Scalar, typename Rng>
CoinOperatorT<Scalar> sample_random_phase_coin(Scalar theta, Scalar p_tilde, Rng& rng) {
  if (!(p_tilde >= 0 && p_tilde <= 1))
    throw std::invalid_argument("p_tilde must lie in [0, 1]");
  Scalar zeta = 0;
  if (rng.uniform() < p_tilde) zeta = 2 * std::numbers::pi_v<Scalar> * rng.uniform();
  return make_su2_coin(CoinAnglesT<Scalar>(0, theta, zeta));
}

}  // namespace qwalk
