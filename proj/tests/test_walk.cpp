#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "helpers.hpp"
#include "oracles.hpp"
#include "qwalk/coin.hpp"
#include "qwalk/walk.hpp"

using namespace qwalk;
using cd = std::complex<double>;
using std::numbers::pi;

TEST_SUITE("walk") {

TEST_CASE("hadamard from up, one step") {
  const auto s = evolve(InitialCoinState::up(), make_theta_coin(pi / 4), 1);
  const double h = 1 / std::sqrt(2.0);
  CHECK(std::abs(s.a(1) - h) < 1e-15);
  CHECK(std::abs(s.b(-1) - h) < 1e-15);
  const auto d = position_distribution(s);
  CHECK(d.at(1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(d.at(-1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(d.at(0) == 0.0);
}

TEST_CASE("hadamard from up, three steps") {
  const auto d = position_distribution(evolve(InitialCoinState::up(), make_theta_coin(pi / 4), 3));
  CHECK(std::abs(d.at(-3) - 0.125) < 1e-15);
  CHECK(std::abs(d.at(-1) - 0.125) < 1e-15);
  CHECK(std::abs(d.at(1) - 0.625) < 1e-15);
  CHECK(std::abs(d.at(3) - 0.125) < 1e-15);
  CHECK(d.at(0) == 0.0);
  CHECK(d.at(2) == 0.0);
}

TEST_CASE("theta = 0 sends the symmetric state ballistically apart") {
  for (int n : {1, 7, 50}) {
    const auto d = position_distribution(evolve(InitialCoinState::symmetric(), make_theta_coin(0.0), n));
    CHECK(d.at(-n) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(d.at(n) == doctest::Approx(0.5).epsilon(1e-15));
  }
}

TEST_CASE("init_state") {
  const auto s = evolve(InitialCoinState::symmetric(), make_theta_coin(0.3), 0);
  CHECK(s.steps() == 0);
  CHECK(s.a(0) == InitialCoinState::symmetric().a0);
  CHECK(s.b(0) == InitialCoinState::symmetric().b0);
  const InitialCoinState psi3{{0, -0.5}, {0, std::sqrt(3.0) / 2}};
  CHECK(position_distribution(init_state(psi3)).at(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(init_state(InitialCoinState{{1, 0}, {1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(init_state(InitialCoinState{{0.9, 0}, {0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(evolve(InitialCoinState::up(), make_theta_coin(0.3), -1), std::invalid_argument);
}

TEST_CASE("norm conserved at every step up to n = 2000") {
  testing::Gen gen(21);
  const auto coin = make_su2_coin(gen.angles());
  auto state = init_state(gen.ic(), 2000);
  double worst = 0;
  for (int k = 0; k < 2000; ++k) {
    step_unitary_inplace(state, coin);
    worst = std::max(worst, std::abs(state.norm() - 1.0));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("odd-parity sites carry exactly zero amplitude") {
  testing::Gen gen(22);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = gen.integer(1, 60);
    const auto s = evolve(gen.ic(), make_su2_coin(gen.angles()), n);
    for (int j = -n; j <= n; ++j)
      if ((j + n) % 2 != 0) {
        CHECK(s.a(j) == cd{});
        CHECK(s.b(j) == cd{});
      }
  }
}

TEST_CASE("distribution depends only on eta and theta") {
  testing::Gen gen(23);
  for (int trial = 0; trial < 20; ++trial) {
    const auto angles = gen.angles();
    const auto ic = gen.ic();
    const auto d1 = position_distribution(evolve(ic, make_su2_coin(angles), 60));
    const auto d2 = position_distribution(
        evolve(ic, make_su2_coin(CoinAngles(angles.xi() - angles.zeta(), angles.theta(), 0)), 60));
    CHECK((d1.probs - d2.probs).abs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("hadamard with the symmetric state is reflection symmetric") {
  auto state = init_state(InitialCoinState::symmetric(), 200);
  const auto coin = make_theta_coin(pi / 4);
  for (int n = 1; n <= 200; ++n) {
    step_unitary_inplace(state, coin);
    const auto d = position_distribution(state);
    CHECK((d.probs - d.probs.reverse()).abs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("amplitudes match path enumeration for n <= 10") {
  testing::Gen gen(24);
  std::vector<CoinOperator> coins{make_theta_coin(pi / 4)};
  for (int i = 0; i < 5; ++i) coins.push_back(make_theta_coin(gen.uniform(0, pi)));
  coins.push_back(make_su2_coin(gen.angles()));
  for (const auto& coin : coins) {
    const auto ic = gen.ic();
    for (int n = 0; n <= 10; ++n) {
      const auto s = evolve(ic, coin, n);
      const auto ref = oracle::enumerate_paths(coin.matrix(), ic.a0, ic.b0, n);
      double worst = 0;
      for (int j = -n; j <= n; ++j)
        worst = std::max({worst, std::abs(s.a(j) - ref.at_a(j)), std::abs(s.b(j) - ref.at_b(j))});
      CHECK(worst < 1e-12);
    }
  }
}

TEST_CASE("growing lattice matches a preallocated one") {
  const auto coin = make_theta_coin(0.4);
  auto grown = init_state(InitialCoinState::symmetric());
  auto fixed = init_state(InitialCoinState::symmetric(), 37);
  for (int k = 0; k < 37; ++k) {
    step_unitary_inplace(grown, coin);
    step_unitary_inplace(fixed, coin);
  }
  CHECK(grown.capacity() >= 37);
  const auto d1 = position_distribution(grown);
  const auto d2 = position_distribution(fixed);
  CHECK((d1.probs - d2.probs).abs().maxCoeff() == 0.0);
}

TEST_CASE("step_unitary returns a new state") {
  const auto s0 = init_state(InitialCoinState::up());
  const auto s1 = step_unitary(s0, make_theta_coin(pi / 4));
  CHECK(s0.steps() == 0);
  CHECK(s1.steps() == 1);
}

TEST_CASE("single precision follows double") {
  const auto d = position_distribution(
      evolve(InitialCoinState::symmetric(), make_theta_coin(pi / 4), 100));
  const auto f = position_distribution(
      evolve(InitialCoinStateT<float>::symmetric(), make_theta_coin(float(pi / 4)), 100));
  CHECK((d.probs - f.probs.cast<double>()).abs().maxCoeff() < 1e-5);
}

TEST_CASE("position distribution checks its support") {
  CHECK_THROWS_AS(PositionDistribution(2, Eigen::ArrayXd::Ones(4)), std::invalid_argument);
  const PositionDistribution d(1, Eigen::ArrayXd::Constant(3, 1.0 / 3));
  CHECK(d.at(5) == 0.0);
  CHECK(d.first_site() == -1);
  CHECK(d.total() == doctest::Approx(1.0));
}

}
