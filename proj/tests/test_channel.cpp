#include <cmath>
#include <random>

#include "doctest.h"
#include "qcool/channel.hpp"
#include "qcool/entanglement.hpp"
#include "support/oracles.hpp"

using namespace qcool;

TEST_CASE("environment state") {
  CHECK(oracle::max_abs(env_state(EnvironmentSpec(0.0)).data() - projector(ground_ket())) == 0.0);
  CHECK(oracle::max_abs(env_state(EnvironmentSpec(0.5)).data() - identity(2) / 2.0) <= tol::kAlgebraic);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 0.8;
  d(1, 1) = 0.2;
  CHECK(oracle::max_abs(env_state(EnvironmentSpec(0.2)).data() - d) <= tol::kAlgebraic);
  CHECK_THROWS_AS(EnvironmentSpec(0.6), std::invalid_argument);
  CHECK_THROWS_AS(EnvironmentSpec(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(EnvironmentSpec(std::nan("")), std::invalid_argument);
}

TEST_CASE("channel parameters validate their simplex") {
  CHECK_NOTHROW(ChannelParams(0.2, 0.3, 0.5));
  CHECK_THROWS_AS(ChannelParams(0.2, 0.3, 0.6), std::invalid_argument);
  CHECK_THROWS_AS(ChannelParams(-0.1, 0.6, 0.5), std::invalid_argument);
  const auto p = ChannelParams::from_success_loss(0.25, 0.5);
  CHECK(std::abs(p.flip - 0.25) <= tol::kAlgebraic);
  CHECK_THROWS_AS(ChannelParams::from_success_loss(0.7, 0.5), std::invalid_argument);
}

TEST_CASE("thermal mapping") {
  CHECK(thermal_p({0.0}) == doctest::Approx(0.5));
  CHECK(thermal_p({50.0}) < 1e-20);
  CHECK(thermal_p({800.0}) == 0.0);
  CHECK(thermal_p({std::log(4.0)}) == doctest::Approx(0.2));
  CHECK_THROWS_AS(thermal_p({-1.0}), std::invalid_argument);
  double previous = 0.5;
  for (double x = 0.1; x < 20.0; x += 0.1) {
    const double p = thermal_p({x});
    CHECK(p < previous);
    CHECK(p >= 0.0);
    previous = p;
  }
}

TEST_CASE("bloch projectors are rank one") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 6.283185307179586);
  for (int t = 0; t < 20; ++t) {
    const Matrix p = bloch_projector(u(rng) / 2.0, u(rng));
    CHECK(oracle::max_abs(p * p - p) <= tol::kAlgebraic * 10);
    CHECK(std::abs(p.trace() - Complex{1.0}) <= tol::kAlgebraic * 10);
  }
  CHECK(oracle::max_abs(bloch_projector(0.0, 0.0) - projector(ground_ket())) <= tol::kAlgebraic);
}

TEST_CASE("singlet") {
  const auto s = singlet();
  CHECK(std::abs(s.purity() - 1.0) <= tol::kAlgebraic);
  CHECK(oracle::max_abs(partial_trace(s, 0).data() - identity(2) / 2.0) <= tol::kAlgebraic);
  CHECK(oracle::max_abs(partial_trace(s, 1).data() - identity(2) / 2.0) <= tol::kAlgebraic);
  CHECK(std::abs(negativity(s) - 0.5) <= tol::kState);
  CHECK(std::abs(oracle::negativity(s.data()) - 0.5) <= tol::kState);
}

TEST_CASE("unconditional state examples") {
  CHECK(oracle::max_abs(unconditional_state(1.0, EnvironmentSpec(0.3)).data() - singlet().data()) <=
        tol::kAlgebraic);
  CHECK(oracle::max_abs(unconditional_state(0.0, EnvironmentSpec(0.5)).data() - identity(4) / 4.0) <=
        tol::kAlgebraic);
  const auto boundary = unconditional_state(1.0 / 3.0, EnvironmentSpec(0.5));
  CHECK(std::abs(min_pt_eigenvalue(boundary)) <= tol::kState);
  CHECK(std::abs(oracle::hermitian_eigvals(oracle::pt_second(boundary.data())).front()) <= tol::kState);
}

TEST_CASE("tripartite state examples") {
  const EnvironmentSpec env(0.2);
  const auto e = env_state(env);
  const auto s1 = tripartite_state(ChannelParams(1, 0, 0), env);
  CHECK(oracle::max_abs(s1.data() - kron(singlet(), e).data()) <= tol::kAlgebraic);
  const auto l1 = tripartite_state(ChannelParams(0, 0, 1), env);
  const Matrix expect = kron(kron(identity(2) / 2.0, e.data()), e.data());
  CHECK(oracle::max_abs(l1.data() - expect) <= tol::kAlgebraic);
  CHECK(l1.dims() == std::vector<std::size_t>{2, 2, 2});
}

TEST_CASE("tripartite state is invariant under the flip exchange") {
  // exchanging A and B maps (P_S, P_F) to (P_F, P_S)
  std::mt19937_64 rng(31);
  for (int t = 0; t < 30; ++t) {
    const auto [s, f, l] = oracle::random_triple(rng);
    const double p_t = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
    const auto a = tripartite_state(ChannelParams(s, f, l), EnvironmentSpec(p_t)).data();
    const auto b = tripartite_state(ChannelParams(f, s, l), EnvironmentSpec(p_t)).data();
    Matrix swapped(8, 8);
    auto sw = [](Eigen::Index i) { return (i & 4) | ((i & 1) << 1) | ((i & 2) >> 1); };
    for (Eigen::Index r = 0; r < 8; ++r)
      for (Eigen::Index c = 0; c < 8; ++c) swapped(sw(r), sw(c)) = b(r, c);
    CHECK(oracle::max_abs(a - swapped) <= tol::kAlgebraic * 10);
  }
}

TEST_CASE("conditional state examples") {
  std::mt19937_64 rng(37);
  for (int t = 0; t < 20; ++t) {
    const double p_t = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
    const double s = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const auto h = conditional_state(ChannelParams(s, 0.0, 1.0 - s), EnvironmentSpec(p_t));
    CHECK(std::abs(h.weight - (1.0 - p_t)) <= tol::kAlgebraic);
    const Matrix expect = oracle::unconditional(s, p_t);
    CHECK(oracle::max_abs(h.state.data() - expect) <= tol::kState);
  }
  const auto one = conditional_state(ChannelParams(1, 0, 0), EnvironmentSpec(0.3));
  CHECK(oracle::max_abs(one.state.data() - singlet().data()) <= tol::kState);
  CHECK(std::abs(one.weight - 0.7) <= tol::kAlgebraic);

  // heralding weight for (1/2, 1/2, 0) at p_T = 0 is 1 - 1/2 + 1/4
  const auto half = conditional_state(ChannelParams(0.5, 0.5, 0.0), EnvironmentSpec(0.0));
  CHECK(std::abs(half.weight - 0.75) <= tol::kAlgebraic);
}

TEST_CASE("closed-form heralded state equals the explicit projection") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 200; ++t) {
    const auto [s, f, l] = oracle::random_triple(rng);
    const double p_t = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
    const ChannelParams params(s, f, l);
    const EnvironmentSpec env(p_t);
    const auto closed = conditional_state(params, env);
    const Matrix raw = oracle::herald_ground(oracle::tripartite(s, f, l, p_t));
    const double n = raw.trace().real();
    CHECK(std::abs(closed.weight - n) <= tol::kState);
    CHECK(oracle::max_abs(closed.state.data() - raw / n) <= tol::kState);

    const auto projected = project_b(tripartite_state(params, env), projector(ground_ket()));
    CHECK(std::abs(projected.weight - closed.weight) <= tol::kState);
    CHECK(oracle::max_abs(projected.state.data() - closed.state.data()) <= tol::kState);
  }
}

TEST_CASE("project_b examples and errors") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 10; ++t) {
    const DensityMatrix ra(oracle::random_state(rng, 4, 2), {2, 2});
    const double p_t = 0.05 * t;
    const auto h = project_b(kron(ra, env_state(EnvironmentSpec(p_t))), projector(ground_ket()));
    CHECK(std::abs(h.weight - (1.0 - p_t)) <= tol::kState);
    CHECK(oracle::max_abs(h.state.data() - ra.data()) <= tol::kState);
  }
  const auto rho8 = tripartite_state(ChannelParams(0.4, 0.3, 0.3), EnvironmentSpec(0.1));
  CHECK_THROWS_AS(project_b(rho8, identity(2)), std::invalid_argument);
  CHECK_THROWS_AS(project_b(rho8, 0.5 * projector(ground_ket())), std::invalid_argument);
  CHECK_THROWS_AS(project_b(singlet(), projector(ground_ket())), std::invalid_argument);
  CHECK_THROWS_AS(project_b(kron(singlet(), env_state(EnvironmentSpec(0.0))), projector(excited_ket())),
                  std::domain_error);
}

TEST_CASE("ground projection is the best heralding projector") {
  // scan pure projectors on B and compare heralded negativity, p_T < 1/2
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> ang(0.0, 3.141592653589793);
  for (int t = 0; t < 20; ++t) {
    const auto [s, f, l] = oracle::random_triple(rng);
    const double p_t = std::uniform_real_distribution<double>(0.0, 0.45)(rng);
    const auto rho8 = tripartite_state(ChannelParams(s, f, l), EnvironmentSpec(p_t));
    const double best = negativity(project_b(rho8, projector(ground_ket())).state);
    for (int k = 0; k < 40; ++k) {
      const auto other = project_b(rho8, bloch_projector(ang(rng), 2.0 * ang(rng)));
      CHECK(negativity(other.state) <= best + 1e-9);
    }
  }
}
