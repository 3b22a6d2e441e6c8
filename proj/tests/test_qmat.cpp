#include <array>
#include <random>

#include "doctest.h"
#include "qcool/channel.hpp"
#include "qcool/qmat.hpp"
#include "support/oracles.hpp"

using namespace qcool;

namespace {

Matrix diag(std::initializer_list<double> v) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) m(i, i) = x, ++i;
  return m;
}

}  // namespace

TEST_CASE("DensityMatrix rejects invalid operators") {
  CHECK_THROWS_AS(DensityMatrix(diag({0.5, 0.4})), std::invalid_argument);
  CHECK_THROWS_AS(DensityMatrix(diag({1.2, -0.2})), std::invalid_argument);
  Matrix nh = diag({0.5, 0.5});
  nh(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix{nh}, std::invalid_argument);
  CHECK_THROWS_AS(DensityMatrix(identity(4) / 4.0, {2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(DensityMatrix(Matrix::Zero(3, 4)), std::invalid_argument);
  // PSD slack is 1e-10
  CHECK_NOTHROW(DensityMatrix(diag({1.0 + 5e-11, -5e-11})));
}

TEST_CASE("kron examples") {
  const Matrix i4 = kron(identity(2), identity(2));
  CHECK(oracle::max_abs(i4 - identity(4)) == 0.0);

  const Matrix d = kron(diag({1, 0}), diag({0.7, 0.3}));
  CHECK(oracle::max_abs(d - diag({0.7, 0.3, 0, 0})) <= tol::kAlgebraic);

  const auto s = singlet();
  const auto big = kron(s, env_state(EnvironmentSpec(0.2)));
  CHECK(std::abs(big.data().trace() - Complex{1.0}) <= tol::kAlgebraic);
  CHECK(big.dims() == std::vector<std::size_t>{2, 2, 2});
}

TEST_CASE("kron agrees with the index-loop oracle") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    const auto a = oracle::ginibre(rng, 2, 3);
    const auto b = oracle::ginibre(rng, 4, 2);
    CHECK(oracle::max_abs(kron(a, b) - oracle::kron(a, b)) <= tol::kAlgebraic * 10);
  }
}

TEST_CASE("partial_trace examples") {
  const auto s = singlet();
  const auto env = env_state(EnvironmentSpec(0.3));
  const auto tr_b = partial_trace(kron(s, env), 2);
  CHECK(oracle::max_abs(tr_b.data() - s.data()) <= tol::kState);

  const auto tr_a = partial_trace(s, 1);
  CHECK(oracle::max_abs(tr_a.data() - identity(2) / 2.0) <= tol::kState);
  const auto tr_r = partial_trace(s, 0);
  CHECK(oracle::max_abs(tr_r.data() - identity(2) / 2.0) <= tol::kState);

  CHECK_THROWS_AS(partial_trace(s, 2), std::out_of_range);
  CHECK_THROWS_AS(partial_trace(env, 0), std::invalid_argument);
}

TEST_CASE("partial_trace over B of the tripartite state gives the two-qubit mixture") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const auto [s, f, l] = oracle::random_triple(rng);
    const double p_t = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
    const auto rho8 = tripartite_state(ChannelParams(s, f, l), EnvironmentSpec(p_t));
    CHECK(oracle::max_abs(rho8.data() - oracle::tripartite(s, f, l, p_t)) <= tol::kState);
    const auto reduced = partial_trace(rho8, 2);
    CHECK(oracle::max_abs(reduced.data() - oracle::unconditional(s, p_t)) <= tol::kState);
  }
}

TEST_CASE("partial_trace properties on random states") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    const DensityMatrix rho(oracle::random_state(rng, 8, 1 + t % 8), {2, 2, 2});
    for (std::size_t k = 0; k < 3; ++k) {
      const auto red = partial_trace(rho, k);
      CHECK(std::abs(red.data().trace().real() - 1.0) <= tol::kState);
      CHECK(herm_eigvals(red.data()).front() >= -tol::kPsd);
    }
    // tracing in either order gives the same single-qubit marginal
    const auto a = partial_trace(partial_trace(rho, 2), 1);
    const auto b = partial_trace(partial_trace(rho, 1), 1);
    CHECK(oracle::max_abs(a.data() - b.data()) <= tol::kState);
  }
}

TEST_CASE("partial_transpose examples") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 30; ++t) {
    const DensityMatrix rho(oracle::random_state(rng, 4, 1 + t % 4), {2, 2});
    const Matrix once = partial_transpose(rho, 1);
    const std::array<std::size_t, 2> dims{2, 2};
    CHECK(oracle::max_abs(partial_transpose(once, dims, 1) - rho.data()) <= tol::kAlgebraic);
    CHECK(oracle::max_abs(once - oracle::pt_second(rho.data())) <= tol::kAlgebraic);
    CHECK(std::abs(once.trace() - Complex{1.0}) <= tol::kState);
    CHECK(max_hermitian_defect(once) <= tol::kState);

    const auto sigma = oracle::random_state(rng, 2, 2);
    const auto chi = oracle::random_state(rng, 2, 2);
    const DensityMatrix prod(oracle::kron(sigma, chi), {2, 2});
    const Matrix pt = partial_transpose(prod, 1);
    CHECK(oracle::max_abs(pt - oracle::kron(sigma, chi.transpose())) <= tol::kAlgebraic * 10);
    CHECK(herm_eigvals(pt).front() >= -tol::kPsd);
  }
  CHECK_THROWS_AS(partial_transpose(singlet(), 2), std::out_of_range);
}

TEST_CASE("partial transpose of the singlet") {
  const auto ev = herm_eigvals(partial_transpose(singlet(), 1));
  const auto ref = oracle::hermitian_eigvals(oracle::pt_second(oracle::unconditional(1.0, 0.0)));
  REQUIRE(ev.size() == 4);
  const std::array<double, 4> expected{-0.5, 0.5, 0.5, 0.5};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs(ev[i] - expected[i]) <= tol::kState);
    CHECK(std::abs(ev[i] - ref[i]) <= tol::kState);
  }
}

TEST_CASE("herm_eigvals examples and oracle agreement") {
  const auto one = herm_eigvals(identity(4));
  for (double v : one) CHECK(std::abs(v - 1.0) <= tol::kAlgebraic);
  const auto two = herm_eigvals(diag({0.7, 0.3}));
  CHECK(std::abs(two[0] - 0.3) <= tol::kAlgebraic);
  CHECK(std::abs(two[1] - 0.7) <= tol::kAlgebraic);

  std::mt19937_64 rng(17);
  for (int t = 0; t < 100; ++t) {
    const int n = t % 3 == 0 ? 2 : (t % 3 == 1 ? 4 : 8);
    const auto g = oracle::ginibre(rng, n, n);
    const Matrix h = 0.5 * (g + g.adjoint());
    const auto ev = herm_eigvals(h);
    const auto ref = oracle::hermitian_eigvals(h);
    REQUIRE(ev.size() == ref.size());
    for (std::size_t i = 0; i < ev.size(); ++i) CHECK(std::abs(ev[i] - ref[i]) <= 1e-10);
    CHECK(std::is_sorted(ev.begin(), ev.end()));
  }
  Matrix bad = identity(2);
  bad(0, 1) = 1e-6;
  CHECK_THROWS_AS(herm_eigvals(bad), std::invalid_argument);
}

TEST_CASE("fidelity examples") {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 10; ++t) {
    const DensityMatrix rho(oracle::random_state(rng, 4, 1 + t % 4), {2, 2});
    CHECK(fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-9));
  }
  const DensityMatrix h(projector(ground_ket()));
  const DensityMatrix v(projector(excited_ket()));
  CHECK(std::abs(fidelity(h, v)) <= tol::kState);

  const auto mixed = unconditional_state(0.5, EnvironmentSpec(0.5));
  // <Psi-| rho |Psi-> by direct contraction
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(1) = 1.0 / std::sqrt(2.0);
  psi(2) = -1.0 / std::sqrt(2.0);
  const double overlap = (psi.adjoint() * oracle::unconditional(0.5, 0.5) * psi)(0, 0).real();
  CHECK(std::abs(overlap - 0.625) <= tol::kAlgebraic);
  CHECK(std::abs(fidelity(singlet(), mixed) - overlap) <= 1e-10);
  CHECK(std::abs(fidelity(mixed, singlet()) - 0.625) <= 1e-10);
}

TEST_CASE("fidelity is symmetric and bounded on random pairs") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 40; ++t) {
    const DensityMatrix a(oracle::random_state(rng, 4, 1 + t % 4), {2, 2});
    const DensityMatrix b(oracle::random_state(rng, 4, 1 + (t / 4) % 4), {2, 2});
    const double fab = fidelity(a, b);
    CHECK(fab >= -1e-10);
    CHECK(fab <= 1.0 + 1e-10);
    // rank-deficient inputs put round-off under a square root, so ~sqrt(eps)
    CHECK(std::abs(fab - fidelity(b, a)) <= 1e-7);
  }
}

TEST_CASE("type invariants hold for constructed states") {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 << (1 + t % 3);
    const DensityMatrix rho(oracle::random_state(rng, n, 1 + t % n));
    CHECK(max_hermitian_defect(rho.data()) == 0.0);
    CHECK(std::abs(rho.data().trace().real() - 1.0) <= tol::kState);
    CHECK(oracle::hermitian_eigvals(rho.data()).front() >= -tol::kPsd);
    CHECK(rho.purity() <= 1.0 + tol::kState);
  }
}
