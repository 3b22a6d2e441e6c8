#include <cmath>
#include <algorithm>
#include <random>
#include <sstream>

#include "doctest.h"
#include "qcool/channel.hpp"
#include "qcool/entanglement.hpp"
#include "qcool/tomography.hpp"
#include "support/oracles.hpp"

using namespace qcool;

namespace {

std::size_t idx(std::size_t a, std::size_t b) { return kSingleStates * a + b; }

// Independent Born rule: |<phi_a phi_b|psi>|^2 averaged over the eigen
// decomposition is replaced by the direct contraction <v|rho|v>.
double born(const Matrix& rho, std::size_t a, std::size_t b) {
  const double s = 1.0 / std::sqrt(2.0);
  const Complex i{0.0, 1.0};
  const std::array<std::array<Complex, 2>, 6> kets{{{1.0, 0.0},
                                                    {0.0, 1.0},
                                                    {s, s},
                                                    {s, -s},
                                                    {s, s * i},
                                                    {s, -s * i}}};
  Eigen::VectorXcd v(4);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) v(2 * x + y) = kets[a][x] * kets[b][y];
  return (v.adjoint() * rho * v)(0, 0).real();
}

Probabilities exact(const DensityMatrix& rho) { return born_probabilities(rho); }

}  // namespace

TEST_CASE("single-qubit states") {
  for (std::size_t k = 0; k < kSingleStates; ++k) CHECK(std::abs(single_state(k).norm() - 1.0) <= 1e-15);
  CHECK(std::abs(single_state(4)(1) - Complex(0.0, 1.0 / std::sqrt(2.0))) <= 1e-15);
  CHECK_THROWS_AS(single_state(6), std::out_of_range);
}

TEST_CASE("Born probabilities examples") {
  const auto p = born_probabilities(singlet());
  CHECK(std::abs(p[idx(0, 0)]) <= 1e-15);
  CHECK(std::abs(p[idx(0, 1)] - 0.5) <= 1e-15);
  const auto m = born_probabilities(DensityMatrix(identity(4) / 4.0, {2, 2}));
  for (double v : m) CHECK(std::abs(v - 0.25) <= 1e-15);
}

TEST_CASE("Born probabilities against direct contraction") {
  std::mt19937_64 rng(83);
  for (int t = 0; t < 20; ++t) {
    const DensityMatrix rho(oracle::random_state(rng, 4, 1 + t % 4), {2, 2});
    const auto p = born_probabilities(rho);
    for (std::size_t a = 0; a < 6; ++a) {
      for (std::size_t b = 0; b < 6; ++b) CHECK(std::abs(p[idx(a, b)] - born(rho.data(), a, b)) <= 1e-14);
    }
    // every basis pair sums to one
    for (std::size_t ba = 0; ba < 3; ++ba) {
      for (std::size_t bb = 0; bb < 3; ++bb) {
        double s = 0.0;
        for (int x = 0; x < 2; ++x)
          for (int y = 0; y < 2; ++y) s += p[idx(2 * ba + x, 2 * bb + y)];
        CHECK(std::abs(s - 1.0) <= 1e-14);
      }
    }
  }
}

TEST_CASE("multinomial sampling") {
  TomographySettings s;
  s.shots_per_setting = 5000;
  s.seed = 3;
  const auto p = born_probabilities(singlet());
  const auto a = sample_counts(p, s);
  const auto b = sample_counts(p, s);
  CHECK(a.counts == b.counts);
  for (std::size_t k = 0; k < kSettings; ++k) {
    if (p[k] == 0.0) CHECK(a.counts[k] == 0);
  }
  for (std::size_t ba = 0; ba < 3; ++ba) {
    for (std::size_t bb = 0; bb < 3; ++bb) {
      std::uint64_t total = 0;
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) total += a.counts[idx(2 * ba + x, 2 * bb + y)];
      CHECK(total == 5000);
    }
  }
  s.seed = 4;
  CHECK(sample_counts(p, s).counts != a.counts);
  s.shots_per_setting = 0;
  CHECK_THROWS_AS(sample_counts(p, s), std::invalid_argument);
}

TEST_CASE("sampling obeys the law of large numbers") {
  std::mt19937_64 rng(89);
  const DensityMatrix rho(oracle::random_state(rng, 4, 3), {2, 2});
  const auto p = born_probabilities(rho);
  for (auto model : {CountNoise::multinomial, CountNoise::poisson}) {
    TomographySettings s;
    s.shots_per_setting = 10000000;
    s.seed = 17;
    s.noise_model = model;
    const auto c = sample_counts(p, s);
    const double n = 1e7;
    for (std::size_t k = 0; k < kSettings; ++k) {
      const double se = std::sqrt(std::max(p[k] * (1.0 - p[k]), 1e-12) / n);
      CHECK(std::abs(static_cast<double>(c.counts[k]) / n - p[k]) <= 5.0 * se + 1e-12);
    }
  }
}

TEST_CASE("linear inversion recovers states from exact probabilities") {
  const auto s = linear_inversion(exact(singlet()));
  CHECK(oracle::max_abs(s - singlet().data()) <= 1e-12);
  const DensityMatrix mixed(identity(4) / 4.0, {2, 2});
  CHECK(oracle::max_abs(linear_inversion(exact(mixed)) - mixed.data()) <= 1e-12);
  std::mt19937_64 rng(97);
  for (int t = 0; t < 100; ++t) {
    const auto [ps, pf, pl] = oracle::random_triple(rng);
    const double p_t = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
    const auto h = conditional_state(ChannelParams(ps, pf, pl), EnvironmentSpec(p_t)).state;
    CHECK(oracle::max_abs(linear_inversion(exact(h)) - h.data()) <= 1e-12);
    const DensityMatrix r(oracle::random_state(rng, 4, 1 + t % 4), {2, 2});
    const Matrix lin = linear_inversion(exact(r));
    CHECK(oracle::max_abs(lin - r.data()) <= 1e-12);
    CHECK(oracle::max_abs(project_to_physical(lin).data() - r.data()) <= 1e-10);
  }
}

TEST_CASE("linear inversion of counts rejects empty basis pairs") {
  CountTable c;
  for (auto& v : c.counts) v = 10;
  CHECK_NOTHROW(linear_inversion(c));
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y) c.counts[idx(2 + x, 4 + y)] = 0;
  CHECK_THROWS_AS(linear_inversion(c), std::invalid_argument);
}

TEST_CASE("physicality projection examples") {
  std::mt19937_64 rng(101);
  for (int t = 0; t < 20; ++t) {
    const DensityMatrix r(oracle::random_state(rng, 4, 1 + t % 4), {2, 2});
    CHECK(oracle::max_abs(project_to_physical(r.data()).data() - r.data()) <= 1e-12);
  }
  Matrix d = Matrix::Zero(4, 4);
  d(0, 0) = 1.2;
  d(1, 1) = -0.2;
  const auto p = project_to_physical(d);
  Matrix expect = Matrix::Zero(4, 4);
  expect(0, 0) = 1.0;
  CHECK(oracle::max_abs(p.data() - expect) <= 1e-12);
  const auto ref = oracle::simplex_projection_exhaustive({1.2, -0.2, 0.0, 0.0});
  CHECK(std::abs(ref[0] - 1.0) <= 1e-15);
  CHECK(ref[1] == 0.0);

  CHECK_THROWS_AS(project_to_physical(2.0 * d), std::invalid_argument);
  Matrix nh = identity(4) / 4.0;
  nh(0, 1) = 0.1;
  CHECK_THROWS_AS(project_to_physical(nh), std::invalid_argument);
}

TEST_CASE("physicality projection matches the simplex oracle") {
  std::mt19937_64 rng(103);
  std::normal_distribution<double> g(0.0, 0.3);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> ev(4);
    double sum = 0.0;
    for (auto& v : ev) v = g(rng), sum += v;
    for (auto& v : ev) v += (1.0 - sum) / 4.0;
    const Matrix u = oracle::random_unitary(rng, 4);
    Eigen::VectorXcd diag(4);
    for (int i = 0; i < 4; ++i) diag(i) = ev[static_cast<std::size_t>(i)];
    Matrix m = u * diag.asDiagonal() * u.adjoint();
    m = 0.5 * (m + m.adjoint()).eval();
    const auto projected = project_to_physical(m);
    auto want = oracle::simplex_projection_exhaustive(ev);
    std::sort(want.begin(), want.end());
    const auto got = oracle::hermitian_eigvals(projected.data());
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(got[i] - want[i]) <= 1e-10);
    // the projection is the nearest state: no random state is closer
    const double dist = (projected.data() - m).norm();
    for (int k = 0; k < 5; ++k) {
      const Matrix other = oracle::random_state(rng, 4, 1 + k % 4);
      CHECK((other - m).norm() >= dist - 1e-12);
    }
  }
}

TEST_CASE("reconstruction at finite shots") {
  TomographySettings s;
  s.shots_per_setting = 1000000;
  s.seed = 5;
  const auto rho = reconstruct(sample_counts(born_probabilities(singlet()), s));
  CHECK(fidelity(singlet(), rho) >= 0.999);
  const DensityMatrix mixed(identity(4) / 4.0, {2, 2});
  const auto rm = reconstruct(sample_counts(born_probabilities(mixed), s));
  CHECK(negativity(rm) == 0.0);
  CHECK_FALSE(is_entangled(rm));
}

TEST_CASE("count table text round trip") {
  TomographySettings s;
  s.shots_per_setting = 777;
  s.seed = 11;
  const auto c = sample_counts(born_probabilities(singlet()), s);
  std::stringstream ss;
  write_count_table(ss, c);
  const auto back = read_count_table(ss);
  CHECK(back.counts == c.counts);

  std::stringstream text;
  write_count_table(text, c);
  std::string body = text.str();
  std::stringstream missing(body.substr(0, body.rfind("R R")));
  CHECK_THROWS_AS(read_count_table(missing), std::invalid_argument);
  std::stringstream dup(body + "H H 3\n");
  CHECK_THROWS_AS(read_count_table(dup), std::invalid_argument);
  std::stringstream bad("H X 3\n");
  CHECK_THROWS_AS(read_count_table(bad), std::invalid_argument);
  std::stringstream neg("H H -3\n");
  CHECK_THROWS_AS(read_count_table(neg), std::invalid_argument);
}
