#include "qcool/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "qcool/rng.hpp"

namespace qcool {

namespace {

// Single-qubit measurement bases: Z = {H, V}, X = {D, A}, Y = {L, R}.
// Basis b holds states 2b (eigenvalue +1) and 2b + 1 (eigenvalue -1).
constexpr std::size_t kBases = 3;

std::size_t setting_index(std::size_t first, std::size_t second) {
  return first * kSingleStates + second;
}

std::array<Matrix, 4> paulis() {
  Matrix i = Matrix::Identity(2, 2);
  Matrix x = Matrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  Matrix y = Matrix::Zero(2, 2);
  y(0, 1) = Complex{0.0, -1.0};
  y(1, 0) = Complex{0.0, 1.0};
  Matrix z = Matrix::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  return {i, x, y, z};
}

// Pauli index (1 = X, 2 = Y, 3 = Z) measured by basis b.
constexpr std::array<std::size_t, kBases> kPauliOfBasis{3, 1, 2};

std::size_t label_index(std::string_view label) {
  for (std::size_t k = 0; k < kSingleStates; ++k) {
    if (kStateLabels[k] == label) return k;
  }
  throw std::invalid_argument("unknown tomography label '" + std::string(label) + "'");
}

}  // namespace

Eigen::VectorXcd single_state(std::size_t index) {
  const double h = 1.0 / std::sqrt(2.0);
  const Complex i{0.0, 1.0};
  Eigen::VectorXcd k(2);
  switch (index) {
    case 0: k << 1.0, 0.0; break;
    case 1: k << 0.0, 1.0; break;
    case 2: k << h, h; break;
    case 3: k << h, -h; break;
    case 4: k << h, i * h; break;
    case 5: k << h, -i * h; break;
    default: throw std::out_of_range("single-qubit tomography state index out of range");
  }
  return k;
}

Probabilities born_probabilities(const DensityMatrix& rho) {
  if (rho.dims() != std::vector<std::size_t>{2, 2}) {
    throw std::invalid_argument("tomography expects a two-qubit state");
  }
  Probabilities out{};
  for (std::size_t a = 0; a < kSingleStates; ++a) {
    for (std::size_t b = 0; b < kSingleStates; ++b) {
      Eigen::VectorXcd ket(4);
      const auto ka = single_state(a);
      const auto kb = single_state(b);
      ket << ka(0) * kb(0), ka(0) * kb(1), ka(1) * kb(0), ka(1) * kb(1);
      const double p = (ket.adjoint() * rho.data() * ket)(0, 0).real();
      out[setting_index(a, b)] = std::clamp(p, 0.0, 1.0);
    }
  }
  return out;
}

CountTable sample_counts(const Probabilities& probs, const TomographySettings& settings) {
  if (settings.shots_per_setting < 1) {
    throw std::invalid_argument("shots_per_setting must be at least 1");
  }
  CountTable table;
  const auto shots = settings.shots_per_setting;
  if (settings.noise_model == CountNoise::poisson) {
    for (std::size_t k = 0; k < kSettings; ++k) {
      Rng rng(derive_seed(settings.seed, 100 + k));
      const double mean = static_cast<double>(shots) * std::max(0.0, probs[k]);
      table.counts[k] = mean > 0.0 ? std::poisson_distribution<std::uint64_t>(mean)(rng) : 0;
    }
    return table;
  }
  for (std::size_t ba = 0; ba < kBases; ++ba) {
    for (std::size_t bb = 0; bb < kBases; ++bb) {
      Rng rng(derive_seed(settings.seed, ba * kBases + bb));
      const std::array<std::size_t, 4> idx{
          setting_index(2 * ba, 2 * bb), setting_index(2 * ba, 2 * bb + 1),
          setting_index(2 * ba + 1, 2 * bb), setting_index(2 * ba + 1, 2 * bb + 1)};
      std::size_t last_nonzero = 0;
      for (std::size_t j = 0; j < idx.size(); ++j) {
        if (probs[idx[j]] > 0.0) last_nonzero = j;
      }
      std::uint64_t remaining = shots;
      // sequential conditional binomials realize one multinomial draw
      for (std::size_t j = 0; j < idx.size(); ++j) {
        const double p = std::max(0.0, probs[idx[j]]);
        double rest = 0.0;
        for (std::size_t k = j; k < idx.size(); ++k) rest += std::max(0.0, probs[idx[k]]);
        std::uint64_t c = 0;
        if (j == last_nonzero) {
          c = remaining;
        } else if (j < last_nonzero && remaining > 0 && p > 0.0) {
          c = std::binomial_distribution<std::uint64_t>(remaining, std::min(1.0, p / rest))(rng);
        }
        table.counts[idx[j]] = c;
        remaining -= c;
      }
    }
  }
  return table;
}

Matrix linear_inversion(const Probabilities& freq) {
  // expectation[a][b] of sigma_a (x) sigma_b, with index 0 the identity
  double expectation[4][4] = {};
  expectation[0][0] = 1.0;
  int marginal_hits_first[4] = {};
  int marginal_hits_second[4] = {};
  for (std::size_t ba = 0; ba < kBases; ++ba) {
    for (std::size_t bb = 0; bb < kBases; ++bb) {
      double f[2][2];
      double total = 0.0;
      for (int sa = 0; sa < 2; ++sa) {
        for (int sb = 0; sb < 2; ++sb) {
          f[sa][sb] = freq[setting_index(2 * ba + sa, 2 * bb + sb)];
          total += f[sa][sb];
        }
      }
      if (!(total > 0.0)) {
        throw std::invalid_argument("incomplete count table: basis pair " +
                                    std::string(kStateLabels[2 * ba]) +
                                    std::string(kStateLabels[2 * bb]) + " has no counts");
      }
      const double pp = f[0][0] / total;
      const double pm = f[0][1] / total;
      const double mp = f[1][0] / total;
      const double mm = f[1][1] / total;
      const auto pa = kPauliOfBasis[ba];
      const auto pb = kPauliOfBasis[bb];
      expectation[pa][pb] = pp - pm - mp + mm;
      expectation[pa][0] += pp + pm - mp - mm;
      expectation[0][pb] += pp - pm + mp - mm;
      ++marginal_hits_first[pa];
      ++marginal_hits_second[pb];
    }
  }
  for (int k = 1; k < 4; ++k) {
    expectation[k][0] /= marginal_hits_first[k];
    expectation[0][k] /= marginal_hits_second[k];
  }
  const auto sigma = paulis();
  Matrix rho = Matrix::Zero(4, 4);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) rho += expectation[a][b] * kron(sigma[a], sigma[b]);
  }
  rho /= 4.0;
  return 0.5 * (rho + rho.adjoint());
}

Matrix linear_inversion(const CountTable& counts) {
  Probabilities freq{};
  for (std::size_t k = 0; k < kSettings; ++k) freq[k] = static_cast<double>(counts.counts[k]);
  return linear_inversion(freq);
}

DensityMatrix project_to_physical(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix must be square");
  if (max_hermitian_defect(m) > tol::kPsd) {
    throw std::invalid_argument("physicality projection requires a Hermitian matrix");
  }
  if (std::abs(m.trace().real() - 1.0) > 1e-9) {
    throw std::invalid_argument("physicality projection requires unit trace");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.adjoint()));
  Eigen::VectorXd ev = solver.eigenvalues();  // ascending
  const auto n = ev.size();

  // walk up from the smallest eigenvalue, zeroing while the accumulated
  // deficit spread over the rest would still leave it negative
  double deficit = 0.0;
  Eigen::Index i = 0;
  for (; i < n; ++i) {
    const double remaining = static_cast<double>(n - i);
    if (ev(i) + deficit / remaining >= 0.0) break;
    deficit += ev(i);
    ev(i) = 0.0;
  }
  const double share = deficit / static_cast<double>(n - i);
  for (Eigen::Index j = i; j < n; ++j) ev(j) += share;

  Matrix rho = solver.eigenvectors() * ev.cast<Complex>().asDiagonal() *
               solver.eigenvectors().adjoint();
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace().real();
  std::vector<std::size_t> dims;
  for (auto d = n; d > 1; d /= 2) dims.push_back(2);
  if (dims.empty()) dims.push_back(static_cast<std::size_t>(n));
  if ((std::size_t{1} << dims.size()) != static_cast<std::size_t>(n)) {
    dims = {static_cast<std::size_t>(n)};
  }
  return DensityMatrix(std::move(rho), std::move(dims));
}

DensityMatrix reconstruct(const CountTable& counts) {
  return project_to_physical(linear_inversion(counts));
}

void write_count_table(std::ostream& os, const CountTable& table) {
  os << "# first second count\n";
  for (std::size_t a = 0; a < kSingleStates; ++a) {
    for (std::size_t b = 0; b < kSingleStates; ++b) {
      os << kStateLabels[a] << ' ' << kStateLabels[b] << ' '
         << table.counts[setting_index(a, b)] << '\n';
    }
  }
}

CountTable read_count_table(std::istream& is) {
  CountTable table;
  std::array<bool, kSettings> seen{};
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string a;
    std::string b;
    std::int64_t count = -1;
    std::string extra;
    if (!(fields >> a >> b >> count) || (fields >> extra) || count < 0) {
      throw std::invalid_argument("malformed count table line " + std::to_string(line_no));
    }
    const auto k = setting_index(label_index(a), label_index(b));
    if (seen[k]) {
      throw std::invalid_argument("duplicate setting " + a + b + " on line " +
                                  std::to_string(line_no));
    }
    seen[k] = true;
    table.counts[k] = static_cast<std::uint64_t>(count);
  }
  if (!std::all_of(seen.begin(), seen.end(), [](bool s) { return s; })) {
    throw std::invalid_argument("incomplete count table: expected all 36 settings");
  }
  return table;
}

}  // namespace qcool
