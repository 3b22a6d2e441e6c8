#pragma once

// Simulated two-qubit polarization tomography over the 36 products of the
// six single-qubit eigenstates
//   H = |g>, V = |e>, D = (|g>+|e>)/sqrt2, A = (|g>-|e>)/sqrt2,
//   L = (|g>+i|e>)/sqrt2, R = (|g>-i|e>)/sqrt2.
// Setting k = 6 * first + second, with both indices in the order above.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string_view>

#include "qcool/qmat.hpp"

namespace qcool {

inline constexpr std::size_t kSingleStates = 6;
inline constexpr std::size_t kSettings = 36;

inline constexpr std::array<std::string_view, kSingleStates> kStateLabels{"H", "V", "D",
                                                                          "A", "L", "R"};

enum class CountNoise { multinomial, poisson };

struct TomographySettings {
  std::uint64_t shots_per_setting = 1000;
  std::uint64_t seed = 0;
  CountNoise noise_model = CountNoise::multinomial;
};

using Probabilities = std::array<double, kSettings>;

struct CountTable {
  std::array<std::uint64_t, kSettings> counts{};
};

Eigen::VectorXcd single_state(std::size_t index);

/// tr(Pi_k rho) for every setting.
Probabilities born_probabilities(const DensityMatrix& rho);

/// Multinomial: each of the nine basis pairs receives shots_per_setting
/// trials spread over its four outcomes. Poisson: independent counts with
/// mean shots_per_setting * p_k.
CountTable sample_counts(const Probabilities& probs, const TomographySettings& settings);

/// Pauli-expectation linear inversion. Hermitian and unit trace but not
/// necessarily positive. Throws std::invalid_argument when any basis pair
/// has no counts.
Matrix linear_inversion(const CountTable& counts);
Matrix linear_inversion(const Probabilities& frequencies);

/// Closest density matrix in Frobenius norm to a Hermitian unit-trace
/// matrix: negative eigenvalues are clipped and their weight spread over
/// the remaining ones.
DensityMatrix project_to_physical(const Matrix& m);

DensityMatrix reconstruct(const CountTable& counts);

/// One line per setting, "<first> <second> <count>", after a "#" header.
void write_count_table(std::ostream& os, const CountTable& table);
CountTable read_count_table(std::istream& is);

}  // namespace qcool
