#pragma once

// Small dense complex-matrix kernel for 2-, 4- and 8-dimensional Hermitian
// operators on qubit registers. Subsystem 0 is the leftmost tensor factor.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qcool {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Tolerance ladder shared by every module.
namespace tol {
inline constexpr double kAlgebraic = 1e-14;
inline constexpr double kState = 1e-12;
inline constexpr double kPsd = 1e-10;
}  // namespace tol

/// Validated density operator with subsystem bookkeeping.
///
/// Construction checks Hermiticity (1e-12), unit trace (1e-12) and positive
/// semidefiniteness (min eigenvalue >= -1e-10) and throws
/// std::invalid_argument otherwise. The stored matrix is symmetrized so the
/// Hermitian part is exact.
class DensityMatrix {
 public:
  DensityMatrix(Matrix data, std::vector<std::size_t> dims);

  /// Single-register state; dims are inferred as a chain of qubits.
  explicit DensityMatrix(Matrix data);

  const Matrix& data() const noexcept { return data_; }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(data_.rows()); }
  std::size_t num_subsystems() const noexcept { return dims_.size(); }

  Complex operator()(Eigen::Index r, Eigen::Index c) const { return data_(r, c); }

  double purity() const;

 private:
  Matrix data_;
  std::vector<std::size_t> dims_;
};

Matrix kron(const Matrix& a, const Matrix& b);
DensityMatrix kron(const DensityMatrix& a, const DensityMatrix& b);

/// Traces out one subsystem; remaining subsystems keep their order.
DensityMatrix partial_trace(const DensityMatrix& rho, std::size_t subsystem);

/// Transposes the indices of one subsystem only.
Matrix partial_transpose(const Matrix& m, std::span<const std::size_t> dims,
                         std::size_t subsystem);
Matrix partial_transpose(const DensityMatrix& rho, std::size_t subsystem);

/// Ascending real spectrum of a Hermitian matrix. Throws
/// std::invalid_argument if the input deviates from Hermitian by more
/// than 1e-10.
std::vector<double> herm_eigvals(const Matrix& a);

double max_hermitian_defect(const Matrix& a);

/// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Principal square root of a positive semidefinite Hermitian matrix.
/// Negative eigenvalues within the PSD slack are clipped to zero.
Matrix psd_sqrt(const Matrix& a);

Matrix identity(std::size_t d);
Matrix projector(const Eigen::VectorXcd& ket);

}  // namespace qcool
