#include "qcool/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qcool {

namespace {

std::size_t product(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

std::vector<std::size_t> qubit_chain(Eigen::Index d) {
  std::vector<std::size_t> dims;
  auto n = static_cast<std::size_t>(d);
  while (n > 1) {
    if (n % 2 != 0) {
      throw std::invalid_argument("dimension " + std::to_string(d) + " is not a power of two");
    }
    dims.push_back(2);
    n /= 2;
  }
  if (dims.empty()) dims.push_back(1);
  return dims;
}

// Row-major strides: index = sum_k digit_k * stride_k.
std::vector<std::size_t> strides_of(std::span<const std::size_t> dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) s[k - 1] = s[k] * dims[k];
  return s;
}

void check_subsystem(std::size_t subsystem, std::size_t n) {
  if (subsystem >= n) {
    throw std::out_of_range("subsystem index " + std::to_string(subsystem) +
                            " out of range for " + std::to_string(n) + " subsystems");
  }
}

}  // namespace

DensityMatrix::DensityMatrix(Matrix data, std::vector<std::size_t> dims)
    : data_(std::move(data)), dims_(std::move(dims)) {
  if (data_.rows() != data_.cols()) {
    throw std::invalid_argument("density matrix must be square");
  }
  if (product(dims_) != static_cast<std::size_t>(data_.rows())) {
    throw std::invalid_argument("subsystem dimensions do not multiply to the matrix size");
  }
  const double defect = max_hermitian_defect(data_);
  if (defect > tol::kState) {
    throw std::invalid_argument("density matrix is not Hermitian (defect " +
                                std::to_string(defect) + ")");
  }
  const Complex tr = data_.trace();
  if (std::abs(tr - Complex{1.0, 0.0}) > tol::kState) {
    throw std::invalid_argument("density matrix trace " + std::to_string(tr.real()) +
                                " differs from 1");
  }
  data_ = (0.5 * (data_ + data_.adjoint())).eval();
  const auto ev = herm_eigvals(data_);
  if (ev.front() < -tol::kPsd) {
    throw std::invalid_argument("density matrix has negative eigenvalue " +
                                std::to_string(ev.front()));
  }
}

DensityMatrix::DensityMatrix(Matrix data) : DensityMatrix(data, qubit_chain(data.rows())) {}

double DensityMatrix::purity() const { return (data_ * data_).trace().real(); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

DensityMatrix kron(const DensityMatrix& a, const DensityMatrix& b) {
  auto dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return DensityMatrix(kron(a.data(), b.data()), std::move(dims));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::size_t subsystem) {
  const auto& dims = rho.dims();
  check_subsystem(subsystem, dims.size());
  if (dims.size() == 1) {
    throw std::invalid_argument("cannot trace out the only subsystem");
  }
  std::vector<std::size_t> kept;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (k != subsystem) kept.push_back(dims[k]);
  }
  const std::size_t dk = dims[subsystem];
  const std::size_t outer = product(std::span(dims).first(subsystem));
  const std::size_t inner = product(std::span(dims).subspan(subsystem + 1));
  const auto d_out = static_cast<Eigen::Index>(outer * inner);

  // full index = (o * dk + t) * inner + i ; reduced index = o * inner + i
  Matrix out = Matrix::Zero(d_out, d_out);
  const auto& m = rho.data();
  for (std::size_t o1 = 0; o1 < outer; ++o1) {
    for (std::size_t i1 = 0; i1 < inner; ++i1) {
      for (std::size_t o2 = 0; o2 < outer; ++o2) {
        for (std::size_t i2 = 0; i2 < inner; ++i2) {
          Complex acc{};
          for (std::size_t t = 0; t < dk; ++t) {
            acc += m(static_cast<Eigen::Index>((o1 * dk + t) * inner + i1),
                     static_cast<Eigen::Index>((o2 * dk + t) * inner + i2));
          }
          out(static_cast<Eigen::Index>(o1 * inner + i1),
              static_cast<Eigen::Index>(o2 * inner + i2)) = acc;
        }
      }
    }
  }
  return DensityMatrix(std::move(out), std::move(kept));
}

Matrix partial_transpose(const Matrix& m, std::span<const std::size_t> dims,
                         std::size_t subsystem) {
  check_subsystem(subsystem, dims.size());
  if (product(dims) != static_cast<std::size_t>(m.rows()) || m.rows() != m.cols()) {
    throw std::invalid_argument("matrix shape does not match subsystem dimensions");
  }
  const auto strides = strides_of(dims);
  const std::size_t stride = strides[subsystem];
  const std::size_t dk = dims[subsystem];
  const auto d = static_cast<std::size_t>(m.rows());

  Matrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < d; ++r) {
    const std::size_t rk = (r / stride) % dk;
    for (std::size_t c = 0; c < d; ++c) {
      const std::size_t ck = (c / stride) % dk;
      // swap the subsystem digit between row and column index
      const std::size_t r2 = r + (ck - rk) * stride;
      const std::size_t c2 = c + (rk - ck) * stride;
      out(static_cast<Eigen::Index>(r2), static_cast<Eigen::Index>(c2)) =
          m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return out;
}

Matrix partial_transpose(const DensityMatrix& rho, std::size_t subsystem) {
  return partial_transpose(rho.data(), rho.dims(), subsystem);
}

double max_hermitian_defect(const Matrix& a) {
  if (a.rows() != a.cols()) return INFINITY;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

std::vector<double> herm_eigvals(const Matrix& a) {
  const double defect = max_hermitian_defect(a);
  if (defect > tol::kPsd) {
    throw std::invalid_argument("matrix is not Hermitian (defect " + std::to_string(defect) +
                                ")");
  }
  const Matrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("Hermitian eigensolver did not converge");
  }
  const auto& ev = solver.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end());
  return out;
}

Matrix psd_sqrt(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (a + a.adjoint()));
  const Eigen::VectorXd root = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * root.asDiagonal() * solver.eigenvectors().adjoint();
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dims() != sigma.dims()) {
    throw std::invalid_argument("fidelity requires states with identical subsystem dimensions");
  }
  const Matrix root = psd_sqrt(rho.data());
  const Matrix inner = root * sigma.data() * root;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (inner + inner.adjoint()),
                                               Eigen::EigenvaluesOnly);
  const double tr = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(tr * tr, 0.0, 1.0);
}

Matrix identity(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return Matrix::Identity(n, n);
}

Matrix projector(const Eigen::VectorXcd& ket) { return ket * ket.adjoint(); }

}  // namespace qcool
