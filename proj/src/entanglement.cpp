#include "qcool/entanglement.hpp"

#include <stdexcept>

namespace qcool {

namespace {

void require_two_qubit(const DensityMatrix& rho) {
  if (rho.dims() != std::vector<std::size_t>{2, 2}) {
    throw std::invalid_argument("entanglement measures require a two-qubit state");
  }
}

}  // namespace

std::vector<double> pt_spectrum(const DensityMatrix& rho) {
  require_two_qubit(rho);
  return herm_eigvals(partial_transpose(rho, 1));
}

double min_pt_eigenvalue(const DensityMatrix& rho) { return pt_spectrum(rho).front(); }

double negativity(const DensityMatrix& rho) {
  double sum = 0.0;
  for (double ev : pt_spectrum(rho)) {
    if (ev < 0.0) sum -= ev;
  }
  return sum;
}

bool is_entangled(const DensityMatrix& rho, double tol) { return min_pt_eigenvalue(rho) < -tol; }

EntanglementReport analyze(const DensityMatrix& rho, double tol) {
  const auto spectrum = pt_spectrum(rho);
  double neg = 0.0;
  for (double ev : spectrum) {
    if (ev < 0.0) neg -= ev;
  }
  return {spectrum.front(), neg, spectrum.front() < -tol};
}

}  // namespace qcool
