#pragma once

// PPT entanglement verdicts for two-qubit states. For 2x2 systems a positive
// partial transpose is necessary and sufficient for separability.

#include "qcool/qmat.hpp"

namespace qcool {

/// Default verdict threshold on the minimum partial-transpose eigenvalue.
inline constexpr double kEntanglementTol = 1e-9;

struct EntanglementReport {
  double min_pt_eigenvalue;
  double negativity;
  bool entangled;
};

/// Spectrum of the partial transpose on the second qubit, ascending.
std::vector<double> pt_spectrum(const DensityMatrix& rho);

double min_pt_eigenvalue(const DensityMatrix& rho);

/// Sum of |negative| partial-transpose eigenvalues; 1/2 for a maximally
/// entangled pair.
double negativity(const DensityMatrix& rho);

bool is_entangled(const DensityMatrix& rho, double tol = kEntanglementTol);

EntanglementReport analyze(const DensityMatrix& rho, double tol = kEntanglementTol);

}  // namespace qcool
