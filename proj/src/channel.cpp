#include "qcool/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qcool {

namespace {

void require_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1], got " +
                                std::to_string(p));
  }
}

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

EnvironmentSpec::EnvironmentSpec(double excitation, std::string ground, std::string excited)
    : p_t(excitation), ground_label(std::move(ground)), excited_label(std::move(excited)) {
  if (!(p_t >= 0.0 && p_t <= 0.5)) {
    throw std::invalid_argument("p_T must lie in [0, 1/2], got " + std::to_string(p_t));
  }
}

ChannelParams::ChannelParams(double s, double f, double l) : success(s), flip(f), loss(l) {
  require_probability(success, "P_S");
  require_probability(flip, "P_F");
  require_probability(loss, "P_L");
  if (std::abs(success + flip + loss - 1.0) > tol::kState) {
    throw std::invalid_argument("P_S + P_F + P_L must equal 1");
  }
}

ChannelParams ChannelParams::from_success_loss(double success, double loss) {
  require_probability(success, "P_S");
  require_probability(loss, "P_L");
  if (success + loss > 1.0 + tol::kState) {
    throw std::invalid_argument("P_S + P_L must not exceed 1");
  }
  const double flip = std::max(0.0, 1.0 - success - loss);
  return {success, flip, loss};
}

Eigen::VectorXcd ground_ket() {
  Eigen::VectorXcd k(2);
  k << 1.0, 0.0;
  return k;
}

Eigen::VectorXcd excited_ket() {
  Eigen::VectorXcd k(2);
  k << 0.0, 1.0;
  return k;
}

Matrix bloch_projector(double theta, double phi) {
  Eigen::VectorXcd k(2);
  k << std::cos(theta / 2), std::polar(1.0, phi) * std::sin(theta / 2);
  return projector(k);
}

DensityMatrix env_state(const EnvironmentSpec& spec) {
  return DensityMatrix(diag2(1.0 - spec.p_t, spec.p_t), {2});
}

double thermal_p(ThermalPoint t) {
  const double x = t.delta_e_over_kt;
  if (!(x >= 0.0) || std::isnan(x)) {
    throw std::invalid_argument("DeltaE/(k_B T) must be non-negative");
  }
  if (std::isinf(x)) return 0.0;
  // e^{-x}/(1+e^{-x}) written to stay accurate for large x
  return 1.0 / (1.0 + std::exp(x));
}

DensityMatrix singlet() {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(1) = 1.0 / std::sqrt(2.0);
  psi(2) = -1.0 / std::sqrt(2.0);
  return DensityMatrix(projector(psi), {2, 2});
}

DensityMatrix unconditional_state(double success, const EnvironmentSpec& spec) {
  require_probability(success, "P_S");
  const Matrix noise = kron(0.5 * identity(2), env_state(spec).data());
  return DensityMatrix(success * singlet().data() + (1.0 - success) * noise, {2, 2});
}

DensityMatrix tripartite_state(const ChannelParams& params, const EnvironmentSpec& spec) {
  const Matrix env = env_state(spec).data();
  const Matrix psi = singlet().data();

  const Matrix success_term = kron(psi, env);

  // singlet on R,B with noise in A: build in R,B,A order then swap A and B
  const Matrix rba = kron(psi, env);
  Matrix flip_term(8, 8);
  auto swap_ab = [](Eigen::Index i) { return (i & 4) | ((i & 1) << 1) | ((i & 2) >> 1); };
  for (Eigen::Index r = 0; r < 8; ++r) {
    for (Eigen::Index c = 0; c < 8; ++c) flip_term(swap_ab(r), swap_ab(c)) = rba(r, c);
  }

  const Matrix loss_term = kron(kron(0.5 * identity(2), env), env);

  Matrix rho = params.success * success_term + params.flip * flip_term + params.loss * loss_term;
  return DensityMatrix(std::move(rho), {2, 2, 2});
}

HeraldedState conditional_state(const ChannelParams& params, const EnvironmentSpec& spec) {
  const double p = spec.p_t;
  const double weight = (1.0 - p) * (1.0 - params.flip) + params.flip / 2.0;
  if (!(weight > 0.0)) {
    throw std::domain_error("heralding probability vanishes");
  }
  const Matrix env = env_state(spec).data();
  const Matrix unnormalized =
      (1.0 - p) * (params.success * singlet().data() +
                   params.loss * kron(0.5 * identity(2), env)) +
      0.5 * params.flip * kron(diag2(0.0, 1.0), env);
  return {DensityMatrix(unnormalized / weight, {2, 2}), weight};
}

HeraldedState project_b(const DensityMatrix& rho8, const Matrix& projector) {
  if (rho8.dims() != std::vector<std::size_t>{2, 2, 2}) {
    throw std::invalid_argument("project_b expects an R,A,B three-qubit state");
  }
  if (projector.rows() != 2 || projector.cols() != 2 ||
      max_hermitian_defect(projector) > tol::kState ||
      ((projector * projector) - projector).cwiseAbs().maxCoeff() > tol::kState ||
      std::abs(projector.trace() - Complex{1.0, 0.0}) > tol::kState) {
    throw std::invalid_argument("B projector must be a rank-1 orthogonal projector");
  }
  const Matrix lifted = kron(identity(4), projector);
  const Matrix projected = lifted * rho8.data() * lifted;
  const double weight = projected.trace().real();
  if (!(weight > tol::kState)) {
    throw std::domain_error("projection outcome has zero probability");
  }
  // trace out B from the projected operator
  Matrix reduced = Matrix::Zero(4, 4);
  for (Eigen::Index r = 0; r < 4; ++r) {
    for (Eigen::Index c = 0; c < 4; ++c) {
      reduced(r, c) = projected(2 * r, 2 * c) + projected(2 * r + 1, 2 * c + 1);
    }
  }
  return {DensityMatrix(reduced / weight, {2, 2}), weight};
}

}  // namespace qcool
