#pragma once

// Environment, channel parameters and the canonical states of a qubit sent
// through an incoherent many-qubit environment. Register order is R, A, B.

#include <string>

#include "qcool/qmat.hpp"

namespace qcool {

/// Environment qubit E = (1-p_T)|g><g| + p_T|e><e|, with p_T in [0, 1/2].
struct EnvironmentSpec {
  double p_t = 0.0;
  std::string ground_label = "H";
  std::string excited_label = "V";

  explicit EnvironmentSpec(double excitation, std::string ground = "H",
                           std::string excited = "V");
};

/// Success / flip / loss probabilities. They must lie in [0,1] and sum to 1
/// within 1e-12.
struct ChannelParams {
  double success = 0.0;
  double flip = 0.0;
  double loss = 0.0;

  ChannelParams(double success, double flip, double loss);

  /// Closes the triple with flip = 1 - success - loss.
  static ChannelParams from_success_loss(double success, double loss);
};

/// Dimensionless ratio DeltaE / (k_B T); must be finite and non-negative.
struct ThermalPoint {
  double delta_e_over_kt = 0.0;
};

/// Ground/excited basis kets of a single qubit.
Eigen::VectorXcd ground_ket();
Eigen::VectorXcd excited_ket();

/// Normalized pure projector |Phi><Phi| with |Phi> = cos(theta/2)|g> +
/// e^{i phi} sin(theta/2)|e>.
Matrix bloch_projector(double theta, double phi);

DensityMatrix env_state(const EnvironmentSpec& spec);

/// Two-level Boltzmann occupation e^{-x}/(1+e^{-x}).
double thermal_p(ThermalPoint t);

/// |Psi-><Psi-| with |Psi-> = (|g e> - |e g>)/sqrt(2).
DensityMatrix singlet();

/// P_S |Psi-><Psi-| + (1-P_S) (I/2 (x) E), the two-qubit R,A state seen
/// without access to the auxiliary output.
DensityMatrix unconditional_state(double success, const EnvironmentSpec& spec);

/// Three-term R,A,B mixture: success leaves the singlet on R,A with noise in
/// B, flip moves it to R,B with noise in A, loss leaves I/2 (x) E (x) E.
DensityMatrix tripartite_state(const ChannelParams& params, const EnvironmentSpec& spec);

struct HeraldedState {
  DensityMatrix state;
  double weight;
};

/// Closed-form R,A state after projecting B on the ground state, together
/// with its heralding probability N = (1-p_T)(1-P_F) + P_F/2.
HeraldedState conditional_state(const ChannelParams& params, const EnvironmentSpec& spec);

/// Applies I (x) I (x) projector to an 8x8 R,A,B state, traces B out and
/// returns the normalized R,A state with the pre-normalization trace.
/// The projector must be a rank-1 orthogonal projector within 1e-12.
HeraldedState project_b(const DensityMatrix& rho8, const Matrix& projector);

}  // namespace qcool
