#pragma once

// Monte Carlo model of the two-beam-splitter photonic channel simulator and
// the analytic mapping from count rates to channel parameters.
//
// Topology: a pair source emits one photon straight to detector R and one
// signal photon into the first 50:50 splitter, whose other input carries
// the noise photons. One output of that splitter is discarded; the other
// feeds a second 50:50 splitter whose outputs are A and B. Unpaired photons
// from the source reach R as an independent stream. A heralded triple is an
// R click followed within the coincidence window by exactly one click at A
// and exactly one at B.

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "qcool/channel.hpp"

namespace qcool {

struct RateConfig {
  double rate_singlet = 0.0;  ///< R_Psi, pairs per second
  double rate_singles = 0.0;  ///< R_S, unpaired photons per second at R
  double rate_noise = 0.0;    ///< R_N, noise photons per second
  double window = 0.0;        ///< tau, seconds
  /// Probability that a noise photon is in the excited polarization.
  /// 0 and 1 give the two pure noise settings used for mixing.
  double noise_excited = 0.0;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  /// Human-readable notes for rate * window products above 0.1.
  std::vector<std::string> warnings() const;

  bool same_channel(const RateConfig& other) const;
};

/// R = R_N R_S tau / R_Psi.
double rate_ratio(const RateConfig& config);

/// r_Psi = R_Psi / (4 R_S).
double singlet_fraction(const RateConfig& config);

/// (P_S, P_F, P_L) = (1, 1, r) / (2 + r).
ChannelParams params_from_ratio(double ratio);

/// Loss-to-success ratio expected from the simulated topology,
/// R + R_N tau / 2. It reduces to R when R_S >> R_Psi.
double model_loss_success_ratio(const RateConfig& config);

struct AccessibleBounds {
  double from_success;     ///< P_S / r_Psi
  double from_complement;  ///< (1 - P_S) / (1 - r_Psi); +inf when r_Psi >= 1

  bool admits(double loss) const { return loss < from_success && loss < from_complement; }
};

AccessibleBounds accessible_bounds(double success, double singlet_fraction);

enum class Detector : std::uint8_t { R, A, B };
enum class Provenance : std::uint8_t { signal, noise, single };

const char* to_string(Detector d);
const char* to_string(Provenance p);

struct Click {
  std::int64_t time_ps;
  Detector detector;
  Provenance provenance;
  /// Whether the photon passes a ground-state polarizer in front of B.
  bool passes_ground;
};

enum class TripleKind : std::uint8_t { success, flip, loss };

struct TripleEvent {
  std::int64_t time_ps;
  TripleKind kind;
  bool heralded;
};

struct EmpiricalParams {
  double success, flip, loss;
  double se_success, se_flip, se_loss;
  std::uint64_t n;

  ChannelParams params() const;
};

struct StreamCounts {
  std::uint64_t pairs = 0;
  std::uint64_t singles = 0;
  std::uint64_t noise = 0;
};

struct CoincidenceTally {
  RateConfig config;
  double duration = 0.0;
  std::uint64_t n_success = 0;
  std::uint64_t n_flip = 0;
  std::uint64_t n_loss = 0;
  /// Subset of triples whose B photon passes the ground-state polarizer.
  std::uint64_t h_success = 0;
  std::uint64_t h_flip = 0;
  std::uint64_t h_loss = 0;
  StreamCounts emitted;
  std::vector<TripleEvent> events;

  std::uint64_t n_triple() const { return n_success + n_flip + n_loss; }
  std::uint64_t n_heralded() const { return h_success + h_flip + h_loss; }

  /// Triple frequencies with binomial standard errors.
  EmpiricalParams empirical() const;
  /// Frequencies among heralded triples.
  EmpiricalParams heralded_empirical() const;

  /// 2 P_S + P_L - 1 estimated from the triples and its standard error.
  std::pair<double, double> photonic_constraint() const;

  void add(const TripleEvent& e);
};

/// Associative merge; events are concatenated and kept in time order.
CoincidenceTally merge(const CoincidenceTally& a, const CoincidenceTally& b);

using ClickSink = std::function<void(const Click&)>;

/// Event-driven simulation of `duration` seconds. Deterministic for a fixed
/// (config, duration, seed). Every click is passed to `sink` in time order
/// when one is given.
CoincidenceTally simulate_streams(const RateConfig& config, double duration,
                                  std::uint64_t seed, const ClickSink& sink = {});

/// Splits the run into `shards` consecutive segments with derived seeds and
/// merges them in segment order; the result does not depend on `workers`.
CoincidenceTally simulate_sharded(const RateConfig& config, double duration,
                                  std::uint64_t seed, unsigned shards, unsigned workers);

/// Keeps each ground-noise triple with probability 1-p_T and each
/// excited-noise triple with probability p_T.
CoincidenceTally mix_detections(const CoincidenceTally& ground, const CoincidenceTally& excited,
                                double p_t, std::uint64_t seed);

/// Heralded R,A state obtained by inserting the empirical channel
/// parameters into the closed-form conditional state.
DensityMatrix heralded_state_estimate(const CoincidenceTally& tally, const EnvironmentSpec& spec);

}  // namespace qcool
