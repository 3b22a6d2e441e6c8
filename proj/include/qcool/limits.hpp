#pragma once

// Closed-form cooling limits, bisection cross-checks on the PPT spectrum and
// the parametric sweep over (p_T, P_L, P_S).

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace qcool {

/// Points closer than this to a boundary are classified "not quantum".
inline constexpr double kBoundaryTol = 1e-12;

/// Critical success probability for the unheralded channel:
/// sqrt(p(1-p)) / (1 + sqrt(p(1-p))). Requires p_T in [0, 1/2].
double uncond_boundary(double p_t);

/// p_T / P_S^2 < 1. Equality and P_S = 0 (with p_T > 0) are false.
bool uncond_approx_ok(double success, double p_t);

/// Critical success probability for the heralded channel as a function of
/// the joint error P_TL = p_T * P_L: (sqrt(P_TL (4 - 3 P_TL)) - P_TL) / 2.
double cond_boundary(double p_tl);

/// p_T * P_L / P_S^2 < 1.
bool cond_approx_ok(double success, double p_t, double loss);

/// Hot-environment (p_T = 1/2, small P_L) boundary sqrt(P_L / 2).
double high_temp_boundary(double loss);

enum class Route { unconditional, conditional };

enum class BracketOutcome { always_entangled, never_entangled };

/// Thrown when the feasible P_S interval contains no separability boundary.
class NoBracketError : public std::runtime_error {
 public:
  NoBracketError(BracketOutcome outcome, const char* what)
      : std::runtime_error(what), outcome_(outcome) {}
  BracketOutcome outcome() const noexcept { return outcome_; }

 private:
  BracketOutcome outcome_;
};

/// Thrown when negativity is not monotone over the bisection bracket.
class MonotonicityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kBisectionTol = 1e-8;

/// Locates the separability boundary in P_S by bisection on the sign of the
/// minimum partial-transpose eigenvalue of the relevant state (unconditional
/// state for Route::unconditional; heralded state with P_F = 1 - P_S - P_L
/// on [0, 1 - P_L] for Route::conditional). P_L is ignored for the
/// unconditional route.
double critical_ps_numeric(double p_t, double loss, Route route,
                           double abs_tol = kBisectionTol);

struct LimitVerdict {
  bool unconditional_ok;
  bool conditional_ok;
  double uncond_boundary_ps;
  double cond_boundary_ps;
};

LimitVerdict evaluate_limits(double p_t, double success, double loss);

enum class PointClass { unconditional, conditional_only, separable };

const char* to_string(PointClass c);

/// Three-way classification from a pair of entanglement verdicts.
PointClass classify(bool unconditional_ok, bool conditional_ok);

struct SweepRecord {
  double p_t;
  double p_s;
  double p_l;
  double p_tl;
  LimitVerdict verdict;
  /// Negativity of the heralded state; NaN for infeasible points.
  double numeric_negativity;
  bool feasible;
  /// 2 P_S + P_L = 1 within 1e-12 (the two-splitter photonic plane).
  bool photonic_plane;
};

/// Ordered list of axis values; linspace(a, b, 1) yields {a}.
struct Axis {
  std::vector<double> values;

  static Axis linspace(double lo, double hi, std::size_t steps);
  static Axis of(std::vector<double> values);
};

struct SweepGrid {
  Axis p_t;
  Axis p_l;
  Axis p_s;
};

struct GridPoint {
  double p_t;
  double p_l;
  double p_s;
};

/// Evaluates every point, sorted lexicographically by (P_L, p_T, P_S)
/// regardless of the worker count.
std::vector<SweepRecord> sweep_points(std::span<const GridPoint> points, unsigned workers = 1);

/// Evaluates every grid point. Output is sorted lexicographically by
/// (P_L, p_T, P_S) regardless of the worker count. Infeasible points are
/// kept and flagged.
std::vector<SweepRecord> sweep(const SweepGrid& grid, unsigned workers = 1);

}  // namespace qcool
