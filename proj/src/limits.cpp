#include "qcool/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>

#include "parallel.hpp"
#include "qcool/channel.hpp"
#include "qcool/entanglement.hpp"

namespace qcool {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Sign threshold for bisection; sits just below eigensolver round-off so an
// exactly separable endpoint is never read as entangled.
constexpr double kSignThreshold = -1e-14;

void require_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1], got " +
                                std::to_string(v));
  }
}

void require_p_t(double p_t) {
  if (!(p_t >= 0.0 && p_t <= 0.5)) {
    throw std::invalid_argument("p_T must lie in [0, 1/2], got " + std::to_string(p_t));
  }
}

bool ratio_below_one(double numerator, double success) {
  if (numerator == 0.0) return success > 0.0;
  if (success <= 0.0) return false;
  return numerator / (success * success) < 1.0 - kBoundaryTol;
}

DensityMatrix route_state(double p_t, double loss, Route route, double success) {
  const EnvironmentSpec env(p_t);
  if (route == Route::unconditional) return unconditional_state(success, env);
  return conditional_state(ChannelParams::from_success_loss(success, loss), env).state;
}

}  // namespace

double uncond_boundary(double p_t) {
  require_p_t(p_t);
  const double q = std::sqrt(p_t * (1.0 - p_t));
  return q / (1.0 + q);
}

bool uncond_approx_ok(double success, double p_t) {
  require_unit(success, "P_S");
  require_unit(p_t, "p_T");
  return ratio_below_one(p_t, success);
}

double cond_boundary(double p_tl) {
  require_unit(p_tl, "P_TL");
  return 0.5 * (std::sqrt(p_tl * (4.0 - 3.0 * p_tl)) - p_tl);
}

bool cond_approx_ok(double success, double p_t, double loss) {
  require_unit(success, "P_S");
  require_unit(p_t, "p_T");
  require_unit(loss, "P_L");
  return ratio_below_one(p_t * loss, success);
}

double high_temp_boundary(double loss) {
  require_unit(loss, "P_L");
  return std::sqrt(loss / 2.0);
}

double critical_ps_numeric(double p_t, double loss, Route route, double abs_tol) {
  require_p_t(p_t);
  require_unit(loss, "P_L");
  if (route == Route::conditional && loss >= 1.0) {
    throw std::invalid_argument("conditional boundary requires P_L < 1");
  }
  double lo = 0.0;
  double hi = route == Route::conditional ? 1.0 - loss : 1.0;

  auto min_eig = [&](double s) { return min_pt_eigenvalue(route_state(p_t, loss, route, s)); };

  // negativity must be non-decreasing in P_S over the bracket
  constexpr int kProbes = 33;
  double previous = 0.0;
  for (int i = 0; i < kProbes; ++i) {
    const double s = lo + (hi - lo) * i / (kProbes - 1);
    const double neg = std::max(0.0, -min_eig(s));
    if (i > 0 && neg < previous - tol::kState) {
      throw MonotonicityError("negativity decreases in P_S inside the bisection bracket");
    }
    previous = neg;
  }

  const bool lo_entangled = min_eig(lo) < kSignThreshold;
  const bool hi_entangled = min_eig(hi) < kSignThreshold;
  if (lo_entangled) {
    throw NoBracketError(BracketOutcome::always_entangled,
                         "state is entangled over the whole feasible P_S interval");
  }
  if (!hi_entangled) {
    throw NoBracketError(BracketOutcome::never_entangled,
                         "state is separable over the whole feasible P_S interval");
  }
  const double target = std::min(abs_tol, kBisectionTol) * 1e-2;
  while (hi - lo > target) {
    const double mid = 0.5 * (lo + hi);
    if (min_eig(mid) < kSignThreshold) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

LimitVerdict evaluate_limits(double p_t, double success, double loss) {
  const double ub = uncond_boundary(p_t);
  const double cb = cond_boundary(p_t * loss);
  return {success > ub + kBoundaryTol, success > cb + kBoundaryTol, ub, cb};
}

const char* to_string(PointClass c) {
  switch (c) {
    case PointClass::unconditional:
      return "unconditional";
    case PointClass::conditional_only:
      return "conditional_only";
    case PointClass::separable:
      return "separable";
  }
  return "unknown";
}

PointClass classify(bool unconditional_ok, bool conditional_ok) {
  if (unconditional_ok) return PointClass::unconditional;
  if (conditional_ok) return PointClass::conditional_only;
  return PointClass::separable;
}

Axis Axis::linspace(double lo, double hi, std::size_t steps) {
  Axis axis;
  if (steps == 0) return axis;
  if (steps == 1) {
    axis.values.push_back(lo);
    return axis;
  }
  axis.values.reserve(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(steps - 1);
    axis.values.push_back(i + 1 == steps ? hi : lo + (hi - lo) * t);
  }
  return axis;
}

Axis Axis::of(std::vector<double> values) { return Axis{std::move(values)}; }

namespace {

SweepRecord evaluate_point(double p_t, double p_l, double p_s) {
  SweepRecord rec{};
  rec.p_t = p_t;
  rec.p_s = p_s;
  rec.p_l = p_l;
  rec.p_tl = p_t * p_l;
  rec.photonic_plane = std::abs(2.0 * p_s + p_l - 1.0) <= tol::kState;

  const bool p_t_ok = p_t >= 0.0 && p_t <= 0.5;
  const bool unit_ok = p_s >= 0.0 && p_s <= 1.0 && p_l >= 0.0 && p_l <= 1.0;
  rec.feasible = p_t_ok && unit_ok && p_s + p_l <= 1.0 + tol::kState;

  rec.verdict = {false, false, kNaN, kNaN};
  rec.numeric_negativity = kNaN;
  if (p_t_ok) rec.verdict.uncond_boundary_ps = uncond_boundary(p_t);
  if (p_t_ok && p_l >= 0.0 && p_l <= 1.0) rec.verdict.cond_boundary_ps = cond_boundary(rec.p_tl);
  if (!rec.feasible) return rec;

  rec.verdict = evaluate_limits(p_t, p_s, p_l);
  const auto params = ChannelParams::from_success_loss(p_s, std::min(p_l, 1.0 - p_s));
  rec.numeric_negativity = negativity(conditional_state(params, EnvironmentSpec(p_t)).state);
  return rec;
}

}  // namespace

std::vector<SweepRecord> sweep_points(std::span<const GridPoint> points, unsigned workers) {
  std::vector<SweepRecord> out(points.size());
  detail::parallel_for(points.size(), workers, [&](std::size_t i) {
    out[i] = evaluate_point(points[i].p_t, points[i].p_l, points[i].p_s);
  });
  std::stable_sort(out.begin(), out.end(), [](const SweepRecord& a, const SweepRecord& b) {
    return std::tie(a.p_l, a.p_t, a.p_s) < std::tie(b.p_l, b.p_t, b.p_s);
  });
  return out;
}

std::vector<SweepRecord> sweep(const SweepGrid& grid, unsigned workers) {
  std::vector<GridPoint> points;
  points.reserve(grid.p_t.values.size() * grid.p_l.values.size() * grid.p_s.values.size());
  for (double l : grid.p_l.values) {
    for (double t : grid.p_t.values) {
      for (double s : grid.p_s.values) points.push_back({t, l, s});
    }
  }
  return sweep_points(points, workers);
}

}  // namespace qcool
