#pragma once

#include <limits>
#include <vector>

#include "nlcd/field.hpp"
#include "nlcd/references.hpp"

namespace nlcd {

constexpr double kPInf = std::numeric_limits<double>::infinity();

// Trapezoid-weighted grid L^p norm; p = kPInf takes the max. p < 1 is rejected.
double lp_norm(const std::vector<double>& values, const Grid1D& grid, double p);

// ||u(t) - w^R(t)||_p and ||u(t) - w(t)||_p on the grid; both need state.time > 0.
double error_to_rarefaction(const FieldState& state, const RiemannData& r, double p);
double error_to_viscous(const FieldState& state, const RiemannData& r, double p);

// Trapezoid L1 distance between two states on one grid, restricted to nodes
// with x in [x_lo, x_hi]. Used by the vanishing-viscosity study.
double l1_distance_window(const FieldState& a, const FieldState& b, double x_lo, double x_hi);

// Per-time norm summary at p = 1, 2, inf (index order fixed).
struct NormReport {
  double time = 0.0;
  double err_rarefaction[3] = {0.0, 0.0, 0.0};
  double err_viscous[3] = {0.0, 0.0, 0.0};
  double deriv_norm[3] = {0.0, 0.0, 0.0};
  double gn_ratio[3] = {0.0, 0.0, 0.0};
};

NormReport make_norm_report(const FieldState& state, const RiemannData& r);

enum class RateCorrection { None, SqrtLog };

struct RateFit {
  double exponent = 0.0;      // least-squares slope in (log t, log err)
  double log_constant = 0.0;  // intercept
  double residual = 0.0;      // RMS log-space misfit
  double window_lo = 0.0;
  double window_hi = 0.0;
  RateCorrection correction = RateCorrection::None;
};

// Fits err(t) ~ C t^q on times within [window_lo, window_hi]. With SqrtLog the
// errors are first divided by [log(2 + t)]^{(1 + 1/p)/2}; p only enters there.
RateFit fit_rate(const std::vector<double>& times, const std::vector<double>& errors,
                 double window_lo, double window_hi, RateCorrection correction, double p);

// Interpolation-inequality diagnostic (reported, never asserted):
// ||u-w||_p / ( (||u_x||_inf + ||w_x||_inf)^a ||u-w||_1^{1-a} ), a = (1 - 1/p)/2.
// Returns 0 when the denominator degenerates (u == w).
double gn_diagnostic(const FieldState& state, const RiemannData& r, double p);

}  // namespace nlcd
