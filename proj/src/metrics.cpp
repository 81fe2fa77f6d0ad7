#include "nlcd/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "nlcd/errors.hpp"

namespace nlcd {

namespace {

// Neumaier-compensated accumulation keeps norm sums order-stable.
struct CompensatedSum {
  double total = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double t = total + v;
    if (std::abs(total) >= std::abs(v)) {
      carry += (total - t) + v;
    } else {
      carry += (v - t) + total;
    }
    total = t;
  }
  double value() const { return total + carry; }
};

void require_grid_match(const FieldState& state) {
  if (state.values.size() != static_cast<size_t>(state.grid.n)) {
    throw Error(ErrorCode::GridMismatch, "state has " + std::to_string(state.values.size()) +
                                             " values on a grid of " + std::to_string(state.grid.n) + " nodes");
  }
}

std::vector<double> viscous_dx_on_grid(const FieldState& state, const RiemannData& r) {
  std::vector<double> out(state.values.size());
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = viscous_profile_dx(r, state.grid.x(static_cast<int>(i)), state.time);
  }
  return out;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double lp_norm(const std::vector<double>& values, const Grid1D& grid, double p) {
  if (values.size() != static_cast<size_t>(grid.n)) {
    throw Error(ErrorCode::GridMismatch, "lp_norm: " + std::to_string(values.size()) + " values on " +
                                             std::to_string(grid.n) + " nodes");
  }
  if (std::isnan(p) || p < 1.0) {
    throw Error(ErrorCode::BadP, "p must be >= 1 or inf, got " + std::to_string(p));
  }
  if (p == kPInf) {
    return max_abs(values);
  }
  const double h = grid.h();
  CompensatedSum sum;
  for (size_t i = 0; i < values.size(); ++i) {
    const double w = (i == 0 || i + 1 == values.size()) ? 0.5 * h : h;
    sum.add(w * std::pow(std::abs(values[i]), p));
  }
  return std::pow(sum.value(), 1.0 / p);
}

double error_to_rarefaction(const FieldState& state, const RiemannData& r, double p) {
  require_grid_match(state);
  if (!(state.time > 0.0)) {
    throw Error(ErrorCode::NonpositiveTime, "rarefaction comparison needs t > 0");
  }
  std::vector<double> diff(state.values.size());
  for (size_t i = 0; i < diff.size(); ++i) {
    diff[i] = state.values[i] - rarefaction(r, state.grid.x(static_cast<int>(i)), state.time);
  }
  return lp_norm(diff, state.grid, p);
}

double error_to_viscous(const FieldState& state, const RiemannData& r, double p) {
  require_grid_match(state);
  if (!(state.time > 0.0)) {
    throw Error(ErrorCode::NonpositiveTime, "viscous-profile comparison needs t > 0");
  }
  std::vector<double> diff(state.values.size());
  for (size_t i = 0; i < diff.size(); ++i) {
    diff[i] = state.values[i] - viscous_profile(r, state.grid.x(static_cast<int>(i)), state.time);
  }
  return lp_norm(diff, state.grid, p);
}

double l1_distance_window(const FieldState& a, const FieldState& b, double x_lo, double x_hi) {
  require_grid_match(a);
  require_grid_match(b);
  if (!(a.grid == b.grid)) {
    throw Error(ErrorCode::MismatchedRuns, "windowed distance needs a shared grid");
  }
  if (!(x_lo < x_hi)) {
    throw Error(ErrorCode::InvalidArgument, "window needs x_lo < x_hi");
  }
  const double h = a.grid.h();
  int lo = -1;
  int hi = -1;
  for (int i = 0; i < a.grid.n; ++i) {
    const double x = a.grid.x(i);
    if (x >= x_lo - 1e-12 && lo < 0) lo = i;
    if (x <= x_hi + 1e-12) hi = i;
  }
  if (lo < 0 || hi < lo + 1) {
    throw Error(ErrorCode::TooFewPoints, "window contains fewer than two grid nodes");
  }
  CompensatedSum sum;
  for (int i = lo; i <= hi; ++i) {
    const double w = (i == lo || i == hi) ? 0.5 * h : h;
    sum.add(w * std::abs(a.values[static_cast<size_t>(i)] - b.values[static_cast<size_t>(i)]));
  }
  return sum.value();
}

NormReport make_norm_report(const FieldState& state, const RiemannData& r) {
  NormReport rep;
  rep.time = state.time;
  const double ps[3] = {1.0, 2.0, kPInf};
  const std::vector<double> du = derivative(state);
  for (int k = 0; k < 3; ++k) {
    rep.err_rarefaction[k] = error_to_rarefaction(state, r, ps[k]);
    rep.err_viscous[k] = error_to_viscous(state, r, ps[k]);
    rep.deriv_norm[k] = lp_norm(du, state.grid, ps[k]);
    rep.gn_ratio[k] = gn_diagnostic(state, r, ps[k]);
  }
  return rep;
}

RateFit fit_rate(const std::vector<double>& times, const std::vector<double>& errors,
                 double window_lo, double window_hi, RateCorrection correction, double p) {
  if (times.size() != errors.size()) {
    throw Error(ErrorCode::MismatchedRuns, "fit_rate: " + std::to_string(times.size()) + " times vs " +
                                               std::to_string(errors.size()) + " errors");
  }
  if (std::isnan(p) || p < 1.0) {
    throw Error(ErrorCode::BadP, "p must be >= 1 or inf, got " + std::to_string(p));
  }
  std::vector<double> lt;
  std::vector<double> le;
  for (size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (t < window_lo || t > window_hi) continue;
    if (!(t > 0.0)) {
      throw Error(ErrorCode::NonpositiveTime, "fit window contains t = " + std::to_string(t));
    }
    double e = errors[i];
    if (!(e > 0.0) || !std::isfinite(e)) {
      throw Error(ErrorCode::NonpositiveError, "fit_rate needs positive errors, got " + std::to_string(e) +
                                                   " at t = " + std::to_string(t));
    }
    if (correction == RateCorrection::SqrtLog) {
      const double inv_p = (p == kPInf) ? 0.0 : 1.0 / p;
      e /= std::pow(std::log(2.0 + t), 0.5 * (1.0 + inv_p));
    }
    lt.push_back(std::log(t));
    le.push_back(std::log(e));
  }
  if (lt.size() < 5) {
    throw Error(ErrorCode::TooFewPoints, "rate fit needs >= 5 samples in window, got " +
                                             std::to_string(lt.size()));
  }
  const size_t n = lt.size();
  double mt = 0.0;
  double me = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mt += lt[i];
    me += le[i];
  }
  mt /= static_cast<double>(n);
  me /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (lt[i] - mt) * (lt[i] - mt);
    sxy += (lt[i] - mt) * (le[i] - me);
  }
  if (!(sxx > 0.0)) {
    throw Error(ErrorCode::WindowTooShort, "all fit samples share one time");
  }
  RateFit fit;
  fit.exponent = sxy / sxx;
  fit.log_constant = me - fit.exponent * mt;
  double ss = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double res = le[i] - (fit.log_constant + fit.exponent * lt[i]);
    ss += res * res;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(n));
  fit.window_lo = window_lo;
  fit.window_hi = window_hi;
  fit.correction = correction;
  return fit;
}

double gn_diagnostic(const FieldState& state, const RiemannData& r, double p) {
  require_grid_match(state);
  if (std::isnan(p) || p < 1.0) {
    throw Error(ErrorCode::BadP, "p must be >= 1 or inf, got " + std::to_string(p));
  }
  const double inv_p = (p == kPInf) ? 0.0 : 1.0 / p;
  const double a = 0.5 * (1.0 - inv_p);
  const double num = error_to_viscous(state, r, p);
  const double e1 = error_to_viscous(state, r, 1.0);
  const double slope = max_abs(derivative(state)) + max_abs(viscous_dx_on_grid(state, r));
  const double denom = std::pow(slope, a) * std::pow(e1, 1.0 - a);
  if (!(denom > 1e-300)) {
    return 0.0;  // u == w: report 0 rather than raise DegenerateDenominator
  }
  return num / denom;
}

}  // namespace nlcd
