#include "nlcd/field.hpp"

#include <algorithm>
#include <cmath>

namespace nlcd {

Grid1D make_grid(double left, double right, int n) {
  if (!std::isfinite(left) || !std::isfinite(right) || left >= right)
    throw Error(ErrorCode::BadDomain, "grid needs left < right and finite bounds");
  if (n < 16) throw Error(ErrorCode::BadDomain, "grid needs at least 16 nodes");
  return Grid1D{left, right, n};
}

InitialProfile tanh_ramp(double delta, double center) {
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "tanh ramp needs delta > 0");
  if (!std::isfinite(center)) throw Error(ErrorCode::InvalidArgument, "ramp center must be finite");
  InitialProfile p;
  p.kind = ProfileKind::TanhRamp;
  p.delta = delta;
  p.center = center;
  return p;
}

InitialProfile piecewise_linear_ramp(double a, double center) {
  if (!(a > 0.0)) throw Error(ErrorCode::InvalidArgument, "linear ramp needs a > 0");
  if (!std::isfinite(center)) throw Error(ErrorCode::InvalidArgument, "ramp center must be finite");
  InitialProfile p;
  p.kind = ProfileKind::PiecewiseLinearRamp;
  p.a = a;
  p.center = center;
  return p;
}

InitialProfile custom_profile(std::vector<double> xs, std::vector<double> vals) {
  if (xs.size() != vals.size() || xs.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "custom profile needs >= 2 (x, u) samples");
  for (size_t i = 0; i + 1 < xs.size(); ++i)
    if (!(xs[i] < xs[i + 1]))
      throw Error(ErrorCode::InvalidArgument, "custom profile abscissae must increase");
  InitialProfile p;
  p.kind = ProfileKind::Custom;
  p.xs = std::move(xs);
  p.vals = std::move(vals);
  return p;
}

namespace {

double ramp_fraction(const InitialProfile& p, double x) {
  // 0 at -inf, 1 at +inf; profile value is u_minus + (u_plus - u_minus) * fraction.
  const double s = x - p.center;
  switch (p.kind) {
    case ProfileKind::TanhRamp:
      return 0.5 * (1.0 + std::tanh(s / p.delta));
    case ProfileKind::PiecewiseLinearRamp:
      return std::clamp(0.5 * (s / p.a + 1.0), 0.0, 1.0);
    case ProfileKind::Custom:
      return 0.0;  // handled separately
  }
  return 0.0;
}

double custom_value(const InitialProfile& p, double x) {
  if (x <= p.xs.front()) return p.vals.front();
  if (x >= p.xs.back()) return p.vals.back();
  auto it = std::upper_bound(p.xs.begin(), p.xs.end(), x);
  size_t hi = static_cast<size_t>(it - p.xs.begin());
  size_t lo = hi - 1;
  double w = (x - p.xs[lo]) / (p.xs[hi] - p.xs[lo]);
  return p.vals[lo] + w * (p.vals[hi] - p.vals[lo]);
}

// Integral of (u0 - u_minus) over (-inf, left]; mirrored for the right tail.
double tail_integral(const InitialProfile& p, double jump, double boundary, bool left) {
  double b = left ? boundary : -boundary;  // mirror-symmetric families
  switch (p.kind) {
    case ProfileKind::TanhRamp: {
      double z = 2.0 * b / p.delta;
      double log1pe = z < 30.0 ? std::log1p(std::exp(z)) : z;
      return 0.5 * jump * p.delta * log1pe;
    }
    case ProfileKind::PiecewiseLinearRamp: {
      if (b <= -p.a) return 0.0;
      double c = std::min(b, p.a) + p.a;
      return jump * c * c / (4.0 * p.a);
    }
    case ProfileKind::Custom:
      return 0.0;  // constant beyond the table once endpoints are pinned
  }
  return 0.0;
}

}  // namespace

FieldState sample_initial(const Grid1D& grid, double u_minus, double u_plus,
                          const InitialProfile& profile) {
  if (!(u_minus < u_plus))
    throw Error(ErrorCode::DegenerateRiemann, "needs u_minus < u_plus");
  double jump = u_plus - u_minus;

  constexpr double kTailTol = 1e-10;
  if (profile.kind == ProfileKind::Custom) {
    for (size_t i = 0; i + 1 < profile.vals.size(); ++i)
      if (profile.vals[i] > profile.vals[i + 1])
        throw Error(ErrorCode::NotMonotone, "custom profile values must be non-decreasing");
    if (std::abs(profile.vals.front() - u_minus) > kTailTol ||
        std::abs(profile.vals.back() - u_plus) > kTailTol)
      throw Error(ErrorCode::TailsTooFat, "custom profile endpoints must pin the far-field");
    if (profile.xs.front() < grid.left || profile.xs.back() > grid.right)
      throw Error(ErrorCode::TailsTooFat, "custom profile table extends beyond the grid");
  } else {
    double tl = tail_integral(profile, jump, grid.left - profile.center, true);
    double tr = tail_integral(profile, jump, grid.right - profile.center, false);
    if (tl > kTailTol || tr > kTailTol)
      throw Error(ErrorCode::TailsTooFat,
                  "initial profile tail mass beyond the grid exceeds 1e-10");
  }

  FieldState state;
  state.grid = grid;
  state.u_minus = u_minus;
  state.u_plus = u_plus;
  state.time = 0.0;
  state.values.resize(static_cast<size_t>(grid.n));
  for (int i = 0; i < grid.n; ++i) {
    double x = grid.x(i);
    state.values[static_cast<size_t>(i)] =
        profile.kind == ProfileKind::Custom
            ? custom_value(profile, x)
            : u_minus + jump * ramp_fraction(profile, x);
  }
  for (size_t i = 0; i + 1 < state.values.size(); ++i)
    if (state.values[i] > state.values[i + 1])
      throw Error(ErrorCode::NotMonotone, "sampled initial data is not non-decreasing");
  return state;
}

std::vector<double> derivative(const FieldState& state) {
  const auto& u = state.values;
  int n = state.grid.n;
  double inv2h = 0.5 / state.grid.h();
  std::vector<double> d(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    double um = i > 0 ? u[static_cast<size_t>(i - 1)] : state.u_minus;
    double up = i < n - 1 ? u[static_cast<size_t>(i + 1)] : state.u_plus;
    d[static_cast<size_t>(i)] = (up - um) * inv2h;
  }
  return d;
}

double total_variation(const FieldState& state) {
  double tv = 0.0;
  for (size_t i = 0; i + 1 < state.values.size(); ++i)
    tv += std::abs(state.values[i + 1] - state.values[i]);
  return tv;
}

}  // namespace nlcd
