#include "nlcd/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlcd/errors.hpp"

namespace nlcd {

namespace {

inline double flux_plus(double u) { return u > 0.0 ? 0.5 * u * u : 0.0; }
inline double flux_minus(double u) { return u < 0.0 ? 0.5 * u * u : 0.0; }

// Upwind interface flux for f(u) = u^2/2; monotone in (up, -down).
inline double eo_flux(double left, double right) { return flux_plus(left) + flux_minus(right); }

void rhs_into(const NonlocalOp& op, const Grid1D& grid, const std::vector<double>& v, double u_minus,
              double u_plus, const SolverConfig& config, std::vector<double>& lbuf, std::vector<double>& out) {
  const int n = grid.n;
  const double h = grid.h();
  const double inv_h = 1.0 / h;
  const double eps_h2 = config.epsilon / (h * h);
  op.apply_raw(v.data(), u_minus, u_plus, lbuf.data(), config.conv_path);
  if (config.flux == FluxKind::NonconservativeDownwind) {
    for (int i = 0; i < n; ++i) {
      const double vm = (i > 0) ? v[i - 1] : u_minus;
      const double vp = (i + 1 < n) ? v[i + 1] : u_plus;
      const double d = (v[i] > 0.0) ? (vp - v[i]) : (v[i] - vm);
      out[i] = eps_h2 * (vp - 2.0 * v[i] + vm) + lbuf[i] - v[i] * d * inv_h;
    }
    return;
  }
  double left_flux = eo_flux(u_minus, v[0]);
  for (int i = 0; i < n; ++i) {
    const double vm = (i > 0) ? v[i - 1] : u_minus;
    const double vp = (i + 1 < n) ? v[i + 1] : u_plus;
    const double right_flux = eo_flux(v[i], vp);
    out[i] = eps_h2 * (vp - 2.0 * v[i] + vm) + lbuf[i] - (right_flux - left_flux) * inv_h;
    left_flux = right_flux;
  }
}

double max_abs_with_farfield(const std::vector<double>& v, double u_minus, double u_plus) {
  double m = std::max(std::abs(u_minus), std::abs(u_plus));
  for (double x : v) {
    // std::max drops NaN (the compare is false), which would hide a
    // contaminated field from the non-finite blow-up check; propagate it.
    if (std::isnan(x)) return x;
    m = std::max(m, std::abs(x));
  }
  return m;
}

double min_one_sided_diff(const std::vector<double>& v, double u_minus, double u_plus, double h) {
  double m = std::numeric_limits<double>::infinity();
  double prev = u_minus;
  for (double x : v) {
    m = std::min(m, (x - prev) / h);
    prev = x;
  }
  return std::min(m, (u_plus - prev) / h);
}

}  // namespace

void validate(const SolverConfig& config) {
  if (!(config.epsilon >= 0.0) || !std::isfinite(config.epsilon)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must be finite and >= 0, got " +
                                                std::to_string(config.epsilon));
  }
  if (!(config.cfl > 0.0) || config.cfl > 1.0) {
    throw Error(ErrorCode::InvalidArgument, "cfl must lie in (0, 1], got " + std::to_string(config.cfl));
  }
  if (!(config.t_end > 0.0) || !std::isfinite(config.t_end)) {
    throw Error(ErrorCode::InvalidArgument, "t_end must be finite and > 0, got " +
                                                std::to_string(config.t_end));
  }
  double prev = -1.0;
  for (double t : config.snapshot_times) {
    if (!std::isfinite(t) || t < 0.0 || t > config.t_end) {
      throw Error(ErrorCode::InvalidArgument, "snapshot time " + std::to_string(t) +
                                                  " outside [0, t_end]");
    }
    if (t <= prev) {
      throw Error(ErrorCode::InvalidArgument, "snapshot times must be strictly increasing");
    }
    prev = t;
  }
}

std::vector<double> flux_divergence(const FieldState& state, FluxKind flux) {
  const int n = state.grid.n;
  if (state.values.size() != static_cast<size_t>(n)) {
    throw Error(ErrorCode::GridMismatch, "flux_divergence: values do not match the grid");
  }
  const double h = state.grid.h();
  std::vector<double> out(static_cast<size_t>(n));
  const std::vector<double>& v = state.values;
  if (flux == FluxKind::NonconservativeDownwind) {
    for (int i = 0; i < n; ++i) {
      const double vm = (i > 0) ? v[i - 1] : state.u_minus;
      const double vp = (i + 1 < n) ? v[i + 1] : state.u_plus;
      const double d = (v[i] > 0.0) ? (vp - v[i]) : (v[i] - vm);
      out[i] = v[i] * d / h;
    }
    return out;
  }
  double left_flux = eo_flux(state.u_minus, v[0]);
  for (int i = 0; i < n; ++i) {
    const double vp = (i + 1 < n) ? v[i + 1] : state.u_plus;
    const double right_flux = eo_flux(v[i], vp);
    out[i] = (right_flux - left_flux) / h;
    left_flux = right_flux;
  }
  return out;
}

std::vector<double> rhs(const NonlocalOp& op, const FieldState& state, const SolverConfig& config) {
  if (!(op.grid() == state.grid)) {
    throw Error(ErrorCode::GridMismatch, "operator and state live on different grids");
  }
  std::vector<double> lbuf(state.values.size());
  std::vector<double> out(state.values.size());
  rhs_into(op, state.grid, state.values, state.u_minus, state.u_plus, config, lbuf, out);
  return out;
}

double stable_dt(const FieldState& state, const SolverConfig& config) {
  const double h = state.grid.h();
  const double maxu = std::max(max_abs_with_farfield(state.values, state.u_minus, state.u_plus), 1e-12);
  double dt = std::min(h / maxu, 0.5);
  if (config.epsilon > 0.0) {
    dt = std::min(dt, h * h / (2.0 * config.epsilon));
  }
  return config.cfl * dt;
}

Trajectory integrate(const NonlocalOp& op, const FieldState& initial, const SolverConfig& config) {
  validate(config);
  if (!(op.grid() == initial.grid)) {
    throw Error(ErrorCode::GridMismatch, "operator and initial state live on different grids");
  }
  if (initial.values.size() != static_cast<size_t>(initial.grid.n)) {
    throw Error(ErrorCode::GridMismatch, "initial values do not match the grid");
  }
  if (initial.time != 0.0) {
    throw Error(ErrorCode::InvalidArgument, "runs start at t = 0, got initial time " +
                                                std::to_string(initial.time));
  }
  const Grid1D grid = initial.grid;
  const double h = grid.h();
  // The fan edges move at speed u_minus (left) and u_plus (right); refuse runs
  // where they would come within 5h of the boundary by t_end.
  const double fan_left = initial.u_minus * config.t_end;
  const double fan_right = initial.u_plus * config.t_end;
  if (fan_left - grid.left < 5.0 * h || grid.right - fan_right < 5.0 * h) {
    throw Error(ErrorCode::FanHitBoundary,
                "rarefaction fan reaches within 5 spacings of the boundary by t_end = " +
                    std::to_string(config.t_end) + "; enlarge the domain to at least [" +
                    std::to_string(fan_left) + " - margin, " + std::to_string(fan_right) + " + margin]");
  }

  Trajectory traj;
  traj.initial = initial;
  size_t snap_idx = 0;
  if (!config.snapshot_times.empty() && config.snapshot_times[0] == 0.0) {
    traj.snapshots.push_back(initial);
    snap_idx = 1;
  }

  FieldState state = initial;
  const size_t n = state.values.size();
  std::vector<double> lbuf(n);
  std::vector<double> rhsbuf(n);
  std::vector<double> stage1(n);
  std::vector<double> stage2(n);
  const double cap = 100.0 * std::max({std::abs(initial.u_minus), std::abs(initial.u_plus), 1.0});
  const double t_tol = 1e-12 * std::max(1.0, config.t_end);
  const long kMaxSteps = 20000000;
  long steps = 0;
  double t = 0.0;

  auto eval = [&](const std::vector<double>& v, std::vector<double>& out) {
    rhs_into(op, grid, v, state.u_minus, state.u_plus, config, lbuf, out);
  };

  while (t < config.t_end - t_tol) {
    const double dt_stable = stable_dt(state, config);
    const double target = (snap_idx < config.snapshot_times.size()) ? config.snapshot_times[snap_idx]
                                                                    : config.t_end;
    double dt = std::min(dt_stable, target - t);
    const bool land = (t + dt >= target - t_tol);
    if (land) dt = target - t;

    eval(state.values, rhsbuf);
    for (size_t i = 0; i < n; ++i) stage1[i] = state.values[i] + dt * rhsbuf[i];
    if (config.integrator == Integrator::SspRk2) {
      eval(stage1, rhsbuf);
      for (size_t i = 0; i < n; ++i) {
        state.values[i] = 0.5 * (state.values[i] + stage1[i] + dt * rhsbuf[i]);
      }
    } else {
      eval(stage1, rhsbuf);
      for (size_t i = 0; i < n; ++i) {
        stage2[i] = 0.75 * state.values[i] + 0.25 * (stage1[i] + dt * rhsbuf[i]);
      }
      eval(stage2, rhsbuf);
      for (size_t i = 0; i < n; ++i) {
        state.values[i] = (state.values[i] + 2.0 * (stage2[i] + dt * rhsbuf[i])) / 3.0;
      }
    }

    t = land ? target : t + dt;
    state.time = t;

    StepDiagnostics diag;
    diag.time = t;
    diag.dt = dt;
    diag.max_abs_u = max_abs_with_farfield(state.values, state.u_minus, state.u_plus);
    diag.min_one_sided_diff = min_one_sided_diff(state.values, state.u_minus, state.u_plus, h);
    traj.steps.push_back(diag);

    if (!std::isfinite(diag.max_abs_u) || diag.max_abs_u > cap) {
      throw Error(ErrorCode::BlowUp, "solution reached |u| = " + std::to_string(diag.max_abs_u) +
                                         " at t = " + std::to_string(t));
    }
    if (land && snap_idx < config.snapshot_times.size() && target == config.snapshot_times[snap_idx]) {
      traj.snapshots.push_back(state);
      ++snap_idx;
    }
    if (++steps > kMaxSteps) {
      throw Error(ErrorCode::BlowUp, "step limit exceeded at t = " + std::to_string(t));
    }
  }
  return traj;
}

}  // namespace nlcd
