#pragma once

#include <vector>

#include "nlcd/field.hpp"
#include "nlcd/nonlocal_operator.hpp"

namespace nlcd {

enum class Integrator { SspRk2, SspRk3 };

// EngquistOsher is the production flux. NonconservativeDownwind replaces it
// with u_i times the one-sided difference taken from the wrong side of the
// characteristic, a product form that neither telescopes nor damps; it feeds
// oscillations instead of absorbing them and exists only so the verification
// suite can prove it would catch such a scheme. (A central difference is not
// used for this: the nonlocal term damps its wiggles on expansive data, so it
// never trips a property check here.)
enum class FluxKind { EngquistOsher, NonconservativeDownwind };

struct SolverConfig {
  double epsilon = 0.0;      // viscosity, >= 0
  double cfl = 0.3;          // fraction of the stability bound, in (0, 1]
  double t_end = 1.0;
  std::vector<double> snapshot_times;  // strictly increasing, within [0, t_end]
  Integrator integrator = Integrator::SspRk2;
  FluxKind flux = FluxKind::EngquistOsher;
  ConvPath conv_path = ConvPath::Auto;
};

void validate(const SolverConfig& config);

struct StepDiagnostics {
  double time = 0.0;              // time reached after the step
  double dt = 0.0;
  double max_abs_u = 0.0;
  double min_one_sided_diff = 0.0;  // min over forward differences incl. far-field edges
};

struct Trajectory {
  FieldState initial;
  std::vector<FieldState> snapshots;  // one per requested snapshot time, in order
  std::vector<StepDiagnostics> steps;
};

// Engquist-Osher divergence of u^2/2 (or the mutated downwind form), with the
// far-field constants as ghost values. On monotone data the EO sum telescopes:
// h * sum flux_div = f(u_plus) - f(u_minus) exactly when the edge nodes sit at
// the far-field values.
std::vector<double> flux_divergence(const FieldState& state, FluxKind flux = FluxKind::EngquistOsher);

// Right-hand side eps u_xx + L u - (u^2/2)_x.
std::vector<double> rhs(const NonlocalOp& op, const FieldState& state, const SolverConfig& config);

// cfl * min(h / max|u|, 1/2, h^2 / (2 eps)); the 1/2 is the relaxation bound
// of the unit-mass difference form, the h^2 term drops out when eps = 0.
double stable_dt(const FieldState& state, const SolverConfig& config);

// Advances to t_end with SSP time stepping, landing on each snapshot time
// exactly (dt is clipped, never extended). Throws BlowUp on non-finite or
// runaway values and FanHitBoundary when the fan would reach within 5h of an
// edge by t_end.
Trajectory integrate(const NonlocalOp& op, const FieldState& initial, const SolverConfig& config);

}  // namespace nlcd
