#pragma once

#include <string>
#include <vector>

#include "nlcd/field.hpp"
#include "nlcd/metrics.hpp"
#include "nlcd/nonlocal_operator.hpp"
#include "nlcd/references.hpp"
#include "nlcd/solver.hpp"

namespace nlcd {

// Uniform verdict record: passed == (measured <= bound + tolerance). Checks
// whose natural sense is "at least" are stored negated; context says so.
struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double bound = 0.0;
  double tolerance = 0.0;
  std::string context;
};

CheckResult make_check(std::string name, double measured, double bound, double tolerance,
                       std::string context);

// Overshoot beyond [min u0, max u0] (far-field included), max over snapshots.
CheckResult check_comparison(const Trajectory& traj);

// Worst one-sided decrease u_{i+1} - u_i (far-field edges included), in value
// units, max over snapshots. Non-decreasing profiles keep it above -1e-8.
CheckResult check_monotonicity(const Trajectory& traj);

// Interior total variation stays at u_plus - u_minus, relative 1e-6, at every
// snapshot. Needs a domain wide enough that the edges stay pinned.
CheckResult check_conservation(const Trajectory& traj);

// sup over snapshots with t >= 1 of ||u_x(t)||_p t^{1-1/p} / ||u_{0,x}||_1^{1/p};
// bound 1, tolerance 0.05.
CheckResult check_derivative_decay(const Trajectory& traj, double p);

// Rate toward the rarefaction wave in L^p over [window_lo, window_hi]:
//  - calibrated bound: C fixed at the earliest window snapshot, later
//    errors must stay under C t^{-(1-1/p)/2} [log(2+t)]^{(1+1/p)/2} (+10%);
//  - fitted exponent of the sqrt-log-corrected error <= -(1-1/p)/2 + 0.05.
// Needs >= 5 window snapshots spanning >= 1.5 decades, else WindowTooShort.
std::vector<CheckResult> check_main_rate(const Trajectory& traj, const RiemannData& r, double p,
                                         double window_lo, double window_hi);

// ||u(t) - w(t)||_1 / log(2+t) non-increasing for snapshots past window_lo,
// 10% slack per consecutive hop (the p=1 face of the rate lemma).
CheckResult check_l1_log_bound(const Trajectory& traj, const RiemannData& r, double window_lo);

// L1 distance between two runs never exceeds the initial distance (tolerance
// 1e-8 relative to it) and is non-increasing across consecutive snapshots.
std::vector<CheckResult> check_contraction(const Trajectory& a, const Trajectory& b);

// Discrete kernel sanity: mirror symmetry of weights and tails, vanishing
// first moment (in units of the spacing).
CheckResult check_kernel_symmetry(const DiscreteKernel& kernel);

// Randomized structural identities of L over compactly supported fields:
// h sum L(phi) equals the truncated-tail leak -(tail_l + tail_r) h sum phi
// exactly, and the Kato signed sum is <= 0.
CheckResult check_kato_identity(const NonlocalOp& op, unsigned seed, int draws);

// Jensen inequality L g(phi) >= g'(phi) L phi for g in {s^2, smooth |s|, (s^-)^2}.
CheckResult check_convexity(const NonlocalOp& op, unsigned seed, int draws);

// Convolution vs elliptic-solve realizations of L on one state (exponential
// kernel only): relative L-inf discrepancy against the given tolerance.
CheckResult check_cross_validation(const NonlocalOp& op, const FieldState& state, double tol_rel);

// Direct vs FFT convolution path agreement on one state.
CheckResult check_conv_paths(const NonlocalOp& op, const FieldState& state);

// Closed-form viscous-profile derivatives vs central differences of the
// profile itself, relative to the peak slope, over a probe set per time.
CheckResult check_reference_gradients(const RiemannData& r, const std::vector<double>& times);

// Vanishing-viscosity distances d(eps) at fixed time over a fixed window,
// epsilons strictly decreasing; produces monotone-decrease and
// consecutive-ratio (>= 1.8) checks over the positive-eps entries.
std::vector<CheckResult> eps_limit_checks(const std::vector<double>& epsilons,
                                          const std::vector<double>& distances);

}  // namespace nlcd
