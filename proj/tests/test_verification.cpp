#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include <nlcd/experiments.hpp>
#include <nlcd/field.hpp>
#include <nlcd/kernels.hpp>
#include <nlcd/metrics.hpp>
#include <nlcd/nonlocal_operator.hpp>
#include <nlcd/references.hpp>
#include <nlcd/solver.hpp>
#include <nlcd/verification.hpp>

using namespace nlcd;

namespace {

// Small explicit-grid problem shared by the property and mutation cases.
json small_config() {
  json cfg = default_config();
  cfg["grid"]["mode"] = "explicit";
  cfg["grid"]["left"] = -30.0;
  cfg["grid"]["right"] = 30.0;
  cfg["grid"]["n"] = 301;  // h = 0.2
  cfg["profile"]["delta"] = 0.1;
  cfg["solver"]["t_end"] = 3.0;
  cfg["solver"]["snapshots"] = {1.0, 2.0, 3.0};
  return cfg;
}

FieldState viscous_sample(const Grid1D& grid, const RiemannData& r, double t) {
  FieldState s;
  s.grid = grid;
  s.u_minus = r.u_minus;
  s.u_plus = r.u_plus;
  s.time = t;
  s.values.resize(static_cast<size_t>(grid.n));
  for (int i = 0; i < grid.n; ++i) {
    s.values[static_cast<size_t>(i)] = viscous_profile(r, grid.x(i), t);
  }
  return s;
}

void add_tent(FieldState& s, double c, double height) {
  for (int i = 0; i < s.grid.n; ++i) {
    const double d = std::abs(s.grid.x(i) - c);
    if (d < 1.0) s.values[static_cast<size_t>(i)] += height * (1.0 - d);
  }
}

bool found_failed(const std::vector<CheckResult>& checks) {
  for (const CheckResult& c : checks) {
    if (!c.passed) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("make_check verdict arithmetic") {
  CHECK(make_check("x", 1.0, 1.0, 0.0, "").passed);
  CHECK(!make_check("x", 1.0 + 1e-9, 1.0, 0.0, "").passed);
  CHECK(make_check("x", 1.0 + 1e-9, 1.0, 1e-8, "").passed);
  CHECK(!make_check("x", std::numeric_limits<double>::quiet_NaN(), 1.0, 1.0, "").passed);
  const CheckResult r = make_check("named", 0.5, 1.0, 0.1, "why");
  CHECK(r.name == "named");
  CHECK(r.measured == 0.5);
  CHECK(r.bound == 1.0);
  CHECK(r.tolerance == 0.1);
  CHECK(r.context == "why");
}

TEST_CASE("healthy run passes the trajectory property checks") {
  const Problem p = build_problem(small_config());
  const Trajectory traj = run_problem(p);

  CHECK(check_comparison(traj).passed);
  CHECK(check_monotonicity(traj).passed);
  CHECK(check_conservation(traj).passed);
  for (double pp : {1.0, 2.0, kPInf}) {
    const CheckResult c = check_derivative_decay(traj, pp);
    CHECK(c.passed);
    CHECK(c.measured <= 1.05);
  }
}

TEST_CASE("each mutation trips at least one named check") {
  SUBCASE("rotated kernel breaks mirror symmetry") {
    const Problem p = build_problem(small_config(), Mutation::Kernel);
    const NonlocalOp op = make_operator(p);
    const CheckResult c = check_kernel_symmetry(op.kernel());
    CHECK(!c.passed);
    CHECK(c.measured > 1e-3);
  }

  SUBCASE("profile dip breaks monotonicity from t = 0") {
    const Problem p = build_problem(small_config(), Mutation::Profile);
    const Trajectory traj = run_problem(p);
    CHECK(!check_monotonicity(traj).passed);
  }

  SUBCASE("downwind flux corrupts the evolved run") {
    const Problem p = build_problem(small_config(), Mutation::Flux);
    const Trajectory traj = run_problem(p);
    std::vector<CheckResult> checks = {check_comparison(traj), check_monotonicity(traj),
                                       check_conservation(traj)};
    CHECK(found_failed(checks));
  }
}

TEST_CASE("L1 contraction between two initial ramps") {
  json cfg = small_config();
  cfg["solver"]["t_end"] = 2.0;
  cfg["solver"]["snapshots"] = {1.0, 2.0};
  cfg["profile"]["delta"] = 1.0;
  const Trajectory a = run_problem(build_problem(cfg));
  cfg["profile"]["delta"] = 2.0;
  const Trajectory b = run_problem(build_problem(cfg));

  const std::vector<CheckResult> checks = check_contraction(a, b);
  REQUIRE(checks.size() == 2);
  CHECK(checks[0].name == "contraction");
  CHECK(checks[0].passed);
  CHECK(checks[1].name == "contraction_monotone");
  CHECK(checks[1].passed);

  SUBCASE("mismatched pairs are rejected") {
    Trajectory shorter = b;
    shorter.snapshots.pop_back();
    CHECK_THROWS_AS(check_contraction(a, shorter), Error);
    Trajectory other_field = b;
    other_field.initial.u_plus = 2.0;
    CHECK_THROWS_AS(check_contraction(a, other_field), Error);
  }
}

TEST_CASE("kernel symmetry, kato identity, and convexity on a clean operator") {
  const Grid1D grid = make_grid(-60.0, 60.0, 601);  // h = 0.2, K well under n/4
  const NonlocalOp op(grid, make_exponential_kernel(1.0), 1e-12);

  CHECK(check_kernel_symmetry(op.kernel()).passed);

  const CheckResult kato = check_kato_identity(op, 20260817u, 50);
  CHECK(kato.passed);
  CHECK(kato.measured <= 1e-12);

  const CheckResult conv = check_convexity(op, 20260817u, 25);
  CHECK(conv.passed);

  CHECK_THROWS_AS(check_kato_identity(op, 1u, 0), Error);
  CHECK_THROWS_AS(check_convexity(op, 1u, 0), Error);
}

TEST_CASE("cross-validation and convolution-path agreement") {
  const RiemannData r(-1.0, 1.0);
  const Grid1D grid = make_grid(-60.0, 60.0, 1201);  // h = 0.1
  const FieldState probe = viscous_sample(grid, r, 4.0);

  const NonlocalOp op(grid, make_exponential_kernel(1.0), 1e-12);
  const CheckResult cv = check_cross_validation(op, probe, 4e-3);
  CHECK(cv.passed);

  const CheckResult paths = check_conv_paths(op, probe);
  CHECK(paths.passed);
  CHECK(paths.measured <= 1e-12);

  SUBCASE("non-exponential kernels cannot cross-validate") {
    const NonlocalOp gauss(grid, make_gaussian_kernel(1.0), 1e-12);
    CHECK_THROWS_AS(check_cross_validation(gauss, probe, 1e-3), Error);
  }

  SUBCASE("an operator built from bare weights has no spec to validate against") {
    const NonlocalOp bare(grid, discretize_kernel(make_exponential_kernel(1.0), grid.h(), 1e-12));
    CHECK_THROWS_AS(check_cross_validation(bare, probe, 1e-3), Error);
  }
}

TEST_CASE("reference gradient audit passes on the closed forms") {
  const RiemannData r(-1.0, 1.0);
  const CheckResult c = check_reference_gradients(r, {1.0, 10.0, 100.0});
  CHECK(c.passed);
  CHECK(c.measured <= 1e-6);
  CHECK_THROWS_AS(check_reference_gradients(r, {}), Error);
  CHECK_THROWS_AS(check_reference_gradients(r, {0.0}), Error);
}

TEST_CASE("eps-limit checks on planted distance sequences") {
  SUBCASE("clean halving passes both checks") {
    const std::vector<CheckResult> out =
        eps_limit_checks({0.1, 0.05, 0.025, 0.0}, {0.08, 0.04, 0.02, 1e-5});
    REQUIRE(out.size() == 2);
    CHECK(out[0].name == "eps_limit_monotone");
    CHECK(out[0].passed);
    CHECK(out[1].name == "eps_limit_order");
    CHECK(out[1].passed);
  }

  SUBCASE("a rise in d(eps) fails the monotone check") {
    const std::vector<CheckResult> out =
        eps_limit_checks({0.1, 0.05, 0.025}, {0.04, 0.05, 0.03});
    CHECK(!out[0].passed);
  }

  SUBCASE("sublinear shrink fails the order check") {
    const std::vector<CheckResult> out =
        eps_limit_checks({0.1, 0.05, 0.025}, {0.08, 0.06, 0.045});
    CHECK(out[0].passed);
    CHECK(!out[1].passed);
  }

  SUBCASE("degenerate inputs throw") {
    CHECK_THROWS_AS(eps_limit_checks({0.1, 0.05}, {0.08}), Error);
    CHECK_THROWS_AS(eps_limit_checks({0.05, 0.1}, {0.08, 0.04}), Error);
    CHECK_THROWS_AS(eps_limit_checks({0.1, 0.05}, {0.08, 0.0}), Error);
    CHECK_THROWS_AS(eps_limit_checks({0.1, 0.0}, {0.08, 1e-5}), Error);
  }
}

TEST_CASE("rate window guards") {
  const RiemannData r(-1.0, 1.0);
  const Grid1D grid = make_grid(-40.0, 40.0, 401);
  auto rare_sample = [&](double t) {
    FieldState s;
    s.grid = grid;
    s.u_minus = -1.0;
    s.u_plus = 1.0;
    s.time = t;
    s.values.resize(static_cast<size_t>(grid.n));
    for (int i = 0; i < grid.n; ++i) {
      s.values[static_cast<size_t>(i)] = rarefaction(r, grid.x(i), t);
    }
    add_tent(s, 25.0, 0.05);
    return s;
  };

  Trajectory traj;
  for (double t : {2.0, 3.0, 4.0}) traj.snapshots.push_back(rare_sample(t));
  CHECK_THROWS_AS(check_main_rate(traj, r, 1.0, 1.0, 10.0), Error);  // < 5 snapshots

  traj.snapshots.clear();
  for (double t : {1.0, 1.5, 2.0, 2.5, 3.0}) traj.snapshots.push_back(rare_sample(t));
  CHECK_THROWS_AS(check_main_rate(traj, r, 1.0, 0.5, 5.0), Error);  // < 1.5 decades
}

TEST_CASE("l1 log-bound trend on planted error series") {
  const RiemannData r(-1.0, 1.0);
  const Grid1D grid = make_grid(-40.0, 40.0, 801);  // h = 0.1

  // Plant u - w as a unit tent whose mass follows the given law of t.
  auto make_traj = [&](auto mass_of_t) {
    Trajectory traj;
    for (double t : {2.0, 4.0, 8.0, 16.0}) {
      FieldState s = viscous_sample(grid, r, t);
      add_tent(s, 25.0, mass_of_t(t));
      traj.snapshots.push_back(s);
    }
    return traj;
  };

  SUBCASE("error growing exactly like log(2+t) keeps the ratio flat") {
    const Trajectory traj =
        make_traj([](double t) { return 0.01 * std::log(2.0 + t) / std::log(4.0); });
    const CheckResult c = check_l1_log_bound(traj, r, 1.0);
    CHECK(c.passed);
    CHECK(std::abs(c.measured) <= 1e-6);
  }

  SUBCASE("error growing like log^2 fails the trend") {
    const Trajectory traj = make_traj(
        [](double t) { return 0.01 * std::log(2.0 + t) * std::log(2.0 + t); });
    CHECK(!check_l1_log_bound(traj, r, 1.0).passed);
  }

  SUBCASE("too few snapshots past the window throw") {
    const Trajectory traj = make_traj([](double) { return 0.01; });
    CHECK_THROWS_AS(check_l1_log_bound(traj, r, 12.0), Error);
  }

  SUBCASE("an exact viscous sample makes the ratio degenerate") {
    Trajectory traj;
    for (double t : {2.0, 4.0}) traj.snapshots.push_back(viscous_sample(grid, r, t));
    CHECK_THROWS_AS(check_l1_log_bound(traj, r, 1.0), Error);
  }
}

TEST_CASE("derivative decay needs a snapshot past t = 1") {
  const Problem p = [] {
    json cfg = small_config();
    cfg["solver"]["t_end"] = 0.5;
    cfg["solver"]["snapshots"] = {0.5};
    return build_problem(cfg);
  }();
  const Trajectory traj = run_problem(p);
  CHECK_THROWS_AS(check_derivative_decay(traj, 1.0), Error);
}
