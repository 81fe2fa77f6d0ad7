#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include <nlcd/field.hpp>
#include <nlcd/metrics.hpp>
#include <nlcd/references.hpp>

using namespace nlcd;

namespace {

// Tent of the given height and unit half-width centered at c; kinks land on
// nodes when h divides 1, so the trapezoid rule integrates it exactly.
void add_tent(FieldState& s, double c, double height) {
  for (int i = 0; i < s.grid.n; ++i) {
    const double d = std::abs(s.grid.x(i) - c);
    if (d < 1.0) s.values[static_cast<size_t>(i)] += height * (1.0 - d);
  }
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    out[static_cast<size_t>(i)] =
        lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  }
  return out;
}

}  // namespace

TEST_CASE("lp_norm quadrature on canonical shapes") {
  SUBCASE("indicator of [0,1]: trapezoid gives exactly 1 + h") {
    const Grid1D grid = make_grid(-2.0, 2.0, 401);  // h = 0.01
    std::vector<double> v(401, 0.0);
    for (int i = 200; i <= 300; ++i) v[static_cast<size_t>(i)] = 1.0;
    CHECK(lp_norm(v, grid, 1.0) == doctest::Approx(1.0 + grid.h()).epsilon(1e-13));
  }

  SUBCASE("p = inf is the max of absolute values") {
    const Grid1D grid = make_grid(0.0, 1.5, 16);
    std::vector<double> v(16, 0.25);
    v[3] = 3.0;
    v[9] = -4.0;
    CHECK(lp_norm(v, grid, kPInf) == 4.0);
  }

  SUBCASE("tent in L2: sqrt(2/3) to quadrature accuracy") {
    const Grid1D grid = make_grid(-2.0, 2.0, 4001);  // h = 0.001
    std::vector<double> v(4001, 0.0);
    for (int i = 0; i < grid.n; ++i) {
      v[static_cast<size_t>(i)] = std::max(0.0, 1.0 - std::abs(grid.x(i)));
    }
    CHECK(lp_norm(v, grid, 2.0) == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-5));
  }

  SUBCASE("constants integrate exactly") {
    const Grid1D grid = make_grid(-2.0, 2.0, 101);
    const std::vector<double> v(101, 2.0);
    CHECK(lp_norm(v, grid, 1.0) == doctest::Approx(8.0).epsilon(1e-14));
  }

  SUBCASE("domain errors") {
    const Grid1D grid = make_grid(0.0, 1.5, 16);
    const std::vector<double> v(16, 1.0);
    CHECK_THROWS_AS(lp_norm(v, grid, 0.5), Error);
    CHECK_THROWS_AS(lp_norm(std::vector<double>(15, 1.0), grid, 1.0), Error);
  }
}

TEST_CASE("errors against the reference profiles") {
  const RiemannData r(-1.0, 1.0);
  const Grid1D grid = make_grid(-30.0, 30.0, 1201);  // h = 0.05

  FieldState s;
  s.grid = grid;
  s.u_minus = -1.0;
  s.u_plus = 1.0;
  s.time = 2.0;
  s.values.resize(1201);

  SUBCASE("sampling the rarefaction itself gives zero error") {
    for (int i = 0; i < grid.n; ++i) {
      s.values[static_cast<size_t>(i)] = rarefaction(r, grid.x(i), s.time);
    }
    CHECK(error_to_rarefaction(s, r, 1.0) == 0.0);
    CHECK(error_to_rarefaction(s, r, kPInf) == 0.0);
  }

  SUBCASE("a unit-shape bump away from the fan is measured exactly") {
    for (int i = 0; i < grid.n; ++i) {
      s.values[static_cast<size_t>(i)] = rarefaction(r, grid.x(i), s.time);
    }
    add_tent(s, 10.0, 0.1);  // mass 0.1, far from the fan edge at x = 2
    CHECK(error_to_rarefaction(s, r, 1.0) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(error_to_rarefaction(s, r, kPInf) == doctest::Approx(0.1).epsilon(1e-12));
  }

  SUBCASE("sampling the viscous profile gives zero error") {
    for (int i = 0; i < grid.n; ++i) {
      s.values[static_cast<size_t>(i)] = viscous_profile(r, grid.x(i), s.time);
    }
    CHECK(error_to_viscous(s, r, 1.0) == 0.0);
  }

  SUBCASE("comparisons need t > 0") {
    std::fill(s.values.begin(), s.values.end(), 0.0);
    s.time = 0.0;
    CHECK_THROWS_AS(error_to_rarefaction(s, r, 1.0), Error);
    CHECK_THROWS_AS(error_to_viscous(s, r, 1.0), Error);
  }
}

TEST_CASE("windowed L1 distance isolates the window") {
  const Grid1D grid = make_grid(-10.0, 10.0, 201);  // h = 0.1
  FieldState a;
  a.grid = grid;
  a.values.assign(201, 0.0);
  FieldState b = a;
  add_tent(b, 3.0, 0.2);  // mass 0.2 supported on [2, 4]

  CHECK(l1_distance_window(a, b, 0.0, 6.0) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(l1_distance_window(a, b, -6.0, 0.0) == 0.0);
  // Partial overlap: integral of the tent over [2.5, 3.5] is 0.15.
  CHECK(l1_distance_window(a, b, 2.5, 3.5) == doctest::Approx(0.15).epsilon(1e-12));

  CHECK_THROWS_AS(l1_distance_window(a, b, 2.0, 2.0), Error);
  CHECK_THROWS_AS(l1_distance_window(a, b, 20.0, 30.0), Error);
  FieldState c;
  c.grid = make_grid(-10.0, 10.0, 101);
  c.values.assign(101, 0.0);
  CHECK_THROWS_AS(l1_distance_window(a, c, 0.0, 1.0), Error);
}

TEST_CASE("fit_rate recovers planted power laws") {
  const std::vector<double> times = log_spaced(1.0, 1000.0, 30);

  SUBCASE("pure power law, no correction") {
    std::vector<double> errs;
    for (double t : times) errs.push_back(3.0 * std::pow(t, -0.5));
    const RateFit fit = fit_rate(times, errs, 1.0, 1000.0, RateCorrection::None, 1.0);
    CHECK(fit.exponent == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(fit.log_constant == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(fit.residual <= 1e-12);
  }

  SUBCASE("sqrt-log correction strips the planted log factor (p = 2)") {
    std::vector<double> errs;
    for (double t : times) {
      errs.push_back(3.0 * std::pow(t, -0.5) * std::pow(std::log(2.0 + t), 0.75));
    }
    const RateFit fit = fit_rate(times, errs, 1.0, 1000.0, RateCorrection::SqrtLog, 2.0);
    CHECK(fit.exponent == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(fit.residual <= 1e-12);
  }

  SUBCASE("sqrt-log correction at p = inf uses exponent 1/2 on the log") {
    std::vector<double> errs;
    for (double t : times) {
      errs.push_back(0.7 * std::pow(t, -0.25) * std::sqrt(std::log(2.0 + t)));
    }
    const RateFit fit = fit_rate(times, errs, 1.0, 1000.0, RateCorrection::SqrtLog, kPInf);
    CHECK(fit.exponent == doctest::Approx(-0.25).epsilon(1e-12));
    CHECK(fit.residual <= 1e-12);
  }

  SUBCASE("random planted exponents round-trip") {
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> alpha(-2.0, 0.0);
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    for (int trial = 0; trial < 20; ++trial) {
      const double a = alpha(rng);
      const double c = scale(rng);
      std::vector<double> errs;
      for (double t : times) errs.push_back(c * std::pow(t, a));
      const RateFit fit = fit_rate(times, errs, 1.0, 1000.0, RateCorrection::None, 2.0);
      CHECK(std::abs(fit.exponent - a) <= 1e-9);
    }
  }

  SUBCASE("window trimming and degenerate inputs throw") {
    const std::vector<double> t4 = {1.0, 2.0, 3.0, 4.0};
    const std::vector<double> e4 = {1.0, 0.5, 0.4, 0.3};
    CHECK_THROWS_AS(fit_rate(t4, e4, 0.5, 5.0, RateCorrection::None, 1.0), Error);

    std::vector<double> bad = {1.0, 0.5, 0.0, 0.3, 0.2, 0.1};
    const std::vector<double> t6 = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
    CHECK_THROWS_AS(fit_rate(t6, bad, 0.5, 10.0, RateCorrection::None, 1.0), Error);

    const std::vector<double> same_t(6, 2.0);
    const std::vector<double> pos(6, 1.0);
    CHECK_THROWS_AS(fit_rate(same_t, pos, 0.5, 10.0, RateCorrection::None, 1.0), Error);

    CHECK_THROWS_AS(fit_rate(t6, pos, 0.5, 10.0, RateCorrection::None, 0.5), Error);
  }
}

TEST_CASE("Gagliardo-Nirenberg diagnostic") {
  const RiemannData r(-1.0, 1.0);
  const Grid1D grid = make_grid(-30.0, 30.0, 601);
  FieldState s;
  s.grid = grid;
  s.u_minus = -1.0;
  s.u_plus = 1.0;
  s.time = 2.0;
  s.values.resize(601);
  for (int i = 0; i < grid.n; ++i) {
    s.values[static_cast<size_t>(i)] = viscous_profile(r, grid.x(i), s.time);
  }

  SUBCASE("u == w is reported as 0, not a division error") {
    CHECK(gn_diagnostic(s, r, 2.0) == 0.0);
  }

  SUBCASE("p = 1 gives exactly 1 once the error is nonzero") {
    add_tent(s, 10.0, 0.05);
    CHECK(gn_diagnostic(s, r, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gn_diagnostic(s, r, 2.0) > 0.0);
  }
}

TEST_CASE("norm report mirrors the direct metric calls") {
  const RiemannData r(-1.0, 1.0);
  const Grid1D grid = make_grid(-30.0, 30.0, 601);
  FieldState s;
  s.grid = grid;
  s.u_minus = -1.0;
  s.u_plus = 1.0;
  s.time = 3.0;
  s.values.resize(601);
  for (int i = 0; i < grid.n; ++i) {
    s.values[static_cast<size_t>(i)] = viscous_profile(r, grid.x(i), s.time);
  }
  add_tent(s, 8.0, 0.02);

  const NormReport rep = make_norm_report(s, r);
  CHECK(rep.time == 3.0);
  const double ps[3] = {1.0, 2.0, kPInf};
  for (int k = 0; k < 3; ++k) {
    CHECK(rep.err_rarefaction[k] == error_to_rarefaction(s, r, ps[k]));
    CHECK(rep.err_viscous[k] == error_to_viscous(s, r, ps[k]));
    CHECK(rep.gn_ratio[k] == gn_diagnostic(s, r, ps[k]));
  }
  CHECK(rep.deriv_norm[0] == lp_norm(derivative(s), grid, 1.0));
}
