#include "support/burgers_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "nlcd/errors.hpp"

namespace nlcd::testing {

namespace {

// Simpson integral of f over [a, b] with n panels (n even).
template <typename F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

struct PieceIntegrals {
  double offset;  // completed-square constant of this piece
  double mass;    // integral of exp(-s^2) over the rescaled y-range
  double mean;    // integral of (x - y)/t times the same weight
};

// One half-line piece of the Hopf-Cole integrals for a step initial datum:
// g(y) = (x - y)^2 / (4t) + u y / 2 over y in [lo, hi], rescaled about the
// Gaussian center y = x - u t with width 2 sqrt(t).
PieceIntegrals piece(double u, double x, double t, double lo, double hi) {
  const double width = 2.0 * std::sqrt(t);
  const double center = x - u * t;
  PieceIntegrals out;
  out.offset = 0.5 * u * x - 0.25 * u * u * t;
  double s_lo = std::isinf(lo) ? -12.0 : (lo - center) / width;
  double s_hi = std::isinf(hi) ? 12.0 : (hi - center) / width;
  s_lo = std::max(s_lo, -12.0);
  s_hi = std::min(s_hi, 12.0);
  if (s_lo >= s_hi) {
    out.mass = 0.0;
    out.mean = 0.0;
    return out;
  }
  out.mass = width * simpson([](double s) { return std::exp(-s * s); }, s_lo, s_hi, 8000);
  out.mean = width * simpson(
                         [&](double s) {
                           const double y = center + width * s;
                           return (x - y) / t * std::exp(-s * s);
                         },
                         s_lo, s_hi, 8000);
  return out;
}

}  // namespace

double hopf_cole_quadrature(double u_minus, double u_plus, double x, double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::NonpositiveTime, "quadrature oracle needs t > 0");
  const double inf = std::numeric_limits<double>::infinity();
  const PieceIntegrals left = piece(u_minus, x, t, -inf, 0.0);
  const PieceIntegrals right = piece(u_plus, x, t, 0.0, inf);

  // Weight both pieces relative to the smaller offset so the ratio is stable;
  // the far piece underflows to zero exactly when it is negligible.
  const double base = std::min(left.offset, right.offset);
  const double wl = std::exp(base - left.offset);
  const double wr = std::exp(base - right.offset);
  const double den = wl * left.mass + wr * right.mass;
  const double num = wl * left.mean + wr * right.mean;
  return num / den;
}

namespace {

// Conservative central divergence of w^2/2 with fixed far-field ghosts.
void advection_rhs(const std::vector<double>& w, double um, double up, double h,
                   std::vector<double>& out) {
  const size_t n = w.size();
  const double inv2h = 0.5 / h;
  auto f = [](double v) { return 0.5 * v * v; };
  for (size_t i = 0; i < n; ++i) {
    const double fp = f(i + 1 < n ? w[i + 1] : up);
    const double fm = f(i > 0 ? w[i - 1] : um);
    out[i] = -(fp - fm) * inv2h;
  }
}

void full_rhs(const std::vector<double>& w, double um, double up, double h,
              std::vector<double>& out) {
  advection_rhs(w, um, up, h, out);
  const size_t n = w.size();
  const double invh2 = 1.0 / (h * h);
  for (size_t i = 0; i < n; ++i) {
    const double wp = i + 1 < n ? w[i + 1] : up;
    const double wm = i > 0 ? w[i - 1] : um;
    out[i] += (wp - 2.0 * w[i] + wm) * invh2;
  }
}

// Crank-Nicolson diffusion over dt with the end nodes pinned at the far-field
// constants; constant-coefficient Thomas solve over the interior.
void cn_diffusion(std::vector<double>& w, double um, double up, double h, double dt) {
  const size_t n = w.size();
  const double r = 0.5 * dt / (h * h);
  const size_t m = n - 2;
  static thread_local std::vector<double> rhs, c_prime, d_prime;
  rhs.resize(m);
  c_prime.resize(m);
  d_prime.resize(m);
  for (size_t i = 0; i < m; ++i) {
    const size_t j = i + 1;
    rhs[i] = w[j] + r * (w[j + 1] - 2.0 * w[j] + w[j - 1]);
  }
  rhs[0] += r * um;
  rhs[m - 1] += r * up;
  const double diag = 1.0 + 2.0 * r;
  c_prime[0] = -r / diag;
  d_prime[0] = rhs[0] / diag;
  for (size_t i = 1; i < m; ++i) {
    const double denom = diag + r * c_prime[i - 1];
    c_prime[i] = -r / denom;
    d_prime[i] = (rhs[i] + r * d_prime[i - 1]) / denom;
  }
  w[m] = d_prime[m - 1];
  for (size_t i = m - 1; i > 0; --i) {
    w[i] = d_prime[i - 1] - c_prime[i - 1] * w[i + 1];
  }
  w[0] = um;
  w[n - 1] = up;
}

void rk2(std::vector<double>& w, double um, double up, double h, double dt,
         void (*rhs_fn)(const std::vector<double>&, double, double, double, std::vector<double>&)) {
  static thread_local std::vector<double> k1, stage, k2;
  const size_t n = w.size();
  k1.resize(n);
  stage.resize(n);
  k2.resize(n);
  rhs_fn(w, um, up, h, k1);
  for (size_t i = 0; i < n; ++i) stage[i] = w[i] + dt * k1[i];
  rhs_fn(stage, um, up, h, k2);
  for (size_t i = 0; i < n; ++i) w[i] += 0.5 * dt * (k1[i] + k2[i]);
}

}  // namespace

FieldState solve_viscous_burgers(double u_minus, double u_plus, double h, double t_end) {
  if (!(u_minus < u_plus)) throw Error(ErrorCode::DegenerateRiemann, "needs u_minus < u_plus");
  if (!(h > 0.0) || !(t_end > 0.0)) throw Error(ErrorCode::InvalidArgument, "needs h, t_end > 0");

  const double margin = 8.0 * std::sqrt(std::max(t_end, 1.0));
  const double left = std::floor((u_minus * t_end - margin) / h) * h;
  const double right = std::ceil((u_plus * t_end + margin) / h) * h;
  const int n = static_cast<int>(std::lround((right - left) / h)) + 1;

  FieldState state;
  state.grid = make_grid(left, right, n);
  state.u_minus = u_minus;
  state.u_plus = u_plus;
  state.values.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = state.grid.x(i);
    state.values[static_cast<size_t>(i)] =
        std::abs(x) < 0.5 * h ? 0.5 * (u_minus + u_plus) : (x < 0.0 ? u_minus : u_plus);
  }

  std::vector<double>& w = state.values;
  double t = 0.0;
  const double t_switch = std::min(0.02, t_end);
  const double dt_explicit = 0.25 * h * h;
  while (t < t_switch - 1e-15) {
    const double dt = std::min(dt_explicit, t_switch - t);
    rk2(w, u_minus, u_plus, h, dt, full_rhs);
    t += dt;
  }
  if (t_end > t_switch) {
    const int steps = std::max(1, static_cast<int>(std::ceil((t_end - t_switch) / (h / 8.0))));
    const double k = (t_end - t_switch) / steps;
    for (int s = 0; s < steps; ++s) {
      cn_diffusion(w, u_minus, u_plus, h, 0.5 * k);
      rk2(w, u_minus, u_plus, h, k, advection_rhs);
      cn_diffusion(w, u_minus, u_plus, h, 0.5 * k);
    }
  }
  state.time = t_end;
  return state;
}

}  // namespace nlcd::testing
