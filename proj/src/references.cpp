#include "nlcd/references.hpp"

#include <algorithm>
#include <cmath>

namespace nlcd {

double rarefaction(const RiemannData& r, double x, double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::NonpositiveTime, "rarefaction needs t > 0");
  return std::clamp(x / t, r.u_minus, r.u_plus);
}

namespace detail {

namespace {

// log(exp(z^2) erfc(z)) for z > 24 via the asymptotic series
// erfc(z) = exp(-z^2)/(z sqrt(pi)) * S, S = sum (-1)^k (2k-1)!!/(2z^2)^k;
// terms shrink through k = 8 for z >= 24, leaving ~1e-18 truncation error.
double log_erfcx_large(double z) {
  double inv = 1.0 / (2.0 * z * z);
  double series = 0.0, term = 1.0;
  for (int k = 0; k <= 8; ++k) {
    series += term;
    term *= -(2.0 * k + 1.0) * inv;
  }
  return -std::log(z * std::sqrt(M_PI)) + std::log(series);
}

}  // namespace

double log_erfc(double z) {
  if (z <= 24.0) return std::log(std::erfc(z));  // erfc(24) ~ 1e-252, no underflow yet
  return -z * z + log_erfcx_large(z);
}

}  // namespace detail

namespace {

struct ProfileParts {
  double a_scaled;  // A e^{-m}, m = max(log A, log B)
  double b_scaled;  // B e^{-m}
  double g_scaled;  // heat-kernel factor e^{-x^2/4t}/(2 sqrt(pi t)) e^{-m}
};

ProfileParts evaluate_parts(const RiemannData& r, double x, double t) {
  double um = r.u_minus, up = r.u_plus;
  double sqrt_t = std::sqrt(t);
  double xi_minus = (x - um * t) / (2.0 * sqrt_t);
  double xi_plus = (x - up * t) / (2.0 * sqrt_t);
  double gauss_log = -x * x / (4.0 * t);

  // alpha - xi_minus^2 == beta - (-xi_plus)^2 == -x^2/(4t) exactly, so the large-argument
  // branch avoids the alpha/xi^2 cancellation altogether.
  double log_a, log_b;
  if (xi_minus <= 24.0) {
    log_a = (-um * x / 2.0 + um * um * t / 4.0) + detail::log_erfc(xi_minus) - M_LN2;
  } else {
    log_a = gauss_log + detail::log_erfcx_large(xi_minus) - M_LN2;
  }
  double z = -xi_plus;
  if (z <= 24.0) {
    log_b = (-up * x / 2.0 + up * up * t / 4.0) + detail::log_erfc(z) - M_LN2;
  } else {
    log_b = gauss_log + detail::log_erfcx_large(z) - M_LN2;
  }

  double m = std::max(log_a, log_b);
  ProfileParts parts;
  parts.a_scaled = std::exp(log_a - m);
  parts.b_scaled = std::exp(log_b - m);
  parts.g_scaled = std::exp(gauss_log - std::log(2.0 * std::sqrt(M_PI * t)) - m);
  return parts;
}

}  // namespace

double viscous_profile(const RiemannData& r, double x, double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::NonpositiveTime, "viscous profile needs t > 0");
  ProfileParts p = evaluate_parts(r, x, t);
  return (r.u_minus * p.a_scaled + r.u_plus * p.b_scaled) / (p.a_scaled + p.b_scaled);
}

double viscous_profile_dx(const RiemannData& r, double x, double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::NonpositiveTime, "viscous profile needs t > 0");
  ProfileParts p = evaluate_parts(r, x, t);
  double s = p.a_scaled + p.b_scaled;
  double jump = r.u_plus - r.u_minus;
  return jump * p.g_scaled / s - jump * jump * p.a_scaled * p.b_scaled / (2.0 * s * s);
}

double viscous_profile_dxx(const RiemannData& r, double x, double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::NonpositiveTime, "viscous profile needs t > 0");
  ProfileParts p = evaluate_parts(r, x, t);
  double s = p.a_scaled + p.b_scaled;
  double jump = r.u_plus - r.u_minus;
  double mean = 0.5 * (r.u_minus + r.u_plus);
  double w = (r.u_minus * p.a_scaled + r.u_plus * p.b_scaled) / s;
  double gs = p.g_scaled / s;
  double abss = p.a_scaled * p.b_scaled / (s * s);
  return jump * gs * (0.5 * w - x / (2.0 * t)) -
         0.5 * jump * jump * (abss * (w - mean) + gs * (p.a_scaled - p.b_scaled) / s);
}

}  // namespace nlcd
