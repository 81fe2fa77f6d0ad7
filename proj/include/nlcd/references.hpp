#pragma once

#include "nlcd/errors.hpp"

namespace nlcd {

// Ordered far-field pair of a rarefaction problem.
struct RiemannData {
  RiemannData(double um, double up) : u_minus(um), u_plus(up) {
    if (!(um < up)) throw Error(ErrorCode::DegenerateRiemann, "needs u_minus < u_plus");
  }
  double u_minus;
  double u_plus;
};

// Self-similar rarefaction wave: u_minus for x <= u_minus t, x/t inside the fan,
// u_plus for x >= u_plus t. Defined for t > 0 only.
double rarefaction(const RiemannData& r, double x, double t);

// Smooth solution of w_t - w_xx + w w_x = 0 with step data (u_minus for x < 0).
// Closed form: w = (u_minus A + u_plus B)/(A + B) with
//   A = exp(-u_minus x/2 + u_minus^2 t/4) erfc((x - u_minus t)/(2 sqrt t))/2,
//   B = exp(-u_plus  x/2 + u_plus^2  t/4) erfc(-(x - u_plus t)/(2 sqrt t))/2;
// evaluated in log space so the huge exponentials cancel before exponentiation.
double viscous_profile(const RiemannData& r, double x, double t);
double viscous_profile_dx(const RiemannData& r, double x, double t);
double viscous_profile_dxx(const RiemannData& r, double x, double t);

namespace detail {
// log(erfc(z)) valid for all z, including z far beyond erfc underflow.
double log_erfc(double z);
}  // namespace detail

}  // namespace nlcd
