#pragma once

#include <string>
#include <vector>

#include "nlcd/errors.hpp"

namespace nlcd {

// Uniform 1-D grid; nodes x_i = left + i h, h = (right - left)/(n - 1).
struct Grid1D {
  double left = 0.0;
  double right = 0.0;
  int n = 0;

  double h() const { return (right - left) / (n - 1); }
  double x(int i) const { return left + i * h(); }
  bool operator==(const Grid1D&) const = default;
};

Grid1D make_grid(double left, double right, int n);

// Grid samples plus the constant far-field extension u(x) = u_minus for x < left,
// u(x) = u_plus for x > right. States are value snapshots; solver steps make new ones.
struct FieldState {
  Grid1D grid;
  std::vector<double> values;
  double u_minus = 0.0;
  double u_plus = 0.0;
  double time = 0.0;
};

enum class ProfileKind { TanhRamp, PiecewiseLinearRamp, Custom };

// Non-decreasing ramp connecting u_minus to u_plus, centered at x = center.
struct InitialProfile {
  ProfileKind kind = ProfileKind::TanhRamp;
  double delta = 1.0;            // TanhRamp width
  double a = 1.0;                // PiecewiseLinearRamp half-width
  double center = 0.0;           // analytic families only; Custom tables carry their own x
  std::vector<double> xs, vals;  // Custom table, piecewise linear between samples
};

InitialProfile tanh_ramp(double delta, double center = 0.0);
InitialProfile piecewise_linear_ramp(double a, double center = 0.0);
InitialProfile custom_profile(std::vector<double> xs, std::vector<double> vals);

FieldState sample_initial(const Grid1D& grid, double u_minus, double u_plus,
                          const InitialProfile& profile);

// Central differences with the far-field constants as ghost values at both ends.
std::vector<double> derivative(const FieldState& state);

// Discrete total variation sum |u_{i+1} - u_i|; equals u_last - u_first when monotone.
double total_variation(const FieldState& state);

}  // namespace nlcd
