#pragma once

#include <memory>
#include <vector>

#include "nlcd/field.hpp"
#include "nlcd/kernels.hpp"

namespace nlcd {

enum class ConvPath { Auto, Direct, Fft };

enum class ConvexFunction { Square, SmoothAbs, NegPartSquare };

struct KatoResult {
  double sum;         // h * sum_i (L phi)_i
  double signed_sum;  // h * sum_i (L phi)_i sgn(phi_i), sgn(0) = 0
};

// Discretized L u = J*u - u on a fixed grid with constant far-field extension.
// The direct path evaluates sum_k w_k (u_{i-k} - u_i) plus the truncated-tail terms
// tail_left (u_minus - u_i) + tail_right (u_plus - u_i), so every node's multiplier
// totals exactly 1 and constants map to bit-exact zero. The FFT path evaluates the
// same sum through a zero-padded circular convolution with the margins explicitly
// filled with u_minus/u_plus; both paths agree to 1e-12 relative.
class NonlocalOp {
 public:
  NonlocalOp(const Grid1D& grid, const KernelSpec& spec, double tol);
  NonlocalOp(const Grid1D& grid, DiscreteKernel kernel);
  ~NonlocalOp();
  NonlocalOp(NonlocalOp&&) noexcept;
  NonlocalOp& operator=(NonlocalOp&&) noexcept;

  const Grid1D& grid() const { return grid_; }
  const DiscreteKernel& kernel() const { return kernel_; }
  bool has_spec() const { return has_spec_; }
  const KernelSpec& spec() const { return spec_; }

  void apply_raw(const double* values, double u_minus, double u_plus, double* out,
                 ConvPath path = ConvPath::Auto) const;

 private:
  Grid1D grid_;
  DiscreteKernel kernel_;
  KernelSpec spec_{};
  bool has_spec_ = false;
  struct FftPlan;
  std::unique_ptr<FftPlan> fft_;
};

std::vector<double> apply_L(const NonlocalOp& op, const FieldState& state,
                            ConvPath path = ConvPath::Auto);

// Independent route for the Exponential(lambda = 1) kernel: solve the two-point
// problem -q_xx + q = -u_x with homogeneous Dirichlet ends and return -q_x.
std::vector<double> apply_L_elliptic(const KernelSpec& spec, const FieldState& state);

// phi is an integrable field with zero far-field constants.
KatoResult kato_identity_check(const NonlocalOp& op, const std::vector<double>& phi);

// Worst violation min_i [L g(phi) - g'(phi) L phi]_i; >= -1e-12 for convex g.
double convexity_inequality_check(const NonlocalOp& op, const std::vector<double>& phi,
                                  ConvexFunction g);

}  // namespace nlcd
