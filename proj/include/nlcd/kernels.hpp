#pragma once

#include <string>
#include <vector>

#include "nlcd/errors.hpp"

namespace nlcd {

enum class KernelFamily { Exponential, Gaussian, CompactBump, Tabulated };

// Validated convolution kernel J: nonnegative, even, unit mass, finite second moment.
struct KernelSpec {
  KernelFamily family;
  double param = 0.0;              // lambda (Exponential), sigma (Gaussian), a (CompactBump)
  std::vector<double> xs, ys;      // Tabulated samples, piecewise-linear, J = 0 beyond xs range
  double normalization = 1.0;      // CompactBump/Tabulated scale applied at construction
  double second_moment = 0.0;

  double evaluate(double x) const;       // J(x) >= 0, J(x) == J(-x)
  double support_radius() const;         // finite for CompactBump/Tabulated, inf otherwise
  double tail_mass(double y) const;      // integral of J over |x| > y (both tails)
};

KernelSpec make_exponential_kernel(double lambda);
KernelSpec make_gaussian_kernel(double sigma);
KernelSpec make_bump_kernel(double a);
KernelSpec make_tabulated_kernel(std::vector<double> xs, std::vector<double> ys);
KernelSpec load_tabulated_kernel(const std::string& path);  // two-column text, '#' comments

// moment(J, k) = integral of x^k J(x) dx; order 0 -> 1, odd orders -> 0 exactly.
double kernel_moment(const KernelSpec& kernel, int order);

// Quadrature weights for J on a uniform grid of spacing h, indices -K..K,
// stored as weights[k + K]. Invariants enforced at construction:
// weights >= 0, weights mirror-symmetric, and
// sum(weights) + tail_mass_left + tail_mass_right == 1.0 bit-exactly under
// the canonical summation order (tails, off-center weights left to right,
// center weight last; the last position is what lets the pin be exact).
struct DiscreteKernel {
  std::vector<double> weights;
  int half_width = 0;  // K
  double spacing = 0.0;
  double truncation_radius = 0.0;  // (K + 1/2) h
  double tail_mass_left = 0.0;
  double tail_mass_right = 0.0;

  double weight(int k) const { return weights[static_cast<size_t>(k + half_width)]; }
  double canonical_total() const;  // canonical order; see struct comment
};

DiscreteKernel discretize_kernel(const KernelSpec& kernel, double spacing, double tol);

}  // namespace nlcd
