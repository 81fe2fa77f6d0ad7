#include "nlcd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace nlcd {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSymmetricKernel: return "NonSymmetricKernel";
    case ErrorCode::NegativeKernel: return "NegativeKernel";
    case ErrorCode::NonUnitMass: return "NonUnitMass";
    case ErrorCode::InfiniteSecondMoment: return "InfiniteSecondMoment";
    case ErrorCode::SpacingTooCoarse: return "SpacingTooCoarse";
    case ErrorCode::BadDomain: return "BadDomain";
    case ErrorCode::NotMonotone: return "NotMonotone";
    case ErrorCode::TailsTooFat: return "TailsTooFat";
    case ErrorCode::DegenerateRiemann: return "DegenerateRiemann";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::WrongKernel: return "WrongKernel";
    case ErrorCode::SingularSolve: return "SingularSolve";
    case ErrorCode::NonpositiveTime: return "NonpositiveTime";
    case ErrorCode::BadP: return "BadP";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::NonpositiveError: return "NonpositiveError";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::BlowUp: return "BlowUp";
    case ErrorCode::FanHitBoundary: return "FanHitBoundary";
    case ErrorCode::MismatchedRuns: return "MismatchedRuns";
    case ErrorCode::WindowTooShort: return "WindowTooShort";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

double bump_shape(double s) {
  // exp(-1/(1-s^2)) on (-1,1), zero outside; all derivatives vanish at the edge.
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - s * s));
}

double adaptive_simpson(double (*f)(double), double a, double b, double fa, double fm,
                        double fb, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(double (*f)(double), double a, double b, double tol) {
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

double bump_shape_x2(double s) { return s * s * bump_shape(s); }

// Exact integral of the piecewise-linear interpolant times x^k over one segment;
// two-point Gauss is exact for the cubic integrand (k <= 2).
double segment_moment(double x0, double y0, double x1, double y1, int order) {
  double half = 0.5 * (x1 - x0), mid = 0.5 * (x0 + x1);
  const double node = 0.5773502691896258;  // 1/sqrt(3)
  double acc = 0.0;
  for (double s : {-node, node}) {
    double x = mid + half * s;
    double y = y0 + (y1 - y0) * (x - x0) / (x1 - x0);
    acc += y * std::pow(x, order);
  }
  return acc * half;
}

}  // namespace

double KernelSpec::evaluate(double x) const {
  double ax = std::abs(x);
  switch (family) {
    case KernelFamily::Exponential:
      return 0.5 * param * std::exp(-param * ax);
    case KernelFamily::Gaussian:
      return std::exp(-0.5 * (x / param) * (x / param)) / (param * std::sqrt(2.0 * M_PI));
    case KernelFamily::CompactBump:
      return normalization * bump_shape(x / param);
    case KernelFamily::Tabulated: {
      if (ax > xs.back()) return 0.0;
      auto it = std::upper_bound(xs.begin(), xs.end(), ax);
      if (it == xs.begin()) it = std::next(it);
      if (it == xs.end()) return normalization * ys.back();
      size_t hi = static_cast<size_t>(it - xs.begin());
      size_t lo = hi - 1;
      double w = (ax - xs[lo]) / (xs[hi] - xs[lo]);
      return normalization * (ys[lo] + w * (ys[hi] - ys[lo]));
    }
  }
  return 0.0;
}

double KernelSpec::support_radius() const {
  switch (family) {
    case KernelFamily::CompactBump: return param;
    case KernelFamily::Tabulated: return xs.back();
    default: return std::numeric_limits<double>::infinity();
  }
}

double KernelSpec::tail_mass(double y) const {
  if (y <= 0.0) return 1.0;
  switch (family) {
    case KernelFamily::Exponential:
      return std::exp(-param * y);
    case KernelFamily::Gaussian:
      return std::erfc(y / (param * kSqrt2));
    case KernelFamily::CompactBump:
      if (y >= param) return 0.0;
      return 2.0 * normalization * param * integrate(bump_shape, y / param, 1.0, 1e-15);
    case KernelFamily::Tabulated: {
      if (y >= xs.back()) return 0.0;
      double acc = 0.0;
      for (size_t i = 0; i + 1 < xs.size(); ++i) {
        double a = std::max(xs[i], y), b = xs[i + 1];
        if (a >= b) continue;
        double ya = ys[i] + (ys[i + 1] - ys[i]) * (a - xs[i]) / (xs[i + 1] - xs[i]);
        acc += 0.5 * (ya + ys[i + 1]) * (b - a);
      }
      return 2.0 * normalization * acc;
    }
  }
  return 0.0;
}

KernelSpec make_exponential_kernel(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw Error(ErrorCode::InvalidArgument, "exponential kernel needs lambda > 0");
  KernelSpec k;
  k.family = KernelFamily::Exponential;
  k.param = lambda;
  k.second_moment = 2.0 / (lambda * lambda);
  return k;
}

KernelSpec make_gaussian_kernel(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw Error(ErrorCode::InvalidArgument, "gaussian kernel needs sigma > 0");
  KernelSpec k;
  k.family = KernelFamily::Gaussian;
  k.param = sigma;
  k.second_moment = sigma * sigma;
  return k;
}

KernelSpec make_bump_kernel(double a) {
  if (!(a > 0.0) || !std::isfinite(a))
    throw Error(ErrorCode::InvalidArgument, "bump kernel needs a > 0");
  KernelSpec k;
  k.family = KernelFamily::CompactBump;
  k.param = a;
  double mass_shape = integrate(bump_shape, -1.0, 1.0, 1e-15);
  double m2_shape = integrate(bump_shape_x2, -1.0, 1.0, 1e-15);
  k.normalization = 1.0 / (a * mass_shape);
  k.second_moment = a * a * m2_shape / mass_shape;
  return k;
}

KernelSpec make_tabulated_kernel(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() != ys.size() || xs.size() < 3)
    throw Error(ErrorCode::InvalidArgument, "tabulated kernel needs >= 3 (x, J) samples");
  std::vector<size_t> idx(xs.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return xs[a] < xs[b]; });
  std::vector<double> sx(xs.size()), sy(ys.size());
  for (size_t i = 0; i < idx.size(); ++i) {
    sx[i] = xs[idx[i]];
    sy[i] = ys[idx[i]];
  }
  for (size_t i = 0; i + 1 < sx.size(); ++i)
    if (!(sx[i] < sx[i + 1]))
      throw Error(ErrorCode::InvalidArgument, "tabulated abscissae must be distinct");
  for (size_t i = 0; i < sx.size(); ++i) {
    if (!std::isfinite(sx[i]) || !std::isfinite(sy[i]))
      throw Error(ErrorCode::InfiniteSecondMoment, "tabulated samples must be finite");
    if (sy[i] < 0.0)
      throw Error(ErrorCode::NegativeKernel, "tabulated kernel has a negative sample");
  }
  size_t n = sx.size();
  for (size_t i = 0; i < n; ++i) {
    size_t j = n - 1 - i;
    if (sx[i] != -sx[j] || sy[i] != sy[j])
      throw Error(ErrorCode::NonSymmetricKernel,
                  "tabulated samples must mirror exactly about x = 0");
  }

  double mass = 0.0, m2 = 0.0;
  for (size_t i = 0; i + 1 < n; ++i) {
    mass += segment_moment(sx[i], sy[i], sx[i + 1], sy[i + 1], 0);
    m2 += segment_moment(sx[i], sy[i], sx[i + 1], sy[i + 1], 2);
  }
  if (!(mass > 0.0))
    throw Error(ErrorCode::NonUnitMass, "tabulated kernel has zero mass; cannot normalize");

  // Keep only |x| >= 0 half: evaluation folds by symmetry.
  std::vector<double> hx, hy;
  for (size_t i = 0; i < n; ++i) {
    if (sx[i] >= 0.0) {
      hx.push_back(sx[i]);
      hy.push_back(sy[i]);
    }
  }
  if (hx.front() != 0.0) {  // symmetric tables with even sample count lack x = 0
    hx.insert(hx.begin(), 0.0);
    double v = sy[n / 2 - 1] +
               (sy[n / 2] - sy[n / 2 - 1]) * (0.0 - sx[n / 2 - 1]) / (sx[n / 2] - sx[n / 2 - 1]);
    hy.insert(hy.begin(), v);
  }

  KernelSpec k;
  k.family = KernelFamily::Tabulated;
  k.xs = std::move(hx);
  k.ys = std::move(hy);
  k.normalization = 1.0 / mass;
  k.second_moment = m2 / mass;
  return k;
}

KernelSpec load_tabulated_kernel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigParse, "cannot open kernel table: " + path);
  std::vector<double> xs, ys;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    double x, y;
    if (row >> x >> y) {
      xs.push_back(x);
      ys.push_back(y);
    }
  }
  return make_tabulated_kernel(std::move(xs), std::move(ys));
}

double kernel_moment(const KernelSpec& kernel, int order) {
  if (order < 0 || order > 2)
    throw Error(ErrorCode::InvalidArgument, "kernel_moment supports orders 0, 1, 2");
  if (order == 0) return 1.0;
  if (order == 1) return 0.0;  // exact by symmetry
  return kernel.second_moment;
}

double DiscreteKernel::canonical_total() const {
  // Center weight is added last: discretize_kernel pins it to 1 - (rest), and
  // with rest in [0.5, 2] that subtraction is exact, so the total is bitwise 1.
  double s = tail_mass_left + tail_mass_right;
  const size_t center = weights.size() / 2;
  for (size_t i = 0; i < weights.size(); ++i)
    if (i != center) s += weights[i];
  return s + weights[center];
}

namespace {

double truncation_radius_for(const KernelSpec& kernel, double tol) {
  switch (kernel.family) {
    case KernelFamily::Exponential:
      return std::log(1.0 / tol) / kernel.param;
    case KernelFamily::Gaussian: {
      double lo = 0.0;
      double hi = kernel.param * kSqrt2 * (std::sqrt(std::log(1.0 / tol)) + 1.0);
      for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (kernel.tail_mass(mid) > tol ? lo : hi) = mid;
      }
      return hi;
    }
    default:
      return kernel.support_radius();
  }
}

// Integral of J over [a, b] with 0 <= a < b (analytic where the family admits one).
double cell_integral_positive(const KernelSpec& kernel, double a, double b) {
  switch (kernel.family) {
    case KernelFamily::Exponential:
      return 0.5 * (std::exp(-kernel.param * a) - std::exp(-kernel.param * b));
    case KernelFamily::Gaussian:
      return 0.5 * (std::erf(b / (kernel.param * kSqrt2)) - std::erf(a / (kernel.param * kSqrt2)));
    default:
      return kernel.evaluate(0.5 * (a + b)) * (b - a);  // midpoint rule
  }
}

}  // namespace

DiscreteKernel discretize_kernel(const KernelSpec& kernel, double spacing, double tol) {
  if (!(spacing > 0.0) || !std::isfinite(spacing))
    throw Error(ErrorCode::InvalidArgument, "kernel spacing must be positive");
  if (!(tol > 0.0) || !(tol < 1e-6))
    throw Error(ErrorCode::InvalidArgument, "kernel truncation tol must lie in (0, 1e-6)");

  double radius = truncation_radius_for(kernel, tol);
  int half_width = static_cast<int>(std::ceil(std::max(0.0, radius / spacing - 0.5)));
  double effective = (half_width + 0.5) * spacing;

  DiscreteKernel dk;
  dk.half_width = half_width;
  dk.spacing = spacing;
  dk.truncation_radius = effective;
  dk.weights.assign(static_cast<size_t>(2 * half_width + 1), 0.0);

  // Cell k covers [(k - 1/2) h, (k + 1/2) h]; mirror k > 0 onto -k for exact symmetry.
  dk.weights[static_cast<size_t>(half_width)] =
      2.0 * cell_integral_positive(kernel, 0.0, 0.5 * spacing);
  for (int k = 1; k <= half_width; ++k) {
    double w = cell_integral_positive(kernel, (k - 0.5) * spacing, (k + 0.5) * spacing);
    dk.weights[static_cast<size_t>(half_width + k)] = w;
    dk.weights[static_cast<size_t>(half_width - k)] = w;
  }

  int nonzero = 0;
  for (double w : dk.weights)
    if (w > 0.0) ++nonzero;
  if (nonzero < 3)
    throw Error(ErrorCode::SpacingTooCoarse,
                "kernel support is under-resolved: fewer than 3 nonzero weights");

  double tail = kernel.tail_mass(effective);
  dk.tail_mass_left = 0.5 * tail;
  dk.tail_mass_right = 0.5 * tail;

  double raw_sum = 0.0;
  for (double w : dk.weights) raw_sum += w;
  if (!(raw_sum > 0.0))
    throw Error(ErrorCode::NonUnitMass, "discretized kernel mass vanished");
  double scale = (1.0 - dk.tail_mass_left - dk.tail_mass_right) / raw_sum;
  for (double& w : dk.weights) w *= scale;

  // Pin the canonical total to 1.0 bit-exactly: accumulate everything except
  // the center weight in canonical order and give the center the exact gap.
  // The defect loop mops up the coarse regime where rest falls outside [0.5, 2].
  {
    double rest = dk.tail_mass_left + dk.tail_mass_right;
    for (int k = 0; k < 2 * half_width + 1; ++k)
      if (k != half_width) rest += dk.weights[static_cast<size_t>(k)];
    dk.weights[static_cast<size_t>(half_width)] = 1.0 - rest;
  }
  for (int pass = 0; pass < 8; ++pass) {
    double defect = 1.0 - dk.canonical_total();
    if (defect == 0.0) break;
    dk.weights[static_cast<size_t>(half_width)] += defect;
  }
  if (dk.weights[static_cast<size_t>(half_width)] < 0.0)
    throw Error(ErrorCode::NegativeKernel, "center weight went negative during renormalization");
  return dk;
}

}  // namespace nlcd
