#include "nlcd/nonlocal_operator.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>

namespace nlcd {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;  // FFTW planning is not thread-safe; execution with new arrays is
  return m;
}

size_t next_pow2(size_t n) {
  size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(size_t n) : data(static_cast<double*>(fftw_malloc(n * sizeof(double)))) {}
  ~FftwBuffer() { fftw_free(data); }
  double* data;
};

struct FftwComplexBuffer {
  explicit FftwComplexBuffer(size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(n * sizeof(fftw_complex)))) {}
  ~FftwComplexBuffer() { fftw_free(data); }
  fftw_complex* data;
};

// Neumaier-compensated accumulation keeps the identity checks at true 1e-12 resolution.
struct CompensatedSum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

}  // namespace

struct NonlocalOp::FftPlan {
  size_t m = 0;
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
  std::vector<std::complex<double>> kernel_hat;

  ~FftPlan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (inverse) fftw_destroy_plan(inverse);
  }
};

NonlocalOp::NonlocalOp(const Grid1D& grid, const KernelSpec& spec, double tol)
    : NonlocalOp(grid, discretize_kernel(spec, grid.h(), tol)) {
  spec_ = spec;
  has_spec_ = true;
}

NonlocalOp::NonlocalOp(const Grid1D& grid, DiscreteKernel kernel)
    : grid_(grid), kernel_(std::move(kernel)) {
  if (std::abs(kernel_.spacing - grid.h()) > 1e-12 * grid.h())
    throw Error(ErrorCode::GridMismatch, "kernel spacing does not match the grid");

  size_t n = static_cast<size_t>(grid_.n);
  size_t k = static_cast<size_t>(kernel_.half_width);
  fft_ = std::make_unique<FftPlan>();
  fft_->m = next_pow2(n + 2 * k);
  size_t m = fft_->m;
  size_t mc = m / 2 + 1;

  FftwBuffer real(m);
  FftwComplexBuffer cplx(mc);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fft_->forward = fftw_plan_dft_r2c_1d(static_cast<int>(m), real.data, cplx.data, FFTW_ESTIMATE);
    fft_->inverse = fftw_plan_dft_c2r_1d(static_cast<int>(m), cplx.data, real.data, FFTW_ESTIMATE);
  }

  // Kernel laid out circularly: index j holds w_j for 0..K, index m-j holds w_{-j}.
  for (size_t i = 0; i < m; ++i) real.data[i] = 0.0;
  real.data[0] = kernel_.weight(0);
  for (size_t j = 1; j <= k; ++j) {
    real.data[j] = kernel_.weight(static_cast<int>(j));
    real.data[m - j] = kernel_.weight(-static_cast<int>(j));
  }
  fftw_execute_dft_r2c(fft_->forward, real.data, cplx.data);
  fft_->kernel_hat.resize(mc);
  for (size_t i = 0; i < mc; ++i)
    fft_->kernel_hat[i] = std::complex<double>(cplx.data[i][0], cplx.data[i][1]);
}

NonlocalOp::~NonlocalOp() = default;
NonlocalOp::NonlocalOp(NonlocalOp&&) noexcept = default;
NonlocalOp& NonlocalOp::operator=(NonlocalOp&&) noexcept = default;

void NonlocalOp::apply_raw(const double* values, double u_minus, double u_plus, double* out,
                           ConvPath path) const {
  int n = grid_.n;
  int k = kernel_.half_width;
  if (path == ConvPath::Auto)
    path = (2 * k + 1 >= 129 && n >= 128) ? ConvPath::Fft : ConvPath::Direct;

  double tl = kernel_.tail_mass_left;
  double tr = kernel_.tail_mass_right;

  if (path == ConvPath::Direct) {
    const double* w = kernel_.weights.data();
    for (int i = 0; i < n; ++i) {
      double ui = values[i];
      double acc = tl * (u_minus - ui) + tr * (u_plus - ui);
      for (int j = -k; j <= k; ++j) {
        int src = i - j;
        double uj = src < 0 ? u_minus : (src >= n ? u_plus : values[src]);
        acc += w[j + k] * (uj - ui);
      }
      out[i] = acc;
    }
    return;
  }

  size_t m = fft_->m;
  size_t mc = m / 2 + 1;
  FftwBuffer real(m);
  FftwComplexBuffer cplx(mc);
  size_t uk = static_cast<size_t>(k);
  size_t un = static_cast<size_t>(n);
  for (size_t i = 0; i < uk; ++i) real.data[i] = u_minus;
  for (size_t i = 0; i < un; ++i) real.data[uk + i] = values[i];
  for (size_t i = uk + un; i < 2 * uk + un; ++i) real.data[i] = u_plus;
  for (size_t i = 2 * uk + un; i < m; ++i) real.data[i] = 0.0;

  fftw_execute_dft_r2c(fft_->forward, real.data, cplx.data);
  for (size_t i = 0; i < mc; ++i) {
    std::complex<double> v(cplx.data[i][0], cplx.data[i][1]);
    v *= fft_->kernel_hat[i];
    cplx.data[i][0] = v.real();
    cplx.data[i][1] = v.imag();
  }
  fftw_execute_dft_c2r(fft_->inverse, cplx.data, real.data);

  double inv_m = 1.0 / static_cast<double>(m);
  for (int i = 0; i < n; ++i) {
    double conv = real.data[static_cast<size_t>(i) + uk] * inv_m;
    out[i] = conv + tl * u_minus + tr * u_plus - values[i];
  }
}

std::vector<double> apply_L(const NonlocalOp& op, const FieldState& state, ConvPath path) {
  if (!(state.grid == op.grid()))
    throw Error(ErrorCode::GridMismatch, "state grid does not match the operator grid");
  std::vector<double> out(state.values.size());
  op.apply_raw(state.values.data(), state.u_minus, state.u_plus, out.data(), path);
  return out;
}

std::vector<double> apply_L_elliptic(const KernelSpec& spec, const FieldState& state) {
  if (spec.family != KernelFamily::Exponential || spec.param != 1.0)
    throw Error(ErrorCode::WrongKernel,
                "elliptic route is valid for the Exponential(lambda = 1) kernel only");
  int n = state.grid.n;
  double h = state.grid.h();
  std::vector<double> ux = derivative(state);

  // Thomas solve of (-D2 + I) q = -u_x with homogeneous Dirichlet ends.
  std::vector<double> diag(static_cast<size_t>(n)), rhs(static_cast<size_t>(n));
  double off = -1.0 / (h * h);
  double mid = 2.0 / (h * h) + 1.0;
  diag[0] = 1.0;
  rhs[0] = 0.0;
  for (int i = 1; i < n - 1; ++i) {
    diag[static_cast<size_t>(i)] = mid;
    rhs[static_cast<size_t>(i)] = -ux[static_cast<size_t>(i)];
  }
  diag[static_cast<size_t>(n - 1)] = 1.0;
  rhs[static_cast<size_t>(n - 1)] = 0.0;

  for (int i = 1; i < n; ++i) {
    double lower = (i == n - 1) ? 0.0 : off;  // Dirichlet rows have no couplings
    double upper = (i == 1) ? 0.0 : off;
    double pivot = diag[static_cast<size_t>(i - 1)];
    if (std::abs(pivot) < 1e-300)
      throw Error(ErrorCode::SingularSolve, "tridiagonal pivot vanished");
    double factor = lower / pivot;
    diag[static_cast<size_t>(i)] -= factor * upper;
    rhs[static_cast<size_t>(i)] -= factor * rhs[static_cast<size_t>(i - 1)];
  }
  std::vector<double> q(static_cast<size_t>(n));
  q[static_cast<size_t>(n - 1)] = rhs[static_cast<size_t>(n - 1)] / diag[static_cast<size_t>(n - 1)];
  for (int i = n - 2; i >= 0; --i) {
    double upper = (i == 0 || i == n - 1) ? 0.0 : off;
    q[static_cast<size_t>(i)] =
        (rhs[static_cast<size_t>(i)] - upper * q[static_cast<size_t>(i + 1)]) /
        diag[static_cast<size_t>(i)];
  }

  // L u = -q_x, central differences with q -> 0 beyond the grid.
  std::vector<double> out(static_cast<size_t>(n));
  double inv2h = 0.5 / h;
  for (int i = 0; i < n; ++i) {
    double qm = i > 0 ? q[static_cast<size_t>(i - 1)] : 0.0;
    double qp = i < n - 1 ? q[static_cast<size_t>(i + 1)] : 0.0;
    out[static_cast<size_t>(i)] = -(qp - qm) * inv2h;
  }
  return out;
}

KatoResult kato_identity_check(const NonlocalOp& op, const std::vector<double>& phi) {
  if (phi.size() != static_cast<size_t>(op.grid().n))
    throw Error(ErrorCode::GridMismatch, "phi length does not match the operator grid");
  std::vector<double> lphi(phi.size());
  op.apply_raw(phi.data(), 0.0, 0.0, lphi.data(), ConvPath::Direct);
  CompensatedSum sum, signed_sum;
  for (size_t i = 0; i < phi.size(); ++i) {
    sum.add(lphi[i]);
    if (phi[i] > 0.0)
      signed_sum.add(lphi[i]);
    else if (phi[i] < 0.0)
      signed_sum.add(-lphi[i]);
  }
  double h = op.grid().h();
  return KatoResult{h * sum.value(), h * signed_sum.value()};
}

namespace {

constexpr double kSmoothAbsWidth = 1e-2;

double convex_g(ConvexFunction g, double s) {
  switch (g) {
    case ConvexFunction::Square:
      return s * s;
    case ConvexFunction::SmoothAbs:
      return std::sqrt(s * s + kSmoothAbsWidth * kSmoothAbsWidth) - kSmoothAbsWidth;
    case ConvexFunction::NegPartSquare: {
      double neg = std::min(s, 0.0);
      return neg * neg;
    }
  }
  return 0.0;
}

double convex_g_prime(ConvexFunction g, double s) {
  switch (g) {
    case ConvexFunction::Square:
      return 2.0 * s;
    case ConvexFunction::SmoothAbs:
      return s / std::sqrt(s * s + kSmoothAbsWidth * kSmoothAbsWidth);
    case ConvexFunction::NegPartSquare:
      return 2.0 * std::min(s, 0.0);  // one-sided convention g'(0) = 0
  }
  return 0.0;
}

}  // namespace

double convexity_inequality_check(const NonlocalOp& op, const std::vector<double>& phi,
                                  ConvexFunction g) {
  if (phi.size() != static_cast<size_t>(op.grid().n))
    throw Error(ErrorCode::GridMismatch, "phi length does not match the operator grid");
  std::vector<double> gphi(phi.size());
  for (size_t i = 0; i < phi.size(); ++i) gphi[i] = convex_g(g, phi[i]);
  std::vector<double> lphi(phi.size()), lgphi(phi.size());
  op.apply_raw(phi.data(), 0.0, 0.0, lphi.data(), ConvPath::Direct);
  op.apply_raw(gphi.data(), 0.0, 0.0, lgphi.data(), ConvPath::Direct);
  double worst = 0.0;
  for (size_t i = 0; i < phi.size(); ++i)
    worst = std::min(worst, lgphi[i] - convex_g_prime(g, phi[i]) * lphi[i]);
  return worst;
}

}  // namespace nlcd
