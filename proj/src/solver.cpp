#include "fracgreen/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "fracgreen/errors.hpp"
#include "fracgreen/green_fourier.hpp"
#include "fracgreen/green_series.hpp"
#include "fracgreen/mittag_leffler.hpp"
#include "fracgreen/parallel.hpp"
#include "fracgreen/quadrature.hpp"
#include "fracgreen/rf_symbol.hpp"

namespace fracgreen {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftBuffers {
  std::size_t n = 0;
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  explicit FftBuffers(std::size_t size) : n(size) {
    real = fftw_alloc_real(n);
    spec = fftw_alloc_complex(n / 2 + 1);
    std::lock_guard<std::mutex> lock(planner_mutex());
    forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), real, spec, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec, real, FFTW_ESTIMATE);
  }
  ~FftBuffers() {
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fftw_destroy_plan(forward);
      fftw_destroy_plan(backward);
    }
    fftw_free(real);
    fftw_free(spec);
  }
  FftBuffers(const FftBuffers&) = delete;
  FftBuffers& operator=(const FftBuffers&) = delete;

  // sum_j v_j exp(-2 pi i m j / n), m = 0 .. n/2.
  std::vector<cplx> transform(const std::vector<double>& v) {
    std::copy(v.begin(), v.end(), real);
    fftw_execute(forward);
    std::vector<cplx> out(n / 2 + 1);
    for (std::size_t m = 0; m < out.size(); ++m) out[m] = {spec[m][0], spec[m][1]};
    return out;
  }

  // Real inverse of a half spectrum, including the 1/n.
  std::vector<double> inverse(const std::vector<cplx>& half) {
    for (std::size_t m = 0; m < half.size(); ++m) {
      spec[m][0] = half[m].real();
      spec[m][1] = half[m].imag();
    }
    fftw_execute(backward);
    std::vector<double> out(real, real + n);
    for (double& v : out) v /= static_cast<double>(n);
    return out;
  }
};

void check_leak(const SampledField& f, const QuadratureConfig& cfg) {
  const std::size_t n = f.size();
  const std::size_t edge = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(0.02 * static_cast<double>(n))));
  double leak = 0.0;
  for (std::size_t j = 0; j < edge; ++j) leak = std::max({leak, std::abs(f.values[j]), std::abs(f.values[n - 1 - j])});
  if (leak > 100.0 * cfg.abs_tol) throw BoundaryLeak(leak);
}

// Antiderivatives of K(u) = u^{mu-1} E_{mu,mu}(lambda u^mu):
//   J0(u) = int_0^u K = u^mu E_{mu,mu+1}(lambda u^mu),
//   J1(u) = int_0^u s K(s) ds = u J0(u) - u^{mu+1} E_{mu,mu+2}(lambda u^mu).
struct Moments01 {
  cplx j0{0.0, 0.0};
  cplx j1{0.0, 0.0};
};

Moments01 kernel_moments(double mu, cplx lambda, double u, double tol) {
  if (u <= 0.0) return {};
  const double um = std::pow(u, mu);
  const cplx z = lambda * um;
  Moments01 m;
  m.j0 = um * ml({mu, mu + 1.0}, z, tol);
  m.j1 = u * m.j0 - u * um * ml({mu, mu + 2.0}, z, tol);
  return m;
}

}  // namespace

bool SampledField::same_grid(const SampledField& other) const {
  return x0 == other.x0 && dx == other.dx && values.size() == other.values.size();
}

void SampledField::validate() const {
  if (values.size() < 8) throw DomainViolation("a sampled field needs at least 8 values");
  if (!(dx > 0.0) || !std::isfinite(dx)) throw DomainViolation("dx must be > 0");
  if (!std::isfinite(x0)) throw DomainViolation("x0 must be finite");
  for (double v : values)
    if (!std::isfinite(v)) throw DomainViolation("sampled field contains a non-finite value");
}

void SourceField::validate() const {
  if (times.empty() || times.size() != slices.size())
    throw DomainViolation("source needs one slice per time and at least one time");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || !std::isfinite(times[i])) throw DomainViolation("source times must be >= 0");
    if (i > 0 && !(times[i] > times[i - 1])) throw DomainViolation("source times must be strictly increasing");
    slices[i].validate();
    if (!slices[i].same_grid(slices[0])) throw DomainViolation("source slices must share one grid");
  }
}

SampledField discrete_delta(std::size_t n, double dx) {
  SampledField f;
  f.dx = dx;
  f.x0 = -static_cast<double>(n / 2) * dx;
  f.values.assign(n, 0.0);
  f.values[n / 2] = 1.0 / dx;
  return f;
}

SampledField solve(const DiffusionParams& p, const SampledField& n0, const std::optional<SourceField>& phi, double t,
                   const QuadratureConfig& cfg) {
  return solve(MultiTermParams::from_single(validate(p)), n0, phi, t, cfg);
}

SampledField solve(const MultiTermParams& p_in, const SampledField& n0, const std::optional<SourceField>& phi, double t,
                   const QuadratureConfig& cfg) {
  const MultiTermParams p = validate(p_in);
  cfg.validate();
  n0.validate();
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainViolation("t must be > 0");
  if (phi) {
    phi->validate();
    if (!phi->slices[0].same_grid(n0)) throw DomainViolation("source and initial condition must share one grid");
    if (phi->times.size() > 1 && (phi->times.front() > 0.0 || phi->times.back() < t))
      throw DomainViolation("source times must cover [0, t]");
  }

  const std::size_t n = n0.size();
  const std::size_t half = n / 2 + 1;
  const double length = static_cast<double>(n) * n0.dx;
  const bool has_nyquist = n % 2 == 0;
  const double order = p.time_order();
  const double prefactor = order == 1.0 ? 1.0 : std::pow(t, order - 1.0);
  const double t_mu = std::pow(t, p.mu);
  const bool exponential = p.mu == 1.0 && order == 1.0;
  const double tol = std::max(cfg.rel_tol, 1e-8);

  FftBuffers fft(n);
  const std::vector<cplx> init_spec = fft.transform(n0.values);
  std::vector<std::vector<cplx>> source_spec;
  if (phi)
    for (const auto& s : phi->slices) source_spec.push_back(fft.transform(s.values));

  // Boundaries u = t - tau of the source pieces clipped to [0, t].
  std::vector<double> breaks;
  if (phi && phi->times.size() > 1) {
    for (double tau : phi->times)
      if (tau > 0.0 && tau < t) breaks.push_back(tau);
    breaks.insert(breaks.begin(), 0.0);
    breaks.push_back(t);
  }

  // The transforms use exp(-i k x); the equation's convention is exp(+i k x),
  // so every multiplier enters conjugated.
  std::vector<cplx> out(half);
  parallel_for(half, [&](std::size_t m) {
    const double k = 2.0 * kPi * static_cast<double>(m) / length;
    const cplx symbol = psi_multi(p, k);
    const cplx z = -t_mu * symbol;
    const cplx kernel = exponential ? std::exp(z) : prefactor * ml({p.mu, order}, z, tol);
    cplx acc = std::conj(kernel) * init_spec[m];

    if (phi) {
      const cplx lambda = -symbol;
      if (phi->times.size() == 1) {
        acc += std::conj(kernel_moments(p.mu, lambda, t, tol).j0) * source_spec[0][m];
      } else {
        const auto& times = phi->times;
        std::vector<Moments01> at(breaks.size());
        for (std::size_t b = 0; b < breaks.size(); ++b) at[b] = kernel_moments(p.mu, lambda, t - breaks[b], tol);
        // Piece [tau_a, tau_b] of the source, linear in tau; the weight on the
        // later slice is the fraction s = (tau - tau_a)/h = (t - u - tau_a)/h.
        std::size_t b = 0;
        for (std::size_t i = 0; i + 1 < times.size() && b + 1 < breaks.size(); ++i) {
          const double ta = times[i];
          const double tb = times[i + 1];
          if (tb <= breaks[b]) continue;
          const double h = tb - ta;
          while (b + 1 < breaks.size() && breaks[b + 1] <= tb) {
            // Sub-interval [breaks[b], breaks[b+1]] in tau is [t - breaks[b+1], t - breaks[b]] in u.
            const cplx d0 = at[b].j0 - at[b + 1].j0;
            const cplx d1 = at[b].j1 - at[b + 1].j1;
            const cplx w_b = ((t - ta) * d0 - d1) / h;
            const cplx w_a = d0 - w_b;
            acc += std::conj(w_a) * source_spec[i][m] + std::conj(w_b) * source_spec[i + 1][m];
            ++b;
          }
        }
      }
    }
    out[m] = acc;
  });
  if (has_nyquist) {
    // k = pi/dx and -pi/dx are the same mode; use the symmetric part.
    out[half - 1] = {out[half - 1].real(), 0.0};
  }

  SampledField result;
  result.x0 = n0.x0;
  result.dx = n0.dx;
  result.values = fft.inverse(out);
  check_leak(result, cfg);
  return result;
}

SampledField convolve_green(const DiffusionParams& p_in, const SampledField& n0, double t, const QuadratureConfig& cfg) {
  const DiffusionParams p = validate(p_in);
  cfg.validate();
  n0.validate();
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainViolation("t must be > 0");

  const std::size_t n = n0.size();
  const double dx = n0.dx;
  auto density = [&](double x) { return route_auto(p, x, t, cfg, GreenKind::G1, RouteTag::Mellin).value; };

  // g[n - 1 + d] = G1(d dx) for d = -(n-1) .. n-1, d != 0.
  std::vector<double> g(2 * n - 1, 0.0);
  parallel_for(2 * n - 1, [&](std::size_t i) {
    const long d = static_cast<long>(i) - static_cast<long>(n - 1);
    if (d != 0) g[i] = density(static_cast<double>(d) * dx);
  });
  auto at = [&](long d) { return g[static_cast<std::size_t>(d + static_cast<long>(n) - 1)]; };

  // Replace dx G1(0) by the weight that makes the sum over |d| <= D match the
  // integral over [-D dx, D dx], trapezoid end corrections included.
  const long reach = std::min<long>(static_cast<long>(n) - 2, 32);
  const double radius = static_cast<double>(reach) * dx;
  const double tol = std::max(0.1 * cfg.rel_tol, 1e-13);
  const double inner = quad::tanh_sinh(density, 0.0, radius, tol).value +
                       quad::tanh_sinh([&](double x) { return density(-x); }, 0.0, radius, tol).value;
  double trapezoid = 0.5 * dx * (at(reach) + at(-reach));
  for (long d = 1; d < reach; ++d) trapezoid += dx * (at(d) + at(-d));
  const double slope_right = (at(reach + 1) - at(reach - 1)) / (2.0 * dx);
  const double slope_left = (at(-reach + 1) - at(-reach - 1)) / (2.0 * dx);
  const double w0 = inner - trapezoid + dx * dx / 12.0 * (slope_right - slope_left);

  SampledField result;
  result.x0 = n0.x0;
  result.dx = dx;
  result.values.assign(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    double sum = w0 * n0.values[i];
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) sum += dx * at(static_cast<long>(i) - static_cast<long>(j)) * n0.values[j];
    result.values[i] = sum;
  });
  check_leak(result, cfg);
  return result;
}

}  // namespace fracgreen
