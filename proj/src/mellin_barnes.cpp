#include "fracgreen/mellin_barnes.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "fracgreen/errors.hpp"
#include "fracgreen/special.hpp"

namespace fracgreen {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

struct LineIntegral {
  double value = 0.0;  // (1/2 pi i) times the integral along the line
  double err = 0.0;
  double l1 = 0.0;  // same scaling applied to |integrand|
};

// (1/2 pi i) int_{c - i inf}^{c + i inf} exp(log_f(s)) ds for an integrand with
// conjugate symmetry, analytic in |Re s - c| < strip and decaying like
// exp(-decay |Im s|). Trapezoidal rule with step h, checked against h/2.
LineIntegral trapezoid_line(const std::function<double(double)>& f, double h, double decay, double tol,
                            const ContourSpec& spec) {
  const double half = h / 2.0;
  // Nodes on the fine grid tau = j h/2; even j form the coarse grid.
  double coarse = 0.5 * f(0.0);
  double fine_extra = 0.0;
  double abs_sum = std::abs(coarse);
  double peak = std::abs(coarse);
  double last = 0.0;
  int quiet = 0;
  const double fixed_height = spec.height ? *spec.height : std::numeric_limits<double>::infinity();
  const long max_nodes = 2'000'000;
  long j = 1;
  for (; j < max_nodes; ++j) {
    const double tau = j * half;
    if (tau > fixed_height) break;
    const double v = f(tau);
    if (j % 2 == 0)
      coarse += v;
    else
      fine_extra += v;
    const double mag = std::abs(v);
    abs_sum += mag;
    peak = std::max(peak, mag);
    last = mag;
    if (!spec.height) {
      // Stop once the integrand has stayed negligible for a while.
      quiet = mag <= 1e-3 * tol * peak ? quiet + 1 : 0;
      if (quiet >= 8 && j % 2 == 0) break;
    }
  }
  const double i_coarse = h * coarse / kPi;
  const double i_fine = half * (coarse + fine_extra) / kPi;
  LineIntegral out;
  out.value = i_fine;
  out.l1 = half * abs_sum / kPi;
  const double tail = decay > 0.0 ? last / (kPi * decay) : (spec.height ? last * fixed_height : 0.0);
  out.err = std::abs(i_fine - i_coarse) + tail + 16.0 * kEps * half * abs_sum / kPi;
  if (j >= max_nodes) out.err = std::numeric_limits<double>::infinity();
  return out;
}

// When the result is much smaller than the integrand (cancellation in far
// tails) the step is halved until the estimate meets tol relative to the result.
LineIntegral integrate_line(const std::function<cplx(cplx)>& log_f, double c, double strip, double decay,
                            double log_z, const ContourSpec& spec, double tol) {
  auto f = [&](double tau) {
    const cplx v = std::exp(log_f(cplx(c, tau)));
    return std::isfinite(v.real()) ? v.real() : 0.0;
  };
  if (spec.nodes > 0 && spec.height) return trapezoid_line(f, *spec.height / spec.nodes, decay, tol, spec);
  double h = 2.0 * kPi * strip / (std::log(1.0 / tol) + strip * std::abs(log_z) + 2.0);
  LineIntegral out = trapezoid_line(f, h, decay, tol, spec);
  for (int k = 0; k < 6 && out.err > tol * std::abs(out.value); ++k) {
    h /= 2.0;
    const double local = std::max(tol * std::abs(out.value) / std::max(out.l1, 1e-300), kEps);
    const LineIntegral finer = trapezoid_line(f, h, decay, local, spec);
    if (!(finer.err < out.err)) break;
    out = finer;
  }
  return out;
}

double default_tolerance(const QuadratureConfig& cfg) { return std::max(0.1 * cfg.rel_tol, 1e-15); }

void check_finish(GreenValue& out, const QuadratureConfig& cfg, const char* where) {
  const double allowed = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(out.value));
  if (!(out.err_est <= allowed))
    throw ToleranceNotMet(where, out.err_est / std::max(std::abs(out.value), 1e-300));
}

}  // namespace

ContourSpec contour_from(const QuadratureConfig& cfg) {
  ContourSpec c;
  c.gamma_abscissa = cfg.contour_abscissa;
  c.height = cfg.contour_height;
  return c;
}

cplx mb_integrand(const DiffusionParams& p, cplx s, double x, double t, GreenKind kind) {
  const KernelShape shape = kernel_shape(p.mu, p.nu, kind, t);
  const double log_z = p.alpha * std::log(x) - std::log(p.eta * std::pow(t, p.mu));
  const cplx lf = special::lgamma(s) + special::lgamma(1.0 - s) + special::lgamma(1.0 - p.alpha * s) -
                  special::lgamma(shape.b - p.mu * s) + special::log_sin(kPi * s * (p.alpha - p.theta) / 2.0) +
                  s * log_z;
  return std::exp(lf);
}

GreenValue mb_density(const DiffusionParams& p_in, double x, double t, const ContourSpec& c,
                      const QuadratureConfig& cfg, GreenKind kind) {
  validate(p_in);
  cfg.validate();
  if (!(t > 0.0)) throw DomainViolation("t must be > 0");
  if (x == 0.0 || !std::isfinite(x)) throw DomainViolation("the Mellin-Barnes route needs x != 0");
  DiffusionParams p = p_in;
  if (x < 0.0) p.theta = -p.theta;
  const double ax = std::abs(x);

  const double right = std::min(1.0, 1.0 / p.alpha);
  const double gamma = c.gamma_abscissa.value_or(right / 2.0);
  if (!(gamma > 0.0 && gamma < right))
    throw ContourInvalid("contour abscissa must lie in (0, min(1, 1/alpha))");
  const double decay = kPi * (1.0 - (p.mu - p.theta) / 2.0);
  if (!(decay > 1e-8)) throw UnsupportedAtBoundary("Mellin-Barnes integrand does not decay for mu = 1, theta = -1");

  if (std::abs(p.alpha - p.theta) <= 1e-14) return {0.0, 0.0};

  const KernelShape shape = kernel_shape(p.mu, p.nu, kind, t);
  const double log_z = p.alpha * std::log(ax) - std::log(p.eta * std::pow(t, p.mu));
  const double sine_rate = kPi * (p.alpha - p.theta) / 2.0;
  auto log_f = [&](cplx s) {
    return special::lgamma(s) + special::lgamma(1.0 - s) + special::lgamma(1.0 - p.alpha * s) -
           special::lgamma(shape.b - p.mu * s) + special::log_sin(sine_rate * s) + s * log_z;
  };
  // s = 0 is removable (the sine vanishes there), so the nearest left pole is s = -1.
  const double strip = std::min(gamma + 1.0, right - gamma);
  const LineIntegral li = integrate_line(log_f, gamma, strip, decay, log_z, c, default_tolerance(cfg));

  GreenValue out;
  const double scale = shape.prefactor / (kPi * ax);
  out.value = scale * li.value;
  out.err_est = scale * li.err;
  check_finish(out, cfg, "Mellin-Barnes");
  return out;
}

GreenValue mb_neutral(double alpha, double theta, double x, double t, const ContourSpec& c,
                      const QuadratureConfig& cfg) {
  cfg.validate();
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainViolation("alpha must lie in (0, 2]");
  if (std::abs(theta) > std::min(alpha, 2.0 - alpha) + 1e-14) throw DomainViolation("|theta| > min(alpha, 2 - alpha)");
  if (!(t > 0.0)) throw DomainViolation("t must be > 0");
  if (x == 0.0 || !std::isfinite(x)) throw DomainViolation("the Mellin-Barnes route needs x != 0");
  if (x < 0.0) theta = -theta;
  const double ax = std::abs(x);

  const double gamma = c.gamma_abscissa.value_or(alpha / 2.0);
  if (!(gamma > 0.0 && gamma < alpha)) throw ContourInvalid("contour abscissa must lie in (0, alpha)");
  const double decay = kPi * (2.0 - alpha + theta) / (2.0 * alpha);
  if (!(decay > 1e-8)) throw UnsupportedAtBoundary("Mellin-Barnes integrand does not decay for theta = alpha - 2");
  if (std::abs(alpha - theta) <= 1e-14) return {0.0, 0.0};

  const double log_y = std::log(ax / t);
  const double sine_rate = kPi * (alpha - theta) / (2.0 * alpha);
  auto log_f = [&](cplx s) {
    // Gamma(u) Gamma(1 - u) = pi / sin(pi u).
    return std::log(kPi) - special::log_sin(kPi * s / alpha) + special::log_sin(sine_rate * s) + s * log_y;
  };
  // Poles at s = alpha n; s = 0 is removable.
  const double strip = std::min(gamma + alpha, alpha - gamma);
  const LineIntegral li = integrate_line(log_f, gamma, strip, decay, log_y, c, default_tolerance(cfg));

  GreenValue out;
  const double scale = 1.0 / (kPi * alpha * ax);
  out.value = scale * li.value;
  out.err_est = scale * li.err;
  check_finish(out, cfg, "Mellin-Barnes (neutral)");
  return out;
}

}  // namespace fracgreen
