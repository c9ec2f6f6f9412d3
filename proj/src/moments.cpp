#include "fracgreen/moments.hpp"

#include <algorithm>
#include <cmath>

#include "fracgreen/errors.hpp"
#include "fracgreen/green_series.hpp"
#include "fracgreen/quadrature.hpp"
#include "fracgreen/special.hpp"

namespace fracgreen {

namespace {

double time_order(const DiffusionParams& p) { return p.mu + p.nu * (1.0 - p.mu); }

struct HalfLine {
  double value = 0.0;
  double err = 0.0;
};

// int_0^inf x^delta G1(x) dx, with theta already oriented for this half-line.
HalfLine half_line(const DiffusionParams& p, double delta, double t, const QuadratureConfig& cfg) {
  if (std::abs(p.alpha - p.theta) <= 1e-14) return {};
  const double scale = std::pow(p.eta * std::pow(t, p.mu), 1.0 / p.alpha);
  const double x0 = scale * std::pow(0.8, 1.0 / p.alpha);
  const double x1 = scale * std::pow(1.25, 1.0 / p.alpha);
  auto density = [&](double x) {
    // Far out the Mellin-Barnes line is only good to an absolute accuracy,
    // which the weight x^(1+delta) would amplify.
    const RouteTag fallback = x > x1 ? RouteTag::Fourier : RouteTag::Mellin;
    return route_auto(p, x, t, cfg, GreenKind::G1, fallback).value;
  };
  const double tol = std::max(0.1 * cfg.rel_tol, 1e-13);

  // x = u^{1/(1+delta)} absorbs the weight: x^delta dx = du/(1+delta).
  const double q = 1.0 / (1.0 + delta);
  const auto near = quad::tanh_sinh(
      [&](double u) {
        const double x = std::pow(u, q);
        return x > 0.0 ? q * density(x) : 0.0;
      },
      0.0, std::pow(x0, 1.0 + delta), tol);
  const auto mid = quad::kronrod([&](double x) { return std::pow(x, delta) * density(x); }, x0, x1, tol);
  // x = x1 e^v turns the algebraic tail into an exponential one.
  const auto tail = quad::exp_sinh(
      [&](double v) {
        const double x = x1 * std::exp(v);
        if (!std::isfinite(x)) return 0.0;
        return std::pow(x, 1.0 + delta) * density(x);
      },
      0.0, tol);
  return {near.value + mid.value + tail.value, near.err + mid.err + tail.err};
}

}  // namespace

MomentResult moment_closed(const DiffusionParams& p_in, double delta, double t) {
  const DiffusionParams p = validate(p_in);
  if (!(t > 0.0)) throw DomainViolation("t must be > 0");
  const double lower = -std::min(p.alpha, 1.0);
  if (!(delta > lower && delta < 0.0))
    throw DomainViolation("delta must lie in (" + std::to_string(lower) + ", 0)");
  const double g = time_order(p);
  const double rho = (p.alpha - p.theta) / (2.0 * p.alpha);
  const double da = delta / p.alpha;
  if (special::is_nonpositive_integer(-rho * delta)) throw GammaPole("Gamma(-rho delta) at a pole (theta = alpha)");
  const double num = special::gamma(-da) * special::gamma(1.0 + delta) * special::gamma(1.0 + da);
  const double den = special::gamma(-rho * delta) * special::gamma(g + p.mu * da) * special::gamma(1.0 + rho * delta);
  MomentResult out;
  out.value = 2.0 / p.alpha * std::pow(p.eta, da) * std::pow(t, g + p.mu * da - 1.0) * num / den;
  out.unverified_asymmetric = p.theta != 0.0;
  return out;
}

double moment_closed_mass_limit(const DiffusionParams& p_in, double t) {
  const DiffusionParams p = validate(p_in);
  const double g = time_order(p);
  return (p.alpha - p.theta) / p.alpha * std::pow(t, g - 1.0) / special::gamma(g);
}

GreenValue moment_numeric(const DiffusionParams& p_in, double delta, double t, const QuadratureConfig& cfg) {
  const DiffusionParams p = validate(p_in);
  cfg.validate();
  if (!(t > 0.0)) throw DomainViolation("t must be > 0");
  if (!(delta > -std::min(p.alpha, 1.0)))
    throw DomainViolation("|x|^delta G1 is not integrable at the origin for delta <= -min(alpha, 1)");

  DiffusionParams right = p;
  DiffusionParams left = p;
  left.theta = -p.theta;
  // Only a one-sided extremal half-line (alpha - theta = 2) or the Gaussian has a light tail.
  auto heavy = [&](const DiffusionParams& q) {
    return std::abs(q.alpha - q.theta) > 1e-14 && std::abs(q.alpha - q.theta - 2.0) > 1e-14;
  };
  if (delta >= p.alpha && (heavy(right) || heavy(left)))
    throw NonConvergentTail("the density decays like |x|^(-1-alpha); delta must be < alpha");

  HalfLine r = half_line(right, delta, t, cfg);
  HalfLine l = p.theta == 0.0 ? r : half_line(left, delta, t, cfg);
  GreenValue out{r.value + l.value, r.err + l.err};
  const double allowed = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(out.value));
  if (!(out.err_est <= allowed))
    throw ToleranceNotMet("moment quadrature", out.err_est / std::max(std::abs(out.value), 1e-300));
  return out;
}

}  // namespace fracgreen
