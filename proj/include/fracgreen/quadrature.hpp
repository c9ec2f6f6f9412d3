#pragma once

#include <cmath>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace fracgreen::quad {

struct Result {
  double value = 0.0;
  double err = 0.0;
  double l1 = 0.0;
};

namespace detail {

// Bisects until each piece meets its share of max(tol * L1, abs_floor).
template <class F>
void kronrod_split(F& f, double a, double b, double budget, unsigned depth, Result& out) {
  using rule = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double half = (b - a) / 2.0;
  const double mid = (a + b) / 2.0;
  double err = 0.0;
  double l1 = 0.0;
  auto g = [&](double u) { return f(half * u + mid); };
  // Depth 0: a single 15/31 pair on [-1, 1]; err and l1 come back unscaled.
  const double v = half * rule::integrate(g, -1.0, 1.0, 0, 0.0, &err, &l1);
  err *= half;
  l1 *= half;
  if (depth == 0 || err <= budget || !(half > 0.0)) {
    out.value += v;
    out.err += err;
    out.l1 += l1;
    return;
  }
  kronrod_split(f, a, mid, budget / 2.0, depth - 1, out);
  kronrod_split(f, mid, b, budget / 2.0, depth - 1, out);
}

}  // namespace detail

/// Adaptive 15/31-point Gauss-Kronrod on [a, b]. Stops once the error
/// estimate is below tol times the L1 norm of the integrand or below abs_floor.
template <class F>
Result kronrod(F&& f, double a, double b, double tol, unsigned max_depth = 12, double abs_floor = 0.0) {
  using rule = boost::math::quadrature::gauss_kronrod<double, 31>;
  Result first;
  const double half = (b - a) / 2.0;
  const double mid = (a + b) / 2.0;
  auto g = [&](double u) { return f(half * u + mid); };
  first.value = half * rule::integrate(g, -1.0, 1.0, 0, 0.0, &first.err, &first.l1);
  first.err *= half;
  first.l1 *= half;
  const double budget = std::max(tol * first.l1, abs_floor);
  if (first.err <= budget || max_depth == 0) return first;
  Result r;
  detail::kronrod_split(f, a, mid, budget / 2.0, max_depth - 1, r);
  detail::kronrod_split(f, mid, b, budget / 2.0, max_depth - 1, r);
  return r;
}

/// Double-exponential rule on [a, b]; tolerates endpoint singularities.
template <class F>
Result tanh_sinh(F&& f, double a, double b, double tol) {
  thread_local boost::math::quadrature::tanh_sinh<double> rule;
  Result r;
  r.value = rule.integrate(f, a, b, tol, &r.err, &r.l1);
  // The rule reports the difference of its last two levels, which can be
  // exactly zero; keep a rounding floor so estimates never claim perfection.
  r.err = std::max(r.err, 8.0 * std::numeric_limits<double>::epsilon() * r.l1);
  return r;
}

/// Double-exponential rule on [a, +inf).
template <class F>
Result exp_sinh(F&& f, double a, double tol) {
  thread_local boost::math::quadrature::exp_sinh<double> rule;
  Result r;
  r.value = rule.integrate(f, a, std::numeric_limits<double>::infinity(), tol, &r.err, &r.l1);
  r.err = std::max(r.err, 8.0 * std::numeric_limits<double>::epsilon() * r.l1);
  return r;
}

}  // namespace fracgreen::quad
