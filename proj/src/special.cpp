#include "fracgreen/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/digamma.hpp>

#include "fracgreen/errors.hpp"

namespace fracgreen::special {

namespace {

constexpr double kPi = std::numbers::pi;

// Lanczos coefficients for g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace

bool is_nonpositive_integer(double x, double tol) {
  if (x > 0.5) return false;
  const double r = std::round(x);
  return std::abs(x - r) <= tol * std::max(1.0, std::abs(x));
}

double gamma(double x) {
  if (is_nonpositive_integer(x, 0.0)) throw GammaPole("gamma: pole at non-positive integer");
  return std::tgamma(x);
}

double rgamma(double x) {
  if (is_nonpositive_integer(x, 0.0)) return 0.0;
  if (x > 171.0) return 0.0;
  if (x < -170.0) {
    // 1/Gamma(x) = sin(pi x) Gamma(1 - x) / pi, evaluated in log space.
    int sign = 1;
    const double lg = lgamma_abs(1.0 - x, &sign);
    const double s = std::sin(kPi * x);
    return s * sign * std::exp(lg) / kPi;
  }
  return 1.0 / std::tgamma(x);
}

double lgamma_abs(double x, int* sign) {
  if (is_nonpositive_integer(x, 0.0)) throw GammaPole("lgamma: pole at non-positive integer");
  int s = 1;
  const double v = ::lgamma_r(x, &s);
  if (sign != nullptr) *sign = s;
  return v;
}

double digamma(double x) {
  if (is_nonpositive_integer(x, 0.0)) throw GammaPole("digamma: pole at non-positive integer");
  return boost::math::digamma(x);
}

std::complex<double> log_sin(std::complex<double> z) {
  if (std::abs(z.imag()) < 10.0) return std::log(std::sin(z));
  if (z.imag() < 0.0) return std::conj(log_sin(std::conj(z)));
  // sin z = e^{-iz} (e^{2iz} - 1) / (2i) with |e^{2iz}| < 1.
  const std::complex<double> i(0.0, 1.0);
  return -i * z + std::log((std::exp(2.0 * i * z) - 1.0) / (2.0 * i));
}

std::complex<double> lgamma(std::complex<double> z) {
  if (z.real() < 0.5) {
    return std::log(kPi) - log_sin(kPi * z) - lgamma(1.0 - z);
  }
  z -= 1.0;
  std::complex<double> a = kLanczos[0];
  const std::complex<double> t = z + kLanczosG + 0.5;
  for (std::size_t k = 1; k < kLanczos.size(); ++k) a += kLanczos[k] / (z + static_cast<double>(k));
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(a);
}

}  // namespace fracgreen::special
