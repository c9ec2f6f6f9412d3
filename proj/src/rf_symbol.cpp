#include "fracgreen/rf_symbol.hpp"

#include <cmath>
#include <numbers>

namespace fracgreen {

std::complex<double> psi(double alpha, double theta, double k) {
  if (k == 0.0) return {0.0, 0.0};
  const double magnitude = std::pow(std::abs(k), alpha);
  if (theta == 0.0) return {magnitude, 0.0};
  const double phase = (k > 0.0 ? 1.0 : -1.0) * theta * std::numbers::pi / 2.0;
  return {magnitude * std::cos(phase), magnitude * std::sin(phase)};
}

std::complex<double> psi_multi(const MultiTermParams& p, double k) {
  std::complex<double> sum{0.0, 0.0};
  for (const auto& term : p.terms) sum += term.eta * psi(term.alpha, term.theta, k);
  return sum;
}

}  // namespace fracgreen
