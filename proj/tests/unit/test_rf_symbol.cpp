#include <doctest.h>

#include <cmath>
#include <complex>

#include "fracgreen/params.hpp"
#include "fracgreen/rf_symbol.hpp"

using namespace fracgreen;

TEST_CASE("symbol modulus and phase") {
  const std::complex<double> v = psi(1.5, 0.3, -2.0);
  CHECK(std::abs(v) == doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-15));
  CHECK(std::arg(v) == doctest::Approx(-0.15 * M_PI).epsilon(1e-14));
  CHECK(psi(1.5, 0.3, 2.0) == std::conj(v));
  CHECK(psi(1.2, 0.1, 0.0) == std::complex<double>(0.0, 0.0));
}

TEST_CASE("symmetric symbol is real") {
  const std::complex<double> v = psi(2.0, 0.0, 3.0);
  CHECK(v.real() == doctest::Approx(9.0).epsilon(1e-15));
  CHECK(v.imag() == 0.0);
}

TEST_CASE("multi-term symbol is the eta-weighted sum") {
  const MultiTermParams m{1.0, 1.0, {{1.0, 1.5, 0.5}, {0.5, 0.8, -0.2}}};
  const double k = 1.0;
  const std::complex<double> want = std::polar(1.0, 0.25 * M_PI) + 0.5 * std::polar(1.0, -0.1 * M_PI);
  CHECK(std::abs(psi_multi(m, k) - want) < 1e-15);
}
