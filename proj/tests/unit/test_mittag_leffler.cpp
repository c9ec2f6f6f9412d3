#include <doctest.h>

#include <cmath>
#include <complex>

#include "fracgreen/mittag_leffler.hpp"
#include "fracgreen/special.hpp"
#include "oracle_values.hpp"

using namespace fracgreen;

TEST_CASE("reciprocal gamma") {
  CHECK(special::rgamma(0.2) == doctest::Approx(oracle::kRecipGamma02).epsilon(1e-15));
  CHECK(special::rgamma(0.0) == 0.0);
  CHECK(special::rgamma(-3.0) == 0.0);
  CHECK(special::gamma(5.0) == doctest::Approx(24.0).epsilon(1e-15));
}

TEST_CASE("Mittag-Leffler against high-precision series") {
  for (const auto& c : oracle::kMittagLeffler) {
    CAPTURE(c.a);
    CAPTURE(c.b);
    CAPTURE(c.re);
    CAPTURE(c.im);
    const std::complex<double> want(c.value_re, c.value_im);
    const std::complex<double> got = ml({c.a, c.b}, {c.re, c.im});
    CHECK(std::abs(got - want) <= 1e-9 * std::abs(want));
  }
}

TEST_CASE("elementary special cases") {
  CHECK(ml({1.0, 1.0}, 1.0).real() == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
  CHECK(ml({1.0, 1.0}, -30.0).real() == doctest::Approx(std::exp(-30.0)).epsilon(1e-8));
  CHECK(std::abs(ml({2.0, 1.0}, -M_PI * M_PI / 4.0)) < 1e-12);
  CHECK(ml({2.0, 1.0}, -4.0).real() == doctest::Approx(std::cos(2.0)).epsilon(1e-12));
  CHECK(ml({0.7, 0.4}, 0.0).real() == doctest::Approx(1.0 / std::tgamma(0.4)).epsilon(1e-15));
}

TEST_CASE("independent methods agree where both apply") {
  const MLParams p{0.6, 0.9};
  for (double z : {-0.5, -3.0, -8.0}) {
    CAPTURE(z);
    const MLEstimate series = ml_by(p, z, MLMethod::Series);
    const MLEstimate integral = ml_by(p, z, MLMethod::Integral);
    REQUIRE(integral.ok);
    if (series.ok) CHECK(std::abs(series.value - integral.value) <= 1e-9 * std::abs(integral.value));
  }
  const MLEstimate far = ml_by(p, -200.0, MLMethod::Asymptotic);
  const MLEstimate far_integral = ml_by(p, -200.0, MLMethod::Integral);
  REQUIRE(far.ok);
  CHECK(std::abs(far.value - far_integral.value) <= 1e-9 * std::abs(far_integral.value));
}

TEST_CASE("negative real axis tail") {
  const MLParams p{0.8, 0.9};
  const double z = -1e4;
  const double lead = -ml_neg_tail_coeff(p) / z;
  CHECK(ml(p, z).real() == doctest::Approx(lead).epsilon(1e-3));
}
