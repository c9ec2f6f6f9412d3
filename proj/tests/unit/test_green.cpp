#include <doctest.h>

#include <cmath>

#include "fracgreen/errors.hpp"
#include "fracgreen/green_fourier.hpp"
#include "fracgreen/green_series.hpp"
#include "fracgreen/mellin_barnes.hpp"
#include "oracle_values.hpp"

using namespace fracgreen;

namespace {

DiffusionParams params_of(const oracle::Density& d) { return validate(d.mu, d.nu, d.alpha, d.theta, d.eta); }
GreenKind kind_of(const oracle::Density& d) { return d.g2 ? GreenKind::G2 : GreenKind::G1; }

}  // namespace

TEST_CASE("Fourier inversion against oracle densities") {
  for (const auto& d : oracle::kDensities) {
    CAPTURE(d.alpha);
    CAPTURE(d.x);
    const GreenValue g = green_point(params_of(d), kind_of(d), d.x, d.t);
    CHECK(std::abs(g.value - d.value) <= 1e-9 * d.value);
    CHECK(std::abs(g.value - d.value) <= g.err_est + 1e-15);
  }
}

TEST_CASE("Mellin-Barnes line against oracle densities") {
  for (const auto& d : oracle::kDensities) {
    CAPTURE(d.alpha);
    CAPTURE(d.x);
    const GreenValue g = mb_density(params_of(d), d.x, d.t, {}, {}, kind_of(d));
    CHECK(std::abs(g.value - d.value) <= 1e-9 * d.value);
  }
}

TEST_CASE("automatic routing against oracle densities") {
  for (const auto& d : oracle::kDensities) {
    CAPTURE(d.alpha);
    CAPTURE(d.x);
    const RouteResult r = route_auto(params_of(d), d.x, d.t, {}, kind_of(d));
    CHECK(std::abs(r.value - d.value) <= 1e-8 * d.value);
  }
}

TEST_CASE("ascending series inside its domain") {
  const auto& d = oracle::kDensities[0];
  const SeriesResult s = series_ascending(params_of(d), d.x, d.t);
  REQUIRE(s.domain_ok);
  CHECK(std::abs(s.value - d.value) <= s.truncation_bound + 1e-15);
  CHECK(std::abs(s.value - d.value) <= 1e-12 * d.value);
  CHECK_FALSE(series_ascending(params_of(d), 3.0, d.t).domain_ok);
}

TEST_CASE("entire ascending series beyond the unit ratio") {
  const auto& d = oracle::kDensities[1];
  REQUIRE(similarity_ratio(params_of(d), d.x, d.t) > 1.0);
  const SeriesResult s = series_ascending_entire(params_of(d), d.x, d.t);
  REQUIRE(s.domain_ok);
  CHECK(std::abs(s.value - d.value) <= s.truncation_bound + 1e-15);
  CHECK(std::abs(s.value - d.value) <= 1e-10 * d.value);
  // Needs alpha > mu so that both pole families decay factorially.
  CHECK_FALSE(series_ascending_entire(validate(0.9, 1.0, 0.8, 0.0, 1.0), 2.0, 1.0).domain_ok);
}

TEST_CASE("descending series in the far tail") {
  const auto& d = oracle::kDensities[7];
  const SeriesResult s = series_descending(params_of(d), d.x, d.t);
  REQUIRE(s.domain_ok);
  CHECK(std::abs(s.value - d.value) <= s.truncation_bound + 1e-18);
  CHECK(std::abs(s.value - d.value) <= 1e-10 * d.value);
}

TEST_CASE("neutral diffusion closed form") {
  for (const auto& n : oracle::kNeutral) {
    CAPTURE(n.alpha);
    CHECK(neutral_closed(n.alpha, n.theta, n.x, n.t) == doctest::Approx(n.value).epsilon(1e-14));
    const GreenValue mb = mb_neutral(n.alpha, n.theta, n.x, n.t);
    CHECK(std::abs(mb.value - n.value) <= 1e-10 * n.value);
    const SeriesResult s = neutral_series(n.alpha, n.theta, n.x, n.t);
    REQUIRE(s.domain_ok);
    CHECK(std::abs(s.value - n.value) <= 1e-12 * n.value);
  }
  // alpha = 1, theta = 0 is the Cauchy density.
  CHECK(neutral_closed(1.0, 0.0, 2.0, 1.0) == doctest::Approx(1.0 / (M_PI * 5.0)).epsilon(1e-15));
}

TEST_CASE("Gaussian closed form and reflection") {
  const DiffusionParams p = validate(1.0, 1.0, 2.0, 0.0, 1.0);
  CHECK(gaussian_closed(1.0, 0.0, 1.0) == doctest::Approx(1.0 / std::sqrt(4.0 * M_PI)).epsilon(1e-15));
  CHECK(green_point(p, GreenKind::G1, 1.5, 0.5).value == doctest::Approx(gaussian_closed(1.0, 1.5, 0.5)).epsilon(1e-10));
  const DiffusionParams a = validate(0.8, 0.5, 1.5, 0.3, 1.0);
  const DiffusionParams b = validate(0.8, 0.5, 1.5, -0.3, 1.0);
  CHECK(green_point(a, GreenKind::G1, 1.7, 1.0).value ==
        doctest::Approx(green_point(b, GreenKind::G1, -1.7, 1.0).value).epsilon(1e-12));
}

TEST_CASE("extremal skewness kills one half-line") {
  const DiffusionParams p = validate(1.0, 1.0, 0.5, 0.5, 1.0);
  CHECK(series_ascending(p, 0.3, 1.0).boundary);
  const RouteResult r = route_auto(p, 0.3, 1.0);
  CHECK(std::abs(r.value) <= 1e-12);
}

TEST_CASE("grid evaluation matches pointwise evaluation") {
  const DiffusionParams p = validate(0.8, 0.5, 1.5, 0.3, 1.0);
  const std::vector<double> xs{-3.0, -0.5, 0.25, 2.0};
  const auto grid = green_grid(p, GreenKind::G1, xs, 1.0);
  REQUIRE(grid.size() == xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    REQUIRE(grid[i].ok());
    CHECK(grid[i].value == green_point(p, GreenKind::G1, xs[i], 1.0).value);
  }
}
