#include <doctest.h>

#include <cmath>

#include "fracgreen/errors.hpp"
#include "fracgreen/green_series.hpp"
#include "fracgreen/solver.hpp"

using namespace fracgreen;

TEST_CASE("delta initial data reproduces the Gaussian") {
  const DiffusionParams p = validate(1.0, 1.0, 2.0, 0.0, 1.0);
  const SampledField u = solve(p, discrete_delta(1024, 0.1), std::nullopt, 1.0);
  double worst = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j)
    if (std::abs(u.x(j)) <= 5.0) worst = std::max(worst, std::abs(u.values[j] - gaussian_closed(1.0, u.x(j), 1.0)));
  CHECK(worst <= 1e-6);
}

TEST_CASE("narrow grid with a heavy tail leaks") {
  const DiffusionParams p = validate(1.0, 1.0, 1.2, 0.0, 1.0);
  try {
    solve(p, discrete_delta(128, 0.1), std::nullopt, 1.0);
    FAIL("expected BoundaryLeak");
  } catch (const BoundaryLeak& e) {
    CHECK(e.leak() > 0.0);
  }
}

TEST_CASE("single-term multi-term solve is identical") {
  const DiffusionParams p = validate(0.8, 0.5, 1.8, 0.1, 1.0);
  const SampledField n0 = discrete_delta(2048, 0.1);
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-7;
  const SampledField a = solve(p, n0, std::nullopt, 1.0, cfg);
  const SampledField b = solve(MultiTermParams::from_single(p), n0, std::nullopt, 1.0, cfg);
  CHECK(a.values == b.values);
}

TEST_CASE("source term with constant slice adds mass linearly") {
  // mu = nu = 1: u(t) = n0 * G(t) + integral of phi * G over [0, t]; total mass is 1 + t.
  const DiffusionParams p = validate(1.0, 1.0, 2.0, 0.0, 1.0);
  const SampledField n0 = discrete_delta(512, 0.1);
  SourceField phi;
  phi.times = {0.0};
  SampledField bump = n0;
  for (std::size_t j = 0; j < bump.size(); ++j) bump.values[j] = std::exp(-bump.x(j) * bump.x(j)) / std::sqrt(M_PI);
  phi.slices.push_back(bump);
  const SampledField u = solve(p, n0, phi, 2.0);
  double mass = 0.0;
  for (double v : u.values) mass += v * u.dx;
  CHECK(mass == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("malformed inputs") {
  const DiffusionParams p = validate(1.0, 1.0, 2.0, 0.0, 1.0);
  SampledField tiny = discrete_delta(4, 0.1);
  CHECK_THROWS_AS(solve(p, tiny, std::nullopt, 1.0), DomainViolation);
  SourceField bad;
  bad.times = {1.0, 0.5};
  bad.slices = {discrete_delta(64, 0.1), discrete_delta(64, 0.1)};
  CHECK_THROWS_AS(solve(p, discrete_delta(64, 0.1), bad, 1.0), DomainViolation);
}

TEST_CASE("convolution with the Green function matches the spectral solve") {
  const DiffusionParams p = validate(1.0, 1.0, 2.0, 0.0, 1.0);
  SampledField n0;
  n0.dx = 0.1;
  n0.x0 = -25.6;
  for (int j = 0; j < 512; ++j) {
    const double x = n0.x0 + j * n0.dx;
    n0.values.push_back(std::exp(-x * x));
  }
  const SampledField a = solve(p, n0, std::nullopt, 0.5);
  const SampledField b = convolve_green(p, n0, 0.5);
  double worst = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j)
    if (std::abs(a.x(j)) <= 10.0) worst = std::max(worst, std::abs(a.values[j] - b.values[j]));
  CHECK(worst <= 1e-6);
}
