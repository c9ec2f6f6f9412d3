#pragma once

#include <optional>
#include <vector>

#include "fracgreen/params.hpp"

namespace fracgreen {

/// Real samples on the uniform grid x_j = x0 + j dx, j = 0 .. n-1. Periodic
/// solvers treat the grid as one period [x0, x0 + n dx).
struct SampledField {
  double x0 = 0.0;
  double dx = 1.0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double x(std::size_t j) const { return x0 + static_cast<double>(j) * dx; }
  bool same_grid(const SampledField& other) const;

  /// Throws DomainViolation: fewer than 8 samples, dx <= 0, non-finite entries.
  void validate() const;
};

/// Source phi(x, tau) given as slices at increasing times; linear in time
/// between slices. A single slice is held constant in time.
struct SourceField {
  std::vector<double> times;
  std::vector<SampledField> slices;

  /// Throws DomainViolation unless times are strictly increasing and >= 0 and
  /// all slices share one grid.
  void validate() const;
};

/// Unit-mass discrete delta (a single node of height 1/dx) on a grid of n
/// points with spacing dx, centred so that the node sits at x = 0.
SampledField discrete_delta(std::size_t n, double dx);

/// N(x, t) on the periodic grid of n0 by discrete Fourier transforms:
///   N^(k) = t^{g-1} E_{mu,g}(-t^mu S(k)) N0^(k)
///         + int_0^t phi^(k, t - xi) xi^{mu-1} E_{mu,mu}(-S(k) xi^mu) dxi,
/// g = mu + nu (1 - mu), S(k) the (multi-term) Riesz-Feller symbol. The time
/// integral is done exactly for the piecewise-linear source.
/// Throws BoundaryLeak when the outer 2% of either end exceeds 100 abs_tol.
SampledField solve(const MultiTermParams& p, const SampledField& n0, const std::optional<SourceField>& phi, double t,
                   const QuadratureConfig& cfg = {});
/// Runs through the multi-term path with a single term.
SampledField solve(const DiffusionParams& p, const SampledField& n0, const std::optional<SourceField>& phi, double t,
                   const QuadratureConfig& cfg = {});

/// Whole-line discrete convolution dx sum_j G1(x_i - x_j, t) n0_j with the
/// density from route_auto. The weight at offset zero is corrected so the
/// weights reproduce the integral of G1 near the origin, which keeps the
/// sum accurate when G1 has an integrable cusp or singularity there.
SampledField convolve_green(const DiffusionParams& p, const SampledField& n0, double t,
                            const QuadratureConfig& cfg = {});

}  // namespace fracgreen
