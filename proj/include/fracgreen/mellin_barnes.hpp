#pragma once

#include <complex>
#include <optional>

#include "fracgreen/green_fourier.hpp"
#include "fracgreen/params.hpp"

namespace fracgreen {

/// Vertical integration line Re(s) = gamma_abscissa truncated at |Im s| <= height.
/// Empty fields are chosen automatically; nodes = 0 lets the step size be
/// derived from the strip width and the tolerance.
struct ContourSpec {
  std::optional<double> gamma_abscissa;
  std::optional<double> height;
  int nodes = 0;
};

ContourSpec contour_from(const QuadratureConfig& cfg);

/// Mellin-Barnes integrand
///   Gamma(s) Gamma(1-s) Gamma(1-alpha s) / Gamma(b - mu s) * sin(pi s (alpha - theta)/2) * z^s,
/// z = x^alpha/(eta t^mu), evaluated in log space. Exposed for residue checks.
std::complex<double> mb_integrand(const DiffusionParams& p, std::complex<double> s, double x, double t,
                                  GreenKind kind = GreenKind::G1);

/// Density by trapezoidal quadrature along Re(s) = gamma with 0 < gamma < min(1, 1/alpha).
/// Negative x is handled through theta -> -theta. Throws ContourInvalid for a
/// line outside the strip, DomainViolation for x = 0, ToleranceNotMet.
GreenValue mb_density(const DiffusionParams& p, double x, double t, const ContourSpec& c = {},
                      const QuadratureConfig& cfg = {}, GreenKind kind = GreenKind::G1);

/// Neutral diffusion (mu = alpha, nu = 1, eta = 1):
///   (1/(pi alpha x)) (1/2 pi i) int Gamma(s/alpha) Gamma(1 - s/alpha) sin(pi s (alpha - theta)/(2 alpha)) (x/t)^s ds
/// on a line 0 < gamma < alpha.
GreenValue mb_neutral(double alpha, double theta, double x, double t, const ContourSpec& c = {},
                      const QuadratureConfig& cfg = {});

}  // namespace fracgreen
