#pragma once

#include "fracgreen/green_fourier.hpp"
#include "fracgreen/params.hpp"

namespace fracgreen {

struct MomentResult {
  double value = 0.0;
  // Set when theta != 0: the closed form folds the two half-lines together as
  // if the density were even, which only holds for theta = 0.
  bool unverified_asymmetric = false;
};

/// Closed form of <|x|^delta> at time t for -min(alpha, 1) < delta < 0:
///   (2/alpha) eta^{delta/alpha} t^{g + mu delta/alpha - 1}
///   Gamma(-delta/alpha) Gamma(1+delta) Gamma(1+delta/alpha)
///   / [Gamma(-rho delta) Gamma(g + mu delta/alpha) Gamma(1+rho delta)],  g = mu + nu (1 - mu).
/// Throws DomainViolation outside the strip and GammaPole when a gamma argument
/// is a non-positive integer.
MomentResult moment_closed(const DiffusionParams& p, double delta, double t);

/// delta -> 0- limit of moment_closed: (alpha - theta)/alpha * t^{g-1}/Gamma(g).
double moment_closed_mass_limit(const DiffusionParams& p, double t);

/// int |x|^delta G1(x, t) dx by quadrature of the density on both half-lines.
/// Throws DomainViolation for delta <= -min(alpha, 1) (not integrable at the
/// origin) and NonConvergentTail for delta >= alpha when a half-line has an
/// algebraic tail.
GreenValue moment_numeric(const DiffusionParams& p, double delta, double t, const QuadratureConfig& cfg = {});

}  // namespace fracgreen
