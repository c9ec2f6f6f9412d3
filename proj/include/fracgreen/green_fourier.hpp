#pragma once

#include <string>
#include <vector>

#include "fracgreen/params.hpp"

namespace fracgreen {

/// G1 answers an initial condition, G2 an instantaneous source.
enum class GreenKind { G1, G2 };

const char* to_string(GreenKind kind);

struct GreenValue {
  double value = 0.0;
  double err_est = 0.0;
};

/// Per-point grid result; `error` is empty on success.
struct GridValue {
  double value = 0.0;
  double err_est = 0.0;
  std::string error;

  bool ok() const { return error.empty(); }
};

/// The kernel t^{c} E_{mu,b}(-t^mu S(k)) in Fourier space: b and the prefactor t^{c}.
struct KernelShape {
  double mu = 1.0;
  double b = 1.0;
  double prefactor = 1.0;
};

KernelShape kernel_shape(double mu, double nu, GreenKind kind, double t);

/// Inverse Fourier integral of the kernel at (x, t).
///
/// For x != 0 the half-line integral is moved onto a ray into the lower
/// half-plane, where the oscillating integrand decays exponentially; x = 0 is
/// integrated on the real axis with the algebraic tail handled through the
/// large-argument expansion of the Mittag-Leffler function.
/// Negative x is evaluated as G(|x|) with every theta negated.
///
/// Throws DivergentAtOrigin at x = 0 when the Fourier integrand is not
/// integrable, UnsupportedAtBoundary for alpha = 1, |theta| = 1, and
/// ToleranceNotMet when err_est exceeds max(abs_tol, rel_tol |value|).
GreenValue green_point(const DiffusionParams& p, GreenKind kind, double x, double t,
                       const QuadratureConfig& cfg = {});

/// green_point at every abscissa; failures are reported per point.
std::vector<GridValue> green_grid(const DiffusionParams& p, GreenKind kind, const std::vector<double>& xs,
                                  double t, const QuadratureConfig& cfg = {});

/// Same integral with the aggregated symbol sum_j eta_j psi_j(k).
GreenValue green_point_multi(const MultiTermParams& p, GreenKind kind, double x, double t,
                             const QuadratureConfig& cfg = {});

/// (1/2pi) times the integral over |k| <= k_cut only, on the real axis.
/// This is what a periodic grid with Nyquist wavenumber k_cut can represent.
GreenValue green_point_band_limited(const MultiTermParams& p, GreenKind kind, double x, double t, double k_cut,
                                    const QuadratureConfig& cfg = {});

}  // namespace fracgreen
