#pragma once

#include <string>
#include <vector>

#include "fracgreen/green_fourier.hpp"
#include "fracgreen/params.hpp"

namespace fracgreen {

struct SeriesResult {
  double value = 0.0;
  int terms_used = 0;
  double truncation_bound = 0.0;  // includes a rounding allowance
  bool domain_ok = false;         // false: value must not be used
  bool boundary = false;          // theta = alpha, the density vanishes identically for x > 0
};

/// One residue of the Mellin-Barnes integrand, already scaled to a density contribution.
struct SeriesTerm {
  double s = 0.0;
  double value = 0.0;
};

/// Residues at the poles s = 1 + n and s = (1 + n)/alpha, in increasing s.
/// Coinciding poles (rational alpha) are combined into exact double-pole
/// residues; poles closer than 1e-6 without coinciding raise NonSimplePoles.
/// Requires x > 0 (negative x: flip theta first).
std::vector<SeriesTerm> ascending_terms(const DiffusionParams& p, double x, double t, int count,
                                        GreenKind kind = GreenKind::G1);

/// The n-th terms of the two ascending families for simple poles, written
/// out directly: {first family at s = 1 + n, second family at s = (1 + n)/alpha}.
struct AscendingPair {
  double first = 0.0;
  double second = 0.0;
};
AscendingPair ascending_pair(const DiffusionParams& p, double x, double t, int n);
/// The nu = 1 (Caputo) simplification of ascending_pair: no time prefactor, b = 1.
AscendingPair ascending_pair_caputo(const DiffusionParams& p, double x, double t, int n);

/// Ascending series; domain_ok is false when x^alpha/(eta t^mu) >= 1 or x == 0.
SeriesResult series_ascending(const DiffusionParams& p, double x, double t, int max_terms = 400,
                              GreenKind kind = GreenKind::G1);

/// The ascending series without the |z| < 1 gate. For alpha > mu both residue
/// families decay factorially, so the sum converges for every z, but the terms
/// grow before they cancel; they are formed and summed in extended precision.
/// domain_ok is false for alpha <= mu or x == 0.
SeriesResult series_ascending_entire(const DiffusionParams& p, double x, double t, int max_terms = 400,
                                     GreenKind kind = GreenKind::G1);

/// Descending series from the poles of Gamma(s) at s = -n; domain_ok is
/// false when x^alpha/(eta t^mu) <= 1, x == 0, or alpha - theta = 2 (every term
/// vanishes while the true tail is exponentially small).
SeriesResult series_descending(const DiffusionParams& p, double x, double t, int max_terms = 400,
                               GreenKind kind = GreenKind::G1);

/// Neutral diffusion (mu = alpha, nu = 1, eta = 1), closed form; y = x/t.
/// Valid for any x != 0 through the reflection theta -> -theta.
double neutral_closed(double alpha, double theta, double x, double t);

/// Neutral diffusion as a residue series: powers of y^alpha for y < 1, of
/// y^-alpha for y > 1. domain_ok is false at y = 1.
SeriesResult neutral_series(double alpha, double theta, double x, double t, int max_terms = 4000);

/// (4 pi eta t)^{-1/2} exp(-x^2 / (4 eta t)).
double gaussian_closed(double eta, double x, double t);

enum class RouteTag { ClosedGaussian, ClosedNeutral, SeriesAscending, SeriesDescending, Fourier, Mellin };

const char* to_string(RouteTag tag);

struct RouteResult {
  double value = 0.0;
  double err_est = 0.0;
  RouteTag tag = RouteTag::Fourier;
};

/// Picks the cheapest trustworthy route: closed forms when the parameters
/// match them, the ascending series for x^alpha/(eta t^mu) <= 0.8, the
/// descending series for >= 1.25 (each only when its bound meets the
/// tolerance), and `fallback` (Fourier or Mellin) otherwise. A Mellin
/// fallback that cannot meet the tolerance hands over to Fourier inversion.
/// x = 0 always goes through the Fourier route.
RouteResult route_auto(const DiffusionParams& p, double x, double t, const QuadratureConfig& cfg = {},
                       GreenKind kind = GreenKind::G1, RouteTag fallback = RouteTag::Fourier);

/// Ratio x^alpha / (eta t^mu) for |x|.
double similarity_ratio(const DiffusionParams& p, double x, double t);

}  // namespace fracgreen
