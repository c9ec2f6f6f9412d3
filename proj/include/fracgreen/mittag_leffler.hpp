#pragma once

#include <complex>

namespace fracgreen {

/// Indices of the two-parameter Mittag-Leffler function E_{a,b}.
struct MLParams {
  double a = 1.0;
  double b = 1.0;
};

enum class MLMethod {
  Series,      // Taylor series sum_k z^k / Gamma(b + a k)
  Integral,    // inverse Laplace transform on an optimal parabolic contour
  Asymptotic,  // algebraic expansion -sum_k z^-k / Gamma(b - a k) plus the exponential residue
};

struct MLEstimate {
  std::complex<double> value;
  double err_est = 0.0;  // absolute error estimate
  bool ok = false;       // err_est <= tol * max(|value|, tiny)
};

/// E_{a,b}(z) to relative tolerance tol. Requires a > 0, b > 0.
///
/// Uses the series for |z| <= 1, the asymptotic expansion for |z| >= 30 when
/// its error estimate meets tol, and the contour integral otherwise.
/// Conjugate symmetry E(conj z) = conj E(z) holds exactly.
/// Throws ToleranceNotMet instead of returning an unconverged value.
std::complex<double> ml(MLParams p, std::complex<double> z, double tol = 1e-10);

/// Runs one specific method; never throws for lack of convergence, reports it in `ok`.
MLEstimate ml_by(MLParams p, std::complex<double> z, MLMethod method, double tol = 1e-10);

/// 1 / |Gamma(b - a)|, the magnitude of the leading algebraic term of E_{a,b}(-x)
/// as x -> +infinity. Throws PoleAtBMinusA when b - a is a non-positive integer.
double ml_neg_tail_coeff(MLParams p);

}  // namespace fracgreen
