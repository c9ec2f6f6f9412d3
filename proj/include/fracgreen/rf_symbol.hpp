#pragma once

#include <complex>

#include "fracgreen/params.hpp"

namespace fracgreen {

/// Riesz-Feller Fourier symbol |k|^alpha exp(i sign(k) theta pi / 2).
/// sign(0) is taken as 0, so psi(alpha, theta, 0) == 0 exactly.
std::complex<double> psi(double alpha, double theta, double k);

/// Sum_j eta_j psi(alpha_j, theta_j, k).
std::complex<double> psi_multi(const MultiTermParams& p, double k);

}  // namespace fracgreen
