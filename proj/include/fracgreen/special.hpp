#pragma once

#include <complex>

namespace fracgreen::special {

/// True when x is a non-positive integer up to a relative tolerance.
bool is_nonpositive_integer(double x, double tol = 1e-12);

/// Gamma function on the real line. Throws GammaPole at non-positive integers.
double gamma(double x);

/// Reciprocal gamma, an entire function: exactly 0 at non-positive integers.
double rgamma(double x);

/// log|Gamma(x)|; sign of Gamma(x) written to *sign when non-null.
double lgamma_abs(double x, int* sign = nullptr);

double digamma(double x);

/// Principal branch of log Gamma(z) for complex z (Lanczos, g = 7, with reflection).
std::complex<double> lgamma(std::complex<double> z);

/// log sin(z), accurate for large |Im z| where sin itself overflows.
std::complex<double> log_sin(std::complex<double> z);

}  // namespace fracgreen::special
