#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

namespace fracgreen {

/// Parameters of the single-term equation
///   D_t^{mu,nu} N = eta * D_x^{alpha,theta} N + phi
/// with a Hilfer time derivative of order mu and type nu and a Riesz-Feller
/// space derivative of order alpha and skewness theta.
///
/// Construct through validate(); a default-constructed object is the
/// classical heat equation with unit diffusivity.
struct DiffusionParams {
  double mu = 1.0;
  double nu = 1.0;
  double alpha = 2.0;
  double theta = 0.0;
  double eta = 1.0;

  /// (alpha - theta) / (2 alpha), in [0, 1/alpha].
  double rho() const { return (alpha - theta) / (2.0 * alpha); }

  /// mu + nu (1 - mu): the second Mittag-Leffler index of the initial-value kernel.
  double time_order() const;

  /// Extremal skewness |theta| = alpha, where rho hits 0 or 1/alpha.
  bool boundary() const;

  bool operator==(const DiffusionParams&) const = default;
};

/// One Riesz-Feller term eta * D_x^{alpha,theta}.
struct SpaceTerm {
  double eta = 1.0;
  double alpha = 2.0;
  double theta = 0.0;

  bool operator==(const SpaceTerm&) const = default;
};

/// Hilfer time derivative driven by a finite sum of Riesz-Feller terms.
struct MultiTermParams {
  double mu = 1.0;
  double nu = 1.0;
  std::vector<SpaceTerm> terms;

  double time_order() const;

  static MultiTermParams from_single(const DiffusionParams& p);
  /// The equivalent single-term parameters when exactly one term is present.
  std::optional<DiffusionParams> as_single() const;

  bool operator==(const MultiTermParams&) const = default;
};

/// Knobs shared by every quadrature-based route.
struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
  double k_max = 1e8;  // hard cap on the Fourier truncation radius
  int max_panels = 20000;
  std::optional<double> contour_abscissa;  // Re(s) of the Mellin-Barnes line; automatic when empty
  std::optional<double> contour_height;    // |Im(s)| truncation; automatic when empty
  int series_max_terms = 400;

  /// Throws ConstraintViolation listing every bad field.
  void validate() const;
};

/// Checks every domain constraint at once and throws ConstraintViolation
/// listing all of them when any fails.
DiffusionParams validate(double mu, double nu, double alpha, double theta, double eta);
DiffusionParams validate(const DiffusionParams& p);
MultiTermParams validate(const MultiTermParams& p);

/// mu + nu (1 - mu) - 1, the power of t multiplying the initial-value kernel.
double time_exponent(const DiffusionParams& p);

void to_json(nlohmann::json& j, const DiffusionParams& p);
void from_json(const nlohmann::json& j, DiffusionParams& p);
void to_json(nlohmann::json& j, const SpaceTerm& s);
void from_json(const nlohmann::json& j, SpaceTerm& s);
void to_json(nlohmann::json& j, const MultiTermParams& p);
void from_json(const nlohmann::json& j, MultiTermParams& p);
void to_json(nlohmann::json& j, const QuadratureConfig& c);
void from_json(const nlohmann::json& j, QuadratureConfig& c);

}  // namespace fracgreen
