#include "fracgreen/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "fracgreen/errors.hpp"

namespace fracgreen {

namespace {

// Slack for comparisons against derived bounds such as 2 - alpha.
constexpr double kSlack = 1e-14;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void check_time(double mu, double nu, std::vector<Violation>& out) {
  if (!std::isfinite(mu) || !(mu > 0.0 && mu <= 1.0))
    out.push_back({"mu", fmt(mu) + " not in (0, 1]"});
  if (!std::isfinite(nu) || !(nu >= 0.0 && nu <= 1.0))
    out.push_back({"nu", fmt(nu) + " not in [0, 1]"});
}

void check_space(const std::string& prefix, double alpha, double theta, double eta,
                 std::vector<Violation>& out) {
  const bool alpha_ok = std::isfinite(alpha) && alpha > 0.0 && alpha <= 2.0;
  if (!alpha_ok) out.push_back({prefix + "alpha", fmt(alpha) + " not in (0, 2]"});
  if (!std::isfinite(theta)) {
    out.push_back({prefix + "theta", "not finite"});
  } else if (alpha_ok) {
    const double bound = std::min(alpha, 2.0 - alpha);
    if (std::abs(theta) > bound + kSlack)
      out.push_back({prefix + "theta", "|" + fmt(theta) + "| > min(alpha, 2 - alpha) = " + fmt(bound)});
  }
  if (!std::isfinite(eta) || !(eta > 0.0)) out.push_back({prefix + "eta", fmt(eta) + " not > 0"});
}

double hilfer_order(double mu, double nu) {
  // nu = 1 (Caputo) and mu = 1 give exactly 1 regardless of rounding in 1 - mu.
  if (nu == 1.0 || mu == 1.0) return 1.0;
  return mu + nu * (1.0 - mu);
}

}  // namespace

double DiffusionParams::time_order() const { return hilfer_order(mu, nu); }

bool DiffusionParams::boundary() const { return std::abs(std::abs(theta) - alpha) <= kSlack; }

double MultiTermParams::time_order() const { return hilfer_order(mu, nu); }

MultiTermParams MultiTermParams::from_single(const DiffusionParams& p) {
  return MultiTermParams{p.mu, p.nu, {SpaceTerm{p.eta, p.alpha, p.theta}}};
}

std::optional<DiffusionParams> MultiTermParams::as_single() const {
  if (terms.size() != 1) return std::nullopt;
  return DiffusionParams{mu, nu, terms[0].alpha, terms[0].theta, terms[0].eta};
}

void QuadratureConfig::validate() const {
  std::vector<Violation> v;
  if (!(rel_tol > 0.0)) v.push_back({"rel_tol", "must be > 0"});
  if (!(abs_tol > 0.0)) v.push_back({"abs_tol", "must be > 0"});
  if (!(k_max > 0.0)) v.push_back({"k_max", "must be > 0"});
  if (max_panels < 1) v.push_back({"max_panels", "must be >= 1"});
  if (series_max_terms < 1) v.push_back({"series_max_terms", "must be >= 1"});
  if (contour_height && !(*contour_height > 0.0)) v.push_back({"contour_height", "must be > 0"});
  if (!v.empty()) throw ConstraintViolation(std::move(v));
}

DiffusionParams validate(double mu, double nu, double alpha, double theta, double eta) {
  std::vector<Violation> v;
  check_time(mu, nu, v);
  check_space("", alpha, theta, eta, v);
  if (!v.empty()) throw ConstraintViolation(std::move(v));
  return DiffusionParams{mu, nu, alpha, theta, eta};
}

DiffusionParams validate(const DiffusionParams& p) {
  return validate(p.mu, p.nu, p.alpha, p.theta, p.eta);
}

MultiTermParams validate(const MultiTermParams& p) {
  std::vector<Violation> v;
  check_time(p.mu, p.nu, v);
  if (p.terms.empty()) v.push_back({"terms", "at least one term required"});
  for (std::size_t j = 0; j < p.terms.size(); ++j) {
    const auto& s = p.terms[j];
    check_space("terms[" + std::to_string(j) + "].", s.alpha, s.theta, s.eta, v);
  }
  if (!v.empty()) throw ConstraintViolation(std::move(v));
  return p;
}

double time_exponent(const DiffusionParams& p) { return p.time_order() - 1.0; }

void to_json(nlohmann::json& j, const DiffusionParams& p) {
  j = nlohmann::json{{"mu", p.mu}, {"nu", p.nu}, {"alpha", p.alpha}, {"theta", p.theta}, {"eta", p.eta}};
}

void from_json(const nlohmann::json& j, DiffusionParams& p) {
  p = validate(j.at("mu").get<double>(), j.at("nu").get<double>(), j.at("alpha").get<double>(),
               j.at("theta").get<double>(), j.at("eta").get<double>());
}

void to_json(nlohmann::json& j, const SpaceTerm& s) {
  j = nlohmann::json{{"eta", s.eta}, {"alpha", s.alpha}, {"theta", s.theta}};
}

void from_json(const nlohmann::json& j, SpaceTerm& s) {
  s.eta = j.at("eta").get<double>();
  s.alpha = j.at("alpha").get<double>();
  s.theta = j.at("theta").get<double>();
}

void to_json(nlohmann::json& j, const MultiTermParams& p) {
  j = nlohmann::json{{"mu", p.mu}, {"nu", p.nu}, {"terms", p.terms}};
}

void from_json(const nlohmann::json& j, MultiTermParams& p) {
  MultiTermParams raw;
  raw.mu = j.at("mu").get<double>();
  raw.nu = j.at("nu").get<double>();
  raw.terms = j.at("terms").get<std::vector<SpaceTerm>>();
  p = validate(raw);
}

void to_json(nlohmann::json& j, const QuadratureConfig& c) {
  j = nlohmann::json{{"rel_tol", c.rel_tol},
                     {"abs_tol", c.abs_tol},
                     {"k_max", c.k_max},
                     {"max_panels", c.max_panels},
                     {"series_max_terms", c.series_max_terms}};
  if (c.contour_abscissa) j["contour_abscissa"] = *c.contour_abscissa;
  if (c.contour_height) j["contour_height"] = *c.contour_height;
}

void from_json(const nlohmann::json& j, QuadratureConfig& c) {
  QuadratureConfig out;
  out.rel_tol = j.value("rel_tol", out.rel_tol);
  out.abs_tol = j.value("abs_tol", out.abs_tol);
  out.k_max = j.value("k_max", out.k_max);
  out.max_panels = j.value("max_panels", out.max_panels);
  out.series_max_terms = j.value("series_max_terms", out.series_max_terms);
  if (j.contains("contour_abscissa")) out.contour_abscissa = j.at("contour_abscissa").get<double>();
  if (j.contains("contour_height")) out.contour_height = j.at("contour_height").get<double>();
  out.validate();
  c = out;
}

}  // namespace fracgreen
