#include "fracgreen/mittag_leffler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "fracgreen/errors.hpp"
#include "fracgreen/special.hpp"

namespace fracgreen {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr double kSeriesRadius = 1.0;
constexpr double kAsymptoticRadius = 30.0;

// Absolute floor used when deciding convergence; E_{a,b}(0) = 1/Gamma(b) sets the scale.
double natural_scale(const MLParams& p) { return std::max(std::abs(special::rgamma(p.b)), 1e-3); }

bool meets(double err, cplx value, const MLParams& p, double tol) {
  return std::isfinite(err) && std::isfinite(value.real()) && std::isfinite(value.imag()) &&
         err <= tol * std::max(std::abs(value), 1e-3 * natural_scale(p));
}

MLEstimate by_series(const MLParams& p, cplx z, double tol) {
  const cplx log_z = std::log(z);
  cplx sum = special::rgamma(p.b);
  double abs_sum = std::abs(sum);
  int small_run = 0;
  double last = kInf;
  constexpr int kMaxTerms = 4000;
  for (int k = 1; k < kMaxTerms; ++k) {
    const double arg = p.b + p.a * k;
    const cplx term = std::exp(static_cast<double>(k) * log_z - std::lgamma(arg));
    sum += term;
    const double mag = std::abs(term);
    abs_sum += mag;
    if (mag <= 0.5 * kEps * std::abs(sum) && mag <= last) {
      if (++small_run >= 3) break;
    } else {
      small_run = 0;
    }
    last = mag;
  }
  if (z.imag() == 0.0) sum = cplx(sum.real(), 0.0);
  MLEstimate out;
  out.value = sum;
  // Cancellation among the terms bounds the attainable accuracy.
  out.err_est = 4.0 * kEps * abs_sum + last;
  out.ok = small_run >= 3 && meets(out.err_est, sum, p, tol);
  return out;
}

// Roots s of s^a = z with |arg s| < pi; each contributes (1/a) s^{1-b} e^s.
cplx exponential_residues(const MLParams& p, cplx z) {
  const double r = std::pow(std::abs(z), 1.0 / p.a);
  const double th = std::arg(z);
  cplx sum = 0.0;
  const int kmin = static_cast<int>(std::ceil(-p.a / 2.0 - th / (2.0 * kPi)));
  const int kmax = static_cast<int>(std::floor(p.a / 2.0 - th / (2.0 * kPi)));
  for (int k = kmin; k <= kmax; ++k) {
    const double phase = (th + 2.0 * kPi * k) / p.a;
    if (std::abs(phase) >= kPi) continue;
    const cplx s = std::polar(r, phase);
    sum += std::exp(s + (1.0 - p.b) * std::log(s)) / p.a;
  }
  return sum;
}

MLEstimate by_asymptotic(const MLParams& p, cplx z, double tol) {
  cplx sum = exponential_residues(p, z);
  const cplx inv_z = 1.0 / z;
  const double log_r = std::log(std::abs(z));
  cplx power = 1.0;
  double prev_env = kInf;
  double omitted = kInf;
  constexpr int kMaxTerms = 200;
  int nonzero_small = 0;
  for (int j = 1; j <= kMaxTerms; ++j) {
    power *= inv_z;
    const double arg = p.b - p.a * j;
    const cplx term = -power * special::rgamma(arg);
    // 1/Gamma passes through zeros at the non-positive integers; judge the
    // terms by the smooth bound |1/Gamma(x)| <= Gamma(1 - x)/pi for x <= 0.
    const double env = arg <= 0.0 ? std::exp(std::lgamma(1.0 - arg) - j * log_r) / kPi : std::abs(term);
    if (env > prev_env) {
      // Divergence sets in: optimal truncation stops before this term.
      omitted = prev_env;
      break;
    }
    sum += term;
    prev_env = env;
    if (env <= 0.5 * kEps * std::abs(sum)) {
      if (++nonzero_small >= 2) {
        omitted = env;
        break;
      }
    }
  }
  if (!std::isfinite(omitted)) omitted = prev_env;
  MLEstimate out;
  out.value = sum;
  out.err_est = omitted + 4.0 * kEps * std::abs(sum);
  out.ok = meets(out.err_est, sum, p, tol);
  return out;
}

// ---------------------------------------------------------------------------
// Inverse Laplace transform of s^{a-b}/(s^a - z) on parabolic contours
// s(u) = m (1 + iu)^2, with contour parameters chosen region by region so that
// the singularities s^a = z stay clear of the path (Garrappa's scheme).

struct ContourChoice {
  double mu = 0.0;
  double h = 0.0;
  double n = kInf;
};

constexpr double kLogEps = -36.043653389117154;  // log(2^-52)

ContourChoice bounded_region(double phi_j, double phi_j1, double pj, double qj, double log_epsilon) {
  constexpr double fac = 1.01;
  const double f_max = std::exp(log_epsilon - kLogEps);
  const double sq_j = std::sqrt(phi_j);
  const double threshold = 2.0 * std::sqrt(log_epsilon - kLogEps);
  const double sq_j1 = std::min(std::sqrt(phi_j1), threshold - sq_j);
  double bar_j = 0.0;
  double bar_j1 = 0.0;
  double f_bar = 1.0;
  bool admissible = false;
  if (pj < 1e-14 && qj < 1e-14) {
    bar_j = sq_j;
    bar_j1 = sq_j1;
    admissible = true;
  } else if (pj < 1e-14) {
    bar_j = sq_j;
    const double f_min = sq_j > 0.0 ? fac * std::pow(sq_j / (sq_j1 - sq_j), qj) : fac;
    if (f_min < f_max) {
      f_bar = f_min + f_min / f_max * (f_max - f_min);
      const double fq = std::pow(f_bar, -1.0 / qj);
      bar_j1 = (2.0 * sq_j1 - fq * sq_j) / (2.0 + fq);
      admissible = true;
    }
  } else if (qj < 1e-14) {
    bar_j1 = sq_j1;
    const double f_min = fac * std::pow(sq_j1 / (sq_j1 - sq_j), pj);
    if (f_min < f_max) {
      f_bar = f_min + f_min / f_max * (f_max - f_min);
      const double fp = std::pow(f_bar, -1.0 / pj);
      bar_j = (2.0 * sq_j + fp * sq_j1) / (2.0 - fp);
      admissible = true;
    }
  } else {
    double f_min = fac * std::pow((sq_j + sq_j1) / (sq_j1 - sq_j), std::max(pj, qj));
    if (f_min < f_max) {
      f_min = std::max(f_min, 1.5);
      f_bar = f_min + f_min / f_max * (f_max - f_min);
      const double fp = std::pow(f_bar, -1.0 / pj);
      const double fq = std::pow(f_bar, -1.0 / qj);
      const double w = -phi_j1 / log_epsilon;
      const double den = 2.0 + w - (1.0 + w) * fp + fq;
      bar_j = ((2.0 + w + fq) * sq_j + fp * sq_j1) / den;
      bar_j1 = (-(1.0 + w) * fq * sq_j + (2.0 + w - (1.0 + w) * fp) * sq_j1) / den;
      admissible = true;
    }
  }
  if (!admissible || !(bar_j1 > bar_j)) return {};
  log_epsilon -= std::log(f_bar);
  const double w = -bar_j1 * bar_j1 / log_epsilon;
  ContourChoice c;
  c.mu = std::pow(((1.0 + w) * bar_j + bar_j1) / (2.0 + w), 2);
  c.h = -2.0 * kPi / log_epsilon * (bar_j1 - bar_j) / ((1.0 + w) * bar_j + bar_j1);
  c.n = std::ceil(std::sqrt(1.0 - log_epsilon / c.mu) / c.h);
  return c;
}

ContourChoice unbounded_region(double phi_j, double pj, double log_epsilon) {
  const double sq_phi = std::sqrt(phi_j);
  double phibar = phi_j > 0.0 ? phi_j * 1.01 : 0.01;
  double sq_phibar = std::sqrt(phibar);
  constexpr double f_min = 1.0;
  constexpr double f_max = 10.0;
  constexpr double f_tar = 5.0;
  double n = 0.0;
  double a_coef = 0.0;
  double sq_mu = 0.0;
  for (int iter = 0; iter < 100; ++iter) {
    const double phi_t = phibar;
    const double log_eps_phi_t = log_epsilon / phi_t;
    n = std::ceil(phi_t / kPi * (1.0 - 1.5 * log_eps_phi_t + std::sqrt(1.0 - 2.0 * log_eps_phi_t)));
    a_coef = kPi * n / phi_t;
    sq_mu = sq_phibar * std::abs(4.0 - a_coef) / std::abs(7.0 - std::sqrt(1.0 + 12.0 * a_coef));
    const double fbar = std::pow((sq_phibar - sq_phi) / sq_mu, -pj);
    if (pj < 1e-14 || (f_min < fbar && fbar < f_max)) break;
    sq_phibar = std::pow(f_tar, -1.0 / pj) * sq_mu + sq_phi;
    phibar = sq_phibar * sq_phibar;
  }
  ContourChoice c;
  c.mu = sq_mu * sq_mu;
  c.h = (-3.0 * a_coef - 2.0 + 2.0 * std::sqrt(1.0 + 12.0 * a_coef)) / (4.0 - a_coef) / n;
  c.n = n;
  const double threshold = log_epsilon - kLogEps;
  if (c.mu > threshold) {
    const double q = std::abs(pj) < 1e-14 ? 0.0 : std::pow(f_tar, -1.0 / pj) * std::sqrt(c.mu);
    phibar = std::pow(q + sq_phi, 2);
    if (phibar < threshold) {
      const double w = std::sqrt(kLogEps / (kLogEps - log_epsilon));
      const double u = std::sqrt(-phibar / kLogEps);
      c.mu = threshold;
      c.n = std::ceil(w * log_epsilon / 2.0 / kPi / (u * w - 1.0));
      c.h = std::sqrt(kLogEps / (kLogEps - log_epsilon)) / c.n;
    } else {
      c.n = kInf;
      c.h = 0.0;
    }
  }
  return c;
}

MLEstimate by_integral(const MLParams& p, cplx z, double tol) {
  const double a = p.a;
  const double b = p.b;
  const double th = std::arg(z);
  const double r = std::pow(std::abs(z), 1.0 / a);

  struct Singular {
    cplx s;
    double phi;
  };
  std::vector<Singular> sing;
  const int kmin = static_cast<int>(std::ceil(-a / 2.0 - th / (2.0 * kPi)));
  const int kmax = static_cast<int>(std::floor(a / 2.0 - th / (2.0 * kPi)));
  for (int k = kmin; k <= kmax; ++k) {
    const cplx s = std::polar(r, (th + 2.0 * kPi * k) / a);
    const double phi = (s.real() + std::abs(s)) / 2.0;
    if (phi > 1e-15) sing.push_back({s, phi});
  }
  std::sort(sing.begin(), sing.end(), [](const Singular& x, const Singular& y) { return x.phi < y.phi; });
  sing.insert(sing.begin(), Singular{0.0, 0.0});

  const std::size_t regions = sing.size();
  std::vector<double> pj(regions, 1.0);
  std::vector<double> qj(regions, 1.0);
  pj[0] = std::max(0.0, -2.0 * (a - b + 1.0));
  std::vector<double> phi(regions + 1);
  for (std::size_t j = 0; j < regions; ++j) phi[j] = sing[j].phi;
  phi[regions] = kInf;

  double log_epsilon = std::log(1e-15);
  ContourChoice best;
  std::size_t best_region = 0;
  for (;;) {
    best = ContourChoice{};
    for (std::size_t j = 0; j < regions; ++j) {
      if (!(phi[j] < log_epsilon - kLogEps && phi[j] < phi[j + 1])) continue;
      const ContourChoice c = (j + 1 < regions) ? bounded_region(phi[j], phi[j + 1], pj[j], qj[j], log_epsilon)
                                                : unbounded_region(phi[j], pj[j], log_epsilon);
      if (c.n < best.n) {
        best = c;
        best_region = j;
      }
    }
    if (best.n <= 200.0 || log_epsilon > std::log(1e-6)) break;
    log_epsilon += std::log(10.0);
  }
  MLEstimate out;
  if (!std::isfinite(best.n)) {
    out.value = std::numeric_limits<double>::quiet_NaN();
    out.err_est = kInf;
    return out;
  }

  const int n = static_cast<int>(best.n);
  cplx integral = 0.0;
  for (int k = -n; k <= n; ++k) {
    const double u = best.h * k;
    const cplx s = best.mu * std::pow(cplx(1.0, u), 2);
    const cplx ds = cplx(-2.0 * best.mu * u, 2.0 * best.mu);
    const cplx log_s = std::log(s);
    const cplx f = std::exp(s + (a - b) * log_s) / (std::exp(a * log_s) - z) * ds;
    integral += f;
  }
  integral *= best.h / (2.0 * kPi * cplx(0.0, 1.0));

  cplx residues = 0.0;
  for (std::size_t j = best_region + 1; j < regions; ++j) {
    const cplx s = sing[j].s;
    residues += std::exp(s + (1.0 - b) * std::log(s)) / a;
  }
  out.value = integral + residues;
  if (z.imag() == 0.0) out.value = cplx(out.value.real(), 0.0);
  out.err_est = 10.0 * std::exp(log_epsilon) * std::max(1.0, std::abs(out.value));
  out.ok = meets(out.err_est, out.value, p, tol);
  return out;
}

void check_params(const MLParams& p, double tol) {
  if (!(p.a > 0.0) || !(p.b > 0.0) || !std::isfinite(p.a) || !std::isfinite(p.b))
    throw DomainViolation("Mittag-Leffler indices must satisfy a > 0, b > 0");
  if (!(tol > 0.0)) throw DomainViolation("Mittag-Leffler tolerance must be > 0");
}

}  // namespace

MLEstimate ml_by(MLParams p, cplx z, MLMethod method, double tol) {
  check_params(p, tol);
  if (z.imag() < 0.0) {
    MLEstimate e = ml_by(p, std::conj(z), method, tol);
    e.value = std::conj(e.value);
    return e;
  }
  if (z == 0.0) return {special::rgamma(p.b), 0.0, true};
  switch (method) {
    case MLMethod::Series:
      return by_series(p, z, tol);
    case MLMethod::Asymptotic:
      return by_asymptotic(p, z, tol);
    case MLMethod::Integral:
      return by_integral(p, z, tol);
  }
  return {};
}

cplx ml(MLParams p, cplx z, double tol) {
  check_params(p, tol);
  if (z.imag() < 0.0) return std::conj(ml(p, std::conj(z), tol));
  if (z == 0.0) return special::rgamma(p.b);
  if (p.a == 1.0 && p.b == 1.0) return std::exp(z);

  const double r = std::abs(z);
  if (r <= kSeriesRadius) {
    const MLEstimate e = by_series(p, z, tol);
    if (e.ok) return e.value;
  } else if (r >= kAsymptoticRadius) {
    const MLEstimate e = by_asymptotic(p, z, tol);
    if (e.ok) return e.value;
  }
  const MLEstimate e = by_integral(p, z, tol);
  if (!e.ok) throw ToleranceNotMet("Mittag-Leffler", e.err_est / std::max(std::abs(e.value), 1e-300));
  return e.value;
}

double ml_neg_tail_coeff(MLParams p) {
  const double d = p.b - p.a;
  if (special::is_nonpositive_integer(d)) throw PoleAtBMinusA("Gamma(b - a) has a pole");
  return 1.0 / std::abs(special::gamma(d));
}

}  // namespace fracgreen
