#include "fracgreen/green_series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "fracgreen/errors.hpp"
#include "fracgreen/mellin_barnes.hpp"
#include "fracgreen/special.hpp"

namespace fracgreen {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Poles closer than this are treated as coinciding exactly.
constexpr double kSnap = 1e-10;
// Distinct poles closer than this make the residue sum ill-conditioned.
constexpr double kCollision = 1e-6;

bool snap_integer(double u, double& n) {
  const double r = std::round(u);
  if (std::abs(u - r) <= kSnap * std::max(1.0, std::abs(u))) {
    n = r;
    return true;
  }
  return false;
}

// Real-type hooks so the residues can also be formed in extended precision.
double lgamma_signed(double u, int* sign) { return special::lgamma_abs(u, sign); }
long double lgamma_signed(long double u, int* sign) { return boost::math::lgamma(u, sign); }
double psi0(double u) { return special::digamma(u); }
long double psi0(long double u) { return boost::math::digamma(u); }

// Leading Laurent data of a factor at s* + eps:
//   sign * exp(log_mag) * eps^order * (1 + rel1 * eps + O(eps^2)).
template <class T>
struct Laurent {
  int order = 0;
  T log_mag = 0;
  int sign = 1;
  T rel1 = 0;
};

int parity(double n) { return std::fmod(std::abs(n), 2.0) == 0.0 ? 1 : -1; }
template <class T>
int sign_of(T v) {
  return v < 0 ? -1 : 1;
}

// Gamma(u0 + kappa eps).
template <class T>
Laurent<T> gamma_factor(T u0, T kappa) {
  Laurent<T> l;
  double r;
  if (snap_integer(static_cast<double>(u0), r) && r <= 0.0) {
    const T n = -r;
    l.order = -1;
    l.log_mag = -std::lgamma(n + 1) - std::log(std::abs(kappa));
    l.sign = parity(-r) * sign_of(kappa);
    l.rel1 = psi0(n + 1) * kappa;
    return l;
  }
  int s = 1;
  l.log_mag = lgamma_signed(u0, &s);
  l.sign = s;
  l.rel1 = kappa * psi0(u0);
  return l;
}

// 1/Gamma(u0 + kappa eps).
template <class T>
Laurent<T> rgamma_factor(T u0, T kappa) {
  Laurent<T> l;
  double r;
  if (snap_integer(static_cast<double>(u0), r) && r <= 0.0) {
    const T n = -r;
    l.order = 1;
    l.log_mag = std::lgamma(n + 1) + std::log(std::abs(kappa));
    l.sign = parity(-r) * sign_of(kappa);
    l.rel1 = -psi0(n + 1) * kappa;
    return l;
  }
  int s = 1;
  l.log_mag = -lgamma_signed(u0, &s);
  l.sign = s;
  l.rel1 = -kappa * psi0(u0);
  return l;
}

// sin(a (s* + eps)).
template <class T>
Laurent<T> sin_factor(T a, T s) {
  Laurent<T> l;
  double m;
  if (snap_integer(static_cast<double>(a * s / std::numbers::pi_v<T>), m)) {
    const T c = a * (parity(m) > 0 ? 1 : -1);
    l.order = 1;
    l.log_mag = std::log(std::abs(c));
    l.sign = sign_of(c);
    l.rel1 = 0;
    return l;
  }
  const T v = std::sin(a * s);
  l.log_mag = std::log(std::abs(v));
  l.sign = sign_of(v);
  l.rel1 = a * std::cos(a * s) / v;
  return l;
}

template <class T>
struct Product {
  int order = 0;
  T log_mag = 0;
  int sign = 1;
  T rel1 = 0;
  T log_scale = 0;  // sum of |log_mag| over factors; sets the rounding in exp(log_mag)
  T abs_rel1 = 0;   // sum of |rel1|; sensitivity to rounding in the pole position

  void mul(const Laurent<T>& l) {
    order += l.order;
    log_mag += l.log_mag;
    log_scale += std::abs(l.log_mag);
    abs_rel1 += std::abs(l.rel1);
    sign *= l.sign;
    rel1 += l.rel1;
  }

  // Coefficient of eps^-1.
  T residue() const {
    if (order >= 0) return 0;
    const T lead = sign * std::exp(log_mag);
    if (order == -1) return lead;
    if (order == -2) return lead * rel1;
    throw NonSimplePoles("pole of order three or more in the residue sum");
  }
};

template <class T>
struct Shape {
  T alpha, theta, mu, b;
  T log_z;      // log(x^alpha / (eta t^mu))
  T log_x;      // log|x|, folded into the powers so tiny x cannot overflow 1/x
  T prefactor;  // time prefactor over pi
};

template <class T = double>
Shape<T> make_shape(const DiffusionParams& p, double x, double t, GreenKind kind) {
  const KernelShape ks = kernel_shape(p.mu, p.nu, kind, t);
  Shape<T> s;
  s.alpha = p.alpha;
  s.theta = x < 0.0 ? -p.theta : p.theta;
  s.mu = p.mu;
  s.b = ks.b;
  s.log_x = std::log(static_cast<T>(std::abs(x)));
  s.log_z = p.alpha * s.log_x - std::log(static_cast<T>(p.eta)) - p.mu * std::log(static_cast<T>(t));
  s.prefactor = ks.prefactor / std::numbers::pi_v<T>;
  return s;
}

// Residue of Gamma(s) Gamma(1-s) Gamma(1-alpha s) / Gamma(b - mu s) sin(pi s (alpha-theta)/2) z^s at s*.
// Returns the magnitude envelope without the sine through *envelope.
template <class T>
T residue_at(const Shape<T>& sh, T s, T* envelope, T* log_scale = nullptr) {
  Product<T> prod;
  prod.mul(gamma_factor<T>(s, 1));
  prod.mul(gamma_factor<T>(1 - s, -1));
  prod.mul(gamma_factor<T>(1 - sh.alpha * s, -sh.alpha));
  prod.mul(rgamma_factor<T>(sh.b - sh.mu * s, -sh.mu));
  Laurent<T> power;
  power.log_mag = s * sh.log_z - sh.log_x;
  power.rel1 = sh.log_z;
  prod.mul(power);
  Product<T> without_sine = prod;
  prod.mul(sin_factor<T>(std::numbers::pi_v<T> * (sh.alpha - sh.theta) / 2, s));
  if (envelope != nullptr) *envelope = std::exp(without_sine.log_mag) * (1 + std::abs(without_sine.rel1));
  if (log_scale != nullptr) *log_scale = prod.log_scale + std::abs(s) * prod.abs_rel1;
  return prod.residue();
}

template <class T = double>
std::vector<T> ascending_poles(T alpha, int count) {
  std::vector<T> s;
  s.reserve(2 * count);
  for (int m = 1; m <= count; ++m) s.push_back(m);
  for (int n = 0; n < count; ++n) s.push_back((1 + n) / alpha);
  std::sort(s.begin(), s.end());
  std::vector<T> merged;
  for (T v : s) {
    if (!merged.empty()) {
      const T gap = std::abs(v - merged.back());
      if (gap <= kSnap * std::max<T>(1, v)) {
        // Keep the exact integer representative.
        if (std::round(v) == v) merged.back() = v;
        continue;
      }
      if (gap < kCollision)
        throw NonSimplePoles("poles at s = " + std::to_string(merged.back()) + " and " + std::to_string(v) +
                             " nearly coincide");
    }
    merged.push_back(v);
  }
  if (static_cast<int>(merged.size()) > count) merged.resize(count);
  return merged;
}

// Sums terms in order. Convergent series stop at rounding level; asymptotic
// ones are cut just before their smallest term.
struct Summation {
  bool convergent = true;
  double sum = 0.0;
  double abs_sum = 0.0;
  int used = 0;
  double bound = std::numeric_limits<double>::infinity();

  // Asymptotic bookkeeping.
  double best_env = std::numeric_limits<double>::infinity();
  double sum_before_best = 0.0;
  int used_before_best = 0;
  int quiet = 0;
  double prev_env = 0.0;
  double last_env = 0.0;
  bool done = false;

  void add(double term, double env) {
    if (done) return;
    if (!convergent) {
      if (env < best_env) {
        best_env = env;
        sum_before_best = sum;
        used_before_best = used;
      } else if (env > 1e3 * best_env) {
        done = true;
        return;
      }
    }
    sum += term;
    abs_sum += std::abs(term);
    ++used;
    prev_env = last_env;
    last_env = env;
    quiet = env <= kEps * abs_sum ? quiet + 1 : 0;
    if (quiet >= 3) done = true;
  }

  void finish() {
    const double rounding = 4.0 * kEps * abs_sum;
    if (quiet >= 3) {
      bound = last_env + rounding;
      return;
    }
    if (!convergent) {
      sum = sum_before_best;
      used = used_before_best;
      // Past optimal truncation the remainder is a few smallest terms, not one.
      bound = best_env * std::sqrt(2.0 * kPi * (used + 1)) + rounding;
      return;
    }
    // Ran out of terms: geometric estimate from the last two envelopes.
    const double ratio = prev_env > 0.0 ? last_env / prev_env : 1.0;
    bound = ratio < 1.0 ? last_env / (1.0 - ratio) + rounding : std::numeric_limits<double>::infinity();
  }
};

AscendingPair pair_impl(double alpha, double theta, double mu, double eta, double b, double prefactor, double x,
                        double t, int n) {
  const double c = eta * std::pow(t, mu);
  const double z = std::pow(x, alpha) / c;
  const double s1 = 1.0 + n;
  const double s2 = (1.0 + n) / alpha;
  AscendingPair out;
  out.first = prefactor * std::pow(x, alpha - 1.0) / (kPi * c) * special::gamma(1.0 - alpha * s1) *
              special::rgamma(b - mu * s1) * std::sin(kPi * s1 * (alpha - theta) / 2.0) * std::pow(-z, n);
  const double w = x / std::pow(c, 1.0 / alpha);
  out.second = prefactor / (kPi * alpha * std::pow(c, 1.0 / alpha)) * special::gamma(s2) * special::gamma(1.0 - s2) *
               special::rgamma(b - mu * s2) / std::tgamma(n + 1.0) *
               std::sin(kPi * (1.0 + n) * (alpha - theta) / (2.0 * alpha)) * std::pow(-w, n);
  return out;
}

void check_series_inputs(const DiffusionParams& p, double t) {
  validate(p);
  if (!(t > 0.0)) throw DomainViolation("t must be > 0");
}

}  // namespace

double similarity_ratio(const DiffusionParams& p, double x, double t) {
  return std::pow(std::abs(x), p.alpha) / (p.eta * std::pow(t, p.mu));
}

std::vector<SeriesTerm> ascending_terms(const DiffusionParams& p, double x, double t, int count, GreenKind kind) {
  check_series_inputs(p, t);
  if (!(x > 0.0)) throw DomainViolation("ascending_terms needs x > 0");
  const Shape<double> sh = make_shape(p, x, t, kind);
  std::vector<SeriesTerm> out;
  for (double s : ascending_poles(p.alpha, count)) out.push_back({s, -sh.prefactor * residue_at<double>(sh, s, nullptr)});
  return out;
}

AscendingPair ascending_pair(const DiffusionParams& p, double x, double t, int n) {
  check_series_inputs(p, t);
  const KernelShape ks = kernel_shape(p.mu, p.nu, GreenKind::G1, t);
  return pair_impl(p.alpha, p.theta, p.mu, p.eta, ks.b, ks.prefactor, x, t, n);
}

AscendingPair ascending_pair_caputo(const DiffusionParams& p, double x, double t, int n) {
  check_series_inputs(p, t);
  return pair_impl(p.alpha, p.theta, p.mu, p.eta, 1.0, 1.0, x, t, n);
}

SeriesResult series_ascending(const DiffusionParams& p, double x, double t, int max_terms, GreenKind kind) {
  check_series_inputs(p, t);
  SeriesResult r;
  const double theta = x < 0.0 ? -p.theta : p.theta;
  r.boundary = std::abs(p.alpha - theta) <= 1e-14;
  if (x == 0.0 || !(similarity_ratio(p, x, t) < 1.0)) return r;
  r.domain_ok = true;
  if (r.boundary) return r;

  const Shape<double> sh = make_shape(p, x, t, kind);
  Summation sum;
  sum.convergent = p.alpha >= p.mu;
  for (double s : ascending_poles(p.alpha, max_terms)) {
    double env = 0.0;
    const double term = -sh.prefactor * residue_at(sh, s, &env);
    sum.add(term, sh.prefactor * env);
    if (sum.done) break;
  }
  sum.finish();
  r.value = sum.sum;
  r.terms_used = sum.used;
  r.truncation_bound = sum.bound;
  return r;
}

SeriesResult series_ascending_entire(const DiffusionParams& p, double x, double t, int max_terms, GreenKind kind) {
  check_series_inputs(p, t);
  SeriesResult r;
  const double theta = x < 0.0 ? -p.theta : p.theta;
  r.boundary = std::abs(p.alpha - theta) <= 1e-14;
  if (x == 0.0 || !(p.alpha > p.mu)) return r;
  r.domain_ok = true;
  if (r.boundary) return r;

  using ext = long double;
  const Shape<ext> sh = make_shape<ext>(p, x, t, kind);
  ext sum = 0, abs_sum = 0, last_env = 0, rounding_sum = 0;
  int quiet = 0, used = 0;
  for (ext s : ascending_poles<ext>(p.alpha, max_terms)) {
    ext env = 0, scale = 0;
    const ext term = -sh.prefactor * residue_at(sh, s, &env, &scale);
    sum += term;
    abs_sum += std::abs(term);
    rounding_sum += std::abs(term) * (8 + scale);
    ++used;
    last_env = sh.prefactor * env;
    quiet = last_env <= std::numeric_limits<ext>::epsilon() * abs_sum ? quiet + 1 : 0;
    if (quiet >= 3) break;
  }
  r.value = static_cast<double>(sum);
  r.terms_used = used;
  const double rounding = static_cast<double>(2 * std::numeric_limits<ext>::epsilon() * rounding_sum);
  r.truncation_bound = quiet >= 3 ? static_cast<double>(last_env) + rounding : std::numeric_limits<double>::infinity();
  return r;
}

SeriesResult series_descending(const DiffusionParams& p, double x, double t, int max_terms, GreenKind kind) {
  check_series_inputs(p, t);
  SeriesResult r;
  const double theta = x < 0.0 ? -p.theta : p.theta;
  r.boundary = std::abs(p.alpha - theta) <= 1e-14;
  if (x == 0.0 || !(similarity_ratio(p, x, t) > 1.0)) return r;
  if (std::abs(p.alpha - theta - 2.0) <= 1e-14) return r;
  r.domain_ok = true;
  if (r.boundary) return r;

  const Shape<double> sh = make_shape(p, x, t, kind);
  const double a = -kPi * (p.alpha - theta) / 2.0;
  Summation sum;
  sum.convergent = p.alpha <= p.mu;
  for (int n = 1; n <= max_terms; ++n) {
    // Residue of Gamma(s) at s = -n: (-1)^n/n!, times Gamma(1+n) Gamma(1+alpha n)/Gamma(b + mu n) z^{-n}.
    int sg = 1;
    const double log_mag =
        std::lgamma(1.0 + p.alpha * n) - special::lgamma_abs(sh.b + p.mu * n, &sg) - n * sh.log_z - sh.log_x;
    const double env = sh.prefactor * std::exp(log_mag);
    double m;
    const double sine = snap_integer(a * n / kPi, m) ? 0.0 : std::sin(a * n);
    const double term = (n % 2 == 0 ? 1.0 : -1.0) * sg * sine * env;
    sum.add(term, env);
    if (sum.done) break;
  }
  sum.finish();
  r.value = sum.sum;
  r.terms_used = sum.used;
  r.truncation_bound = sum.bound;
  return r;
}

double neutral_closed(double alpha, double theta, double x, double t) {
  if (x < 0.0) return neutral_closed(alpha, -theta, -x, t);
  const double y = x / t;
  const double phase = kPi * (alpha - theta) / 2.0;
  const double ya = std::pow(y, alpha);
  return std::pow(y, alpha - 1.0) * std::sin(phase) / (t * kPi * (1.0 + 2.0 * ya * std::cos(phase) + ya * ya));
}

SeriesResult neutral_series(double alpha, double theta, double x, double t, int max_terms) {
  SeriesResult r;
  if (x < 0.0) {
    theta = -theta;
    x = -x;
  }
  const double y = x / t;
  r.boundary = std::abs(alpha - theta) <= 1e-14;
  if (x == 0.0 || y == 1.0) return r;
  r.domain_ok = true;
  // (1/(pi x)) sum_{n>=1} (-1)^{n+1} sin(n pi (alpha - theta)/2) w^n, w = y^{+-alpha} < 1.
  const double w = std::pow(y, y < 1.0 ? alpha : -alpha);
  const double phase = kPi * (alpha - theta) / 2.0;
  const double scale = 1.0 / (kPi * x);
  Summation sum;
  double power = 1.0;
  for (int n = 1; n <= max_terms; ++n) {
    power *= w;
    const double env = scale * power;
    sum.add((n % 2 == 1 ? 1.0 : -1.0) * std::sin(n * phase) * env, env);
    if (sum.done) break;
  }
  sum.finish();
  r.value = sum.sum;
  r.terms_used = sum.used;
  r.truncation_bound = sum.bound;
  return r;
}

double gaussian_closed(double eta, double x, double t) {
  return std::exp(-x * x / (4.0 * eta * t)) / std::sqrt(4.0 * kPi * eta * t);
}

const char* to_string(RouteTag tag) {
  switch (tag) {
    case RouteTag::ClosedGaussian:
      return "closed_gaussian";
    case RouteTag::ClosedNeutral:
      return "closed_neutral";
    case RouteTag::SeriesAscending:
      return "series_ascending";
    case RouteTag::SeriesDescending:
      return "series_descending";
    case RouteTag::Fourier:
      return "fourier";
    case RouteTag::Mellin:
      return "mellin";
  }
  return "unknown";
}

RouteResult route_auto(const DiffusionParams& p_in, double x, double t, const QuadratureConfig& cfg, GreenKind kind,
                       RouteTag fallback) {
  const DiffusionParams p = validate(p_in);
  cfg.validate();
  if (!(t > 0.0)) throw DomainViolation("t must be > 0");

  if (p.mu == 1.0 && p.alpha == 2.0) {
    const double v = gaussian_closed(p.eta, x, t);
    return {v, 4.0 * kEps * v, RouteTag::ClosedGaussian};
  }
  if (kind == GreenKind::G1 && p.mu == p.alpha && p.nu == 1.0 && x != 0.0) {
    // Neutral scaling: N(x; eta) = eta^{-1/alpha} N(x eta^{-1/alpha}; 1).
    const double scale = std::pow(p.eta, -1.0 / p.alpha);
    const double v = scale * neutral_closed(p.alpha, p.theta, x * scale, t);
    return {v, 8.0 * kEps * std::abs(v), RouteTag::ClosedNeutral};
  }

  if (x != 0.0) {
    const double ratio = similarity_ratio(p, x, t);
    auto acceptable = [&](const SeriesResult& s) {
      return s.domain_ok && std::isfinite(s.value) &&
             s.truncation_bound <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(s.value));
    };
    try {
      if (ratio <= 0.8) {
        const SeriesResult s = series_ascending(p, x, t, cfg.series_max_terms, kind);
        if (acceptable(s)) return {s.value, s.truncation_bound, RouteTag::SeriesAscending};
      } else if (ratio >= 1.25) {
        const SeriesResult s = series_descending(p, x, t, cfg.series_max_terms, kind);
        if (acceptable(s)) return {s.value, s.truncation_bound, RouteTag::SeriesDescending};
      }
    } catch (const NonSimplePoles&) {
      // Fall through to the quadrature route.
    }
    if (fallback == RouteTag::Mellin) {
      // The line integral holds an absolute accuracy only, so it gives up far
      // out in the tail; Fourier inversion takes over there.
      try {
        const GreenValue g = mb_density(p, x, t, contour_from(cfg), cfg, kind);
        return {g.value, g.err_est, RouteTag::Mellin};
      } catch (const ToleranceNotMet&) {
      } catch (const UnsupportedAtBoundary&) {
      }
    }
  }
  const GreenValue g = green_point(p, kind, x, t, cfg);
  return {g.value, g.err_est, RouteTag::Fourier};
}

}  // namespace fracgreen
