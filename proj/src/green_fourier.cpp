#include "fracgreen/green_fourier.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "fracgreen/errors.hpp"
#include "fracgreen/mittag_leffler.hpp"
#include "fracgreen/parallel.hpp"
#include "fracgreen/quadrature.hpp"
#include "fracgreen/rf_symbol.hpp"
#include "fracgreen/special.hpp"

namespace fracgreen {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// |t^mu S(k)| beyond which the x = 0 integrand is replaced by its expansion.
constexpr double kTailArgument = 1e3;

struct Kernel {
  std::vector<SpaceTerm> terms;
  double mu = 1.0;
  double b = 1.0;
  double prefactor = 1.0;
  double t_mu = 1.0;
  double ml_tol = 1e-12;
  bool exponential = false;

  // t^mu S(k) at k = r exp(-i phi).
  cplx scaled_symbol(double r, double phi) const {
    cplx s{0.0, 0.0};
    for (const auto& term : terms)
      s += term.eta * std::polar(std::pow(r, term.alpha), term.theta * kPi / 2.0 - term.alpha * phi);
    return t_mu * s;
  }

  cplx transform(cplx scaled) const {
    if (exponential) return std::exp(-scaled);
    return ml({mu, b}, -scaled, ml_tol);
  }

  cplx at(double r, double phi) const { return transform(scaled_symbol(r, phi)); }

  // Wavenumber where the scaled symbol reaches unit size.
  double k_scale() const {
    double k = std::numeric_limits<double>::infinity();
    for (const auto& term : terms) k = std::min(k, std::pow(term.eta * t_mu, -1.0 / term.alpha));
    return k;
  }

  double alpha_max() const {
    double a = 0.0;
    for (const auto& term : terms) a = std::max(a, term.alpha);
    return a;
  }
};

Kernel make_kernel(const MultiTermParams& p, GreenKind kind, double x, double t, const QuadratureConfig& cfg) {
  Kernel k;
  k.terms = p.terms;
  if (x < 0.0)
    for (auto& term : k.terms) term.theta = -term.theta;
  const KernelShape shape = kernel_shape(p.mu, p.nu, kind, t);
  k.mu = shape.mu;
  k.b = shape.b;
  k.prefactor = shape.prefactor;
  k.t_mu = std::pow(t, p.mu);
  // Quadrature needs the kernel to absolute accuracy on the scale of E(0);
  // ml() applies that floor when judging convergence.
  k.ml_tol = std::max(cfg.rel_tol, 1e-8);
  k.exponential = p.mu == 1.0 && shape.b == 1.0;
  return k;
}

void check_inputs(const MultiTermParams& p, double x, double t, const QuadratureConfig& cfg) {
  validate(p);
  cfg.validate();
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainViolation("t must be > 0");
  if (!std::isfinite(x)) throw DomainViolation("x must be finite");
  for (const auto& term : p.terms)
    if (term.alpha == 1.0 && std::abs(term.theta) == 1.0)
      throw UnsupportedAtBoundary("alpha = 1 with |theta| = 1 is a travelling delta, not a density");
}

// Largest ray angle for which every E_{mu,b}(-t^mu S(k)) stays bounded in the
// sector between the ray and the positive real axis.
double ray_angle(const Kernel& k) {
  double phi = kPi / 3.0;
  for (const auto& term : k.terms) {
    const double room = kPi * (1.0 - k.mu / 2.0) + term.theta * kPi / 2.0;
    phi = std::min(phi, 0.8 * room / term.alpha);
  }
  return phi;
}

// Power of k governing the algebraic decay of the kernel, 0 when it decays exponentially.
double decay_power(const Kernel& k) {
  if (k.exponential) return 0.0;
  for (int j = 1; j < 64; ++j)
    if (special::rgamma(k.b - k.mu * j) != 0.0) return j * k.alpha_max();
  return 0.0;
}

struct Accumulator {
  double sum = 0.0;
  double err = 0.0;
  double l1 = 0.0;
  int panels = 0;

  void add(const quad::Result& r) {
    sum += r.value;
    err += r.err;
    l1 += r.l1;
    ++panels;
  }
};

// Integral of Re[exp(-i k x) F(k)] over k = r exp(-i phi), r in [0, r_stop) or to
// the point where the exponential envelope makes the rest negligible.
Accumulator ray_integral(const Kernel& kern, double x, double phi, double r_stop, double target_abs,
                         const QuadratureConfig& cfg) {
  const cplx rot = std::polar(1.0, -phi);
  const double decay = x * std::sin(phi);
  const double osc = x * std::cos(phi);
  auto integrand = [&](double r) {
    const cplx k = r * rot;
    const cplx phase = std::exp(cplx(0.0, -x) * k);
    return (rot * phase * kern.at(r, phi)).real();
  };
  auto envelope = [&](double r) { return std::abs(kern.at(r, phi)) * std::exp(-decay * r); };

  const double ks = kern.k_scale();
  const double max_width = osc > 0.0 ? kPi / osc : std::numeric_limits<double>::infinity();
  const double panel_tol = std::max(0.1 * cfg.rel_tol, 1e-14);

  Accumulator acc;
  double r = std::min({ks, max_width, r_stop});
  acc.add(quad::tanh_sinh(integrand, 0.0, r, panel_tol));
  double prev_env = envelope(r);
  while (r < r_stop) {
    const double env = envelope(r);
    const double reach = r + (decay > 0.0 ? 1.0 / decay : r);
    const double target = std::max(target_abs, cfg.rel_tol * std::abs(acc.sum));
    if (std::isinf(r_stop) && (r > ks || decay * r > 50.0) && std::max(env, prev_env) * reach <= 1e-3 * target) break;
    if (acc.panels >= cfg.max_panels || r > cfg.k_max)
      throw ToleranceNotMet("Fourier inversion (panel budget)", env * reach / std::max(std::abs(acc.sum), 1e-300));
    prev_env = env;
    const double next = std::min({r + std::min(r, max_width), r_stop});
    acc.add(quad::kronrod(integrand, r, next, panel_tol, 12, 1e-2 * target_abs));
    r = next;
  }
  return acc;
}

// Integral of Re F(k) over k > K using the large-argument expansion
// E_{mu,b}(z) ~ -sum_j z^{-j} / Gamma(b - mu j).
quad::Result algebraic_tail(const Kernel& kern, double k0, double tol) {
  std::vector<double> coeff;
  for (int j = 1; j <= 10; ++j) coeff.push_back(special::rgamma(kern.b - kern.mu * j));
  auto expansion = [&](double k) {
    const cplx z = -kern.scaled_symbol(k, 0.0);
    const cplx inv = 1.0 / z;
    cplx power = 1.0;
    cplx sum = 0.0;
    double first = 0.0;
    for (std::size_t j = 0; j < coeff.size(); ++j) {
      power *= inv;
      const cplx term = -power * coeff[j];
      sum += term;
      const double mag = std::abs(term);
      if (first == 0.0) first = mag;
      if (mag != 0.0 && mag < 1e-17 * first) break;
    }
    return sum.real();
  };
  // k = k0 e^v turns the algebraic decay into an exponential one.
  return quad::exp_sinh(
      [&](double v) {
        const double k = k0 * std::exp(v);
        return std::isfinite(k) ? expansion(k) * k : 0.0;
      },
      0.0, tol);
}

double residue_check(const Kernel& kern) {
  // The folded integral assumes F(-k) = conj F(k); compare it against the
  // symbol evaluated directly at negative wavenumbers.
  double worst = 0.0;
  const double ks = kern.k_scale();
  for (double k : {0.5 * ks, ks, 3.0 * ks}) {
    cplx neg{0.0, 0.0};
    for (const auto& term : kern.terms) neg += term.eta * psi(term.alpha, term.theta, -k);
    const cplx f_neg = kern.transform(kern.t_mu * neg);
    const cplx f_pos = kern.at(k, 0.0);
    worst = std::max(worst, std::abs(f_neg - std::conj(f_pos)));
  }
  return kern.prefactor / kPi * worst * ks;
}

GreenValue finish(const Kernel& kern, const Accumulator& acc, double extra_err, const QuadratureConfig& cfg) {
  const double residue = residue_check(kern);
  if (residue > 10.0 * cfg.abs_tol) throw ImaginaryResidueTooLarge(residue);
  GreenValue out;
  out.value = kern.prefactor / kPi * acc.sum;
  // The kernel values themselves carry roughly 1e-15 relative error.
  out.err_est = kern.prefactor / kPi * (acc.err + extra_err + 1e-15 * acc.l1);
  const double allowed = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(out.value));
  if (!(out.err_est <= allowed))
    throw ToleranceNotMet("Fourier inversion", out.err_est / std::max(std::abs(out.value), 1e-300));
  return out;
}

}  // namespace

const char* to_string(GreenKind kind) { return kind == GreenKind::G1 ? "g1" : "g2"; }

KernelShape kernel_shape(double mu, double nu, GreenKind kind, double t) {
  KernelShape s;
  s.mu = mu;
  if (kind == GreenKind::G1) {
    const double order = MultiTermParams{mu, nu, {}}.time_order();
    s.b = order;
    s.prefactor = order == 1.0 ? 1.0 : std::pow(t, order - 1.0);
  } else {
    s.b = mu;
    s.prefactor = 1.0;
  }
  return s;
}

GreenValue green_point_multi(const MultiTermParams& p, GreenKind kind, double x, double t,
                             const QuadratureConfig& cfg) {
  check_inputs(p, x, t, cfg);
  const Kernel kern = make_kernel(p, kind, x, t, cfg);
  const double target_abs = cfg.abs_tol * kPi / kern.prefactor;
  const double ax = std::abs(x);

  if (ax > 0.0) {
    const double phi = ray_angle(kern);
    const Accumulator acc = ray_integral(kern, ax, phi, std::numeric_limits<double>::infinity(), target_abs, cfg);
    return finish(kern, acc, 0.0, cfg);
  }

  if (kern.exponential) {
    const Accumulator acc = ray_integral(kern, 0.0, 0.0, std::numeric_limits<double>::infinity(), target_abs, cfg);
    return finish(kern, acc, 0.0, cfg);
  }

  const double power = decay_power(kern);
  if (power <= 1.0)
    throw DivergentAtOrigin("the Fourier integrand decays like |k|^-" + std::to_string(power) +
                            ", so the kernel is unbounded at x = 0");
  double k0 = kern.k_scale();
  while (std::abs(kern.scaled_symbol(k0, 0.0)) < kTailArgument) k0 *= 2.0;
  Accumulator acc = ray_integral(kern, 0.0, 0.0, k0, target_abs, cfg);
  const quad::Result tail = algebraic_tail(kern, k0, std::max(0.1 * cfg.rel_tol, 1e-14));
  acc.add(tail);
  return finish(kern, acc, 0.0, cfg);
}

GreenValue green_point(const DiffusionParams& p, GreenKind kind, double x, double t, const QuadratureConfig& cfg) {
  return green_point_multi(MultiTermParams::from_single(validate(p)), kind, x, t, cfg);
}

std::vector<GridValue> green_grid(const DiffusionParams& p, GreenKind kind, const std::vector<double>& xs,
                                  double t, const QuadratureConfig& cfg) {
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1])) throw DomainViolation("grid abscissae must be strictly increasing");
  std::vector<GridValue> out(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    try {
      const GreenValue g = green_point(p, kind, xs[i], t, cfg);
      out[i].value = g.value;
      out[i].err_est = g.err_est;
    } catch (const Error& e) {
      out[i].value = std::numeric_limits<double>::quiet_NaN();
      out[i].err_est = std::numeric_limits<double>::quiet_NaN();
      out[i].error = e.what();
    }
  });
  return out;
}

GreenValue green_point_band_limited(const MultiTermParams& p, GreenKind kind, double x, double t, double k_cut,
                                    const QuadratureConfig& cfg) {
  check_inputs(p, x, t, cfg);
  if (!(k_cut > 0.0)) throw DomainViolation("k_cut must be > 0");
  const Kernel kern = make_kernel(p, kind, x, t, cfg);
  const double ax = std::abs(x);
  auto integrand = [&](double k) { return (std::exp(cplx(0.0, -ax * k)) * kern.at(k, 0.0)).real(); };
  const double panel_tol = std::max(0.1 * cfg.rel_tol, 1e-14);
  const double width = ax > 0.0 ? kPi / ax : k_cut;
  Accumulator acc;
  const double first = std::min({kern.k_scale(), width, k_cut});
  acc.add(quad::tanh_sinh(integrand, 0.0, first, panel_tol));
  for (double a = first; a < k_cut;) {
    const double b = std::min({a + std::min(a, width), k_cut});
    acc.add(quad::kronrod(integrand, a, b, panel_tol));
    a = b;
  }
  GreenValue out;
  out.value = kern.prefactor / kPi * acc.sum;
  out.err_est = kern.prefactor / kPi * acc.err;
  return out;
}

}  // namespace fracgreen
