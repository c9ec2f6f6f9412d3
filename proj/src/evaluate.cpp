#include "fracgreen/evaluate.hpp"

#include <cmath>
#include <ostream>

#include "fracgreen/errors.hpp"
#include "fracgreen/green_series.hpp"
#include "fracgreen/mellin_barnes.hpp"
#include "fracgreen/parallel.hpp"

namespace fracgreen {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

EvalRow from_series(const SeriesResult& s, double x, RouteTag tag) {
  return {x, s.value, s.truncation_bound, to_string(tag), {}};
}

EvalRow single_route(const DiffusionParams& p, const QuadratureConfig& cfg, double x, double t, Route route,
                     GreenKind kind) {
  switch (route) {
    case Route::Auto: {
      const RouteResult r = route_auto(p, x, t, cfg, kind);
      return {x, r.value, r.err_est, to_string(r.tag), {}};
    }
    case Route::Fourier: {
      const GreenValue g = green_point(p, kind, x, t, cfg);
      return {x, g.value, g.err_est, to_string(RouteTag::Fourier), {}};
    }
    case Route::Mellin: {
      const GreenValue g = mb_density(p, x, t, contour_from(cfg), cfg, kind);
      return {x, g.value, g.err_est, to_string(RouteTag::Mellin), {}};
    }
    case Route::Series: {
      const double ratio = similarity_ratio(p, x, t);
      if (ratio < 1.0) {
        const SeriesResult s = series_ascending(p, x, t, cfg.series_max_terms, kind);
        if (s.domain_ok) return from_series(s, x, RouteTag::SeriesAscending);
      } else {
        const SeriesResult s = series_descending(p, x, t, cfg.series_max_terms, kind);
        // For alpha > mu the descending expansion is only asymptotic; the
        // ascending one still converges, so keep whichever bound is tighter.
        if (p.alpha > p.mu) {
          const SeriesResult e = series_ascending_entire(p, x, t, cfg.series_max_terms, kind);
          const bool desc_better = s.domain_ok && !s.boundary && s.truncation_bound < e.truncation_bound;
          if (e.domain_ok && !desc_better) return from_series(e, x, RouteTag::SeriesAscending);
        }
        if (s.domain_ok) return from_series(s, x, RouteTag::SeriesDescending);
      }
      throw DomainViolation("no series applies at x^alpha/(eta t^mu) = " + format_double(ratio));
    }
    case Route::Closed: {
      if (p.mu == 1.0 && p.alpha == 2.0) {
        const double v = gaussian_closed(p.eta, x, t);
        return {x, v, 4.0 * kEps * v, to_string(RouteTag::ClosedGaussian), {}};
      }
      if (kind == GreenKind::G1 && p.mu == p.alpha && p.nu == 1.0 && p.eta == 1.0 && x != 0.0) {
        const double v = neutral_closed(p.alpha, p.theta, x, t);
        return {x, v, 8.0 * kEps * std::abs(v), to_string(RouteTag::ClosedNeutral), {}};
      }
      throw DomainViolation("no closed form for these parameters (Gaussian: mu = 1, alpha = 2; neutral: "
                            "mu = alpha, nu = 1, eta = 1, x != 0)");
    }
  }
  throw DomainViolation("unknown route");
}

}  // namespace

std::optional<Route> parse_route(const std::string& name) {
  if (name == "auto") return Route::Auto;
  if (name == "fourier") return Route::Fourier;
  if (name == "series") return Route::Series;
  if (name == "mellin") return Route::Mellin;
  if (name == "closed") return Route::Closed;
  return std::nullopt;
}

const char* to_string(Route route) {
  switch (route) {
    case Route::Auto:
      return "auto";
    case Route::Fourier:
      return "fourier";
    case Route::Series:
      return "series";
    case Route::Mellin:
      return "mellin";
    case Route::Closed:
      return "closed";
  }
  return "unknown";
}

std::vector<double> linear_grid(double x_min, double x_max, int n) {
  std::vector<double> xs;
  if (n <= 0) return xs;
  xs.reserve(n);
  if (n == 1) {
    xs.push_back(x_min);
    return xs;
  }
  const double step = (x_max - x_min) / (n - 1);
  for (int j = 0; j < n; ++j) xs.push_back(j == n - 1 ? x_max : x_min + j * step);
  return xs;
}

EvalRow evaluate_point(const ParamsFile& params, double x, double t, Route route, GreenKind kind) {
  if (const auto single = params.single()) return single_route(*single, params.cfg, x, t, route, kind);
  if (route != Route::Auto && route != Route::Fourier)
    throw DomainViolation(std::string("route ") + to_string(route) + " needs single-term parameters");
  const GreenValue g = green_point_multi(params.as_multi(), kind, x, t, params.cfg);
  return {x, g.value, g.err_est, to_string(RouteTag::Fourier), {}};
}

std::vector<EvalRow> evaluate_grid(const ParamsFile& params, const std::vector<double>& xs, double t, Route route,
                                   GreenKind kind) {
  std::vector<EvalRow> rows(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    try {
      rows[i] = evaluate_point(params, xs[i], t, route, kind);
    } catch (const std::exception& e) {
      rows[i] = {xs[i], std::nan(""), std::nan(""), to_string(route), e.what()};
    }
  });
  return rows;
}

void write_rows_csv(std::ostream& out, const std::vector<EvalRow>& rows) {
  out << "x,value,err_est,route_tag\n";
  for (const auto& r : rows)
    out << format_double(r.x) << ',' << format_double(r.value) << ',' << format_double(r.err_est) << ','
        << r.route_tag << '\n';
}

void write_rows_json(std::ostream& out, const std::vector<EvalRow>& rows) {
  // nan is not JSON; failed rows carry null.
  auto num = [](double v) { return std::isfinite(v) ? format_double(v) : std::string("null"); };
  out << "{\"rows\":[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out << (i ? "," : "") << "{\"x\":" << num(r.x) << ",\"value\":" << num(r.value)
        << ",\"err_est\":" << num(r.err_est) << ",\"route_tag\":\"" << r.route_tag << "\"}";
  }
  out << "]}\n";
}

Comparison compare_rows(const std::vector<EvalRow>& a, const std::vector<EvalRow>& b, const QuadratureConfig& cfg) {
  Comparison c;
  double total = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (!a[i].ok() || !b[i].ok()) {
      ++c.skipped;
      continue;
    }
    const double diff = std::abs(a[i].value - b[i].value);
    const double rel = diff / std::max(std::abs(a[i].value), cfg.abs_tol);
    if (diff > a[i].err_est + b[i].err_est) ++c.exceeding;
    if (c.compared == 0 || rel > c.max_rel) {
      c.max_rel = rel;
      c.worst_x = a[i].x;
    }
    total += rel;
    ++c.compared;
  }
  c.mean_rel = c.compared ? total / c.compared : 0.0;
  return c;
}

}  // namespace fracgreen
