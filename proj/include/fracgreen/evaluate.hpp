#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fracgreen/green_fourier.hpp"
#include "fracgreen/io.hpp"

namespace fracgreen {

enum class Route { Auto, Fourier, Series, Mellin, Closed };

/// Parses auto|fourier|series|mellin|closed; nullopt for anything else.
std::optional<Route> parse_route(const std::string& name);
const char* to_string(Route route);

struct EvalRow {
  double x = 0.0;
  double value = 0.0;
  double err_est = 0.0;
  std::string route_tag;
  std::string error;  // empty on success
  bool ok() const { return error.empty(); }
};

/// n points from x_min to x_max inclusive (n = 1 gives x_min).
std::vector<double> linear_grid(double x_min, double x_max, int n);

/// One route at one point. Multi-term parameters with more than one term only
/// have the Fourier route (auto maps to it). Throws on failure.
EvalRow evaluate_point(const ParamsFile& params, double x, double t, Route route, GreenKind kind);

/// evaluate_point over the grid in parallel; failures are recorded per row.
std::vector<EvalRow> evaluate_grid(const ParamsFile& params, const std::vector<double>& xs, double t, Route route,
                                   GreenKind kind);

/// Columns x,value,err_est,route_tag. Failed rows are written with value nan.
void write_rows_csv(std::ostream& out, const std::vector<EvalRow>& rows);
/// {"rows": [{"x", "value", "err_est", "route_tag"}, ...]}
void write_rows_json(std::ostream& out, const std::vector<EvalRow>& rows);

/// Deviation summary of two evaluations of the same grid.
struct Comparison {
  int compared = 0;
  int skipped = 0;  // a route failed or did not apply
  double max_rel = 0.0;
  double mean_rel = 0.0;
  double worst_x = 0.0;
  int exceeding = 0;  // points where |a - b| > err_a + err_b
};

/// Relative deviation |a - b| / |a|, with |a| floored at cfg.abs_tol.
Comparison compare_rows(const std::vector<EvalRow>& a, const std::vector<EvalRow>& b, const QuadratureConfig& cfg);

}  // namespace fracgreen
