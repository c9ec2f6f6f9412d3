// fracgreen: evaluate, compare, solve and self-test from the command line.
//
// Exit codes: 0 ok, 1 I/O, 2 invalid parameters or flags, 3 numerical
// failure, 4 comparison or self-test failure, 5 solution leaks through the
// periodic boundary.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fracgreen/errors.hpp"
#include "fracgreen/evaluate.hpp"
#include "fracgreen/io.hpp"
#include "fracgreen/moments.hpp"
#include "fracgreen/selftest.hpp"
#include "fracgreen/solver.hpp"

namespace fg = fracgreen;

namespace {

enum Exit { kOk = 0, kIo = 1, kInvalid = 2, kNumerical = 3, kMismatch = 4, kLeak = 5 };

struct GridFlags {
  double x_min = -5.0;
  double x_max = 5.0;
  int points = 101;
  double t = 1.0;
  std::string kind = "g1";
};

struct Overrides {
  std::optional<double> rel_tol;
  std::optional<double> abs_tol;
};

void add_grid_flags(CLI::App* cmd, GridFlags& g) {
  cmd->add_option("--x-min", g.x_min, "first abscissa")->capture_default_str();
  cmd->add_option("--x-max", g.x_max, "last abscissa")->capture_default_str();
  cmd->add_option("--points", g.points, "number of grid points")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--t", g.t, "time")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--kind", g.kind, "g1: initial condition, g2: instantaneous source")
      ->check(CLI::IsMember({"g1", "g2"}))
      ->capture_default_str();
}

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--rel-tol", o.rel_tol, "relative tolerance (overrides the params file)");
  cmd->add_option("--abs-tol", o.abs_tol, "absolute tolerance (overrides the params file)");
}

fg::ParamsFile load(const std::string& path, const Overrides& o) {
  fg::ParamsFile pf = fg::load_params(path);
  if (o.rel_tol) pf.cfg.rel_tol = *o.rel_tol;
  if (o.abs_tol) pf.cfg.abs_tol = *o.abs_tol;
  pf.cfg.validate();
  return pf;
}

fg::GreenKind parse_kind(const std::string& k) { return k == "g2" ? fg::GreenKind::G2 : fg::GreenKind::G1; }

bool wants_json(const std::string& format, const std::string& out) {
  if (!format.empty()) return format == "json";
  return out.size() >= 5 && out.compare(out.size() - 5, 5, ".json") == 0;
}

// Writes through `emit` to the file, or to stdout when path is empty.
template <class F>
void write_output(const std::string& path, F&& emit) {
  if (path.empty()) {
    emit(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw fg::IoError("cannot write " + path);
  emit(out);
  if (!out) throw fg::IoError("write failed: " + path);
}

int report_failed_points(const std::vector<fg::EvalRow>& rows) {
  int failed = 0;
  for (const auto& r : rows) {
    if (r.ok()) continue;
    if (failed == 0) std::cerr << "numerical failure at:\n";
    std::cerr << "  x = " << fg::format_double(r.x) << ": " << r.error << '\n';
    ++failed;
  }
  return failed;
}

int run_eval(const std::string& params, const GridFlags& g, const std::string& route_name, const std::string& out,
             const std::string& format, const Overrides& o) {
  const fg::ParamsFile pf = load(params, o);
  const fg::Route route = *fg::parse_route(route_name);
  const auto rows = fg::evaluate_grid(pf, fg::linear_grid(g.x_min, g.x_max, g.points), g.t, route, parse_kind(g.kind));
  write_output(out, [&](std::ostream& os) {
    if (wants_json(format, out))
      fg::write_rows_json(os, rows);
    else
      fg::write_rows_csv(os, rows);
  });
  return report_failed_points(rows) > 0 ? kNumerical : kOk;
}

int run_compare(const std::string& params, const GridFlags& g, const std::vector<std::string>& routes,
                const Overrides& o) {
  if (routes.size() != 2) throw fg::ConstraintViolation(std::vector<fg::Violation>{{"--routes", "expected exactly two routes, e.g. fourier,series"}});
  const auto a_route = fg::parse_route(routes[0]);
  const auto b_route = fg::parse_route(routes[1]);
  std::vector<fg::Violation> bad;
  if (!a_route) bad.push_back({"--routes", "unknown route " + routes[0]});
  if (!b_route) bad.push_back({"--routes", "unknown route " + routes[1]});
  if (!bad.empty()) throw fg::ConstraintViolation(bad);

  const fg::ParamsFile pf = load(params, o);
  const auto xs = fg::linear_grid(g.x_min, g.x_max, g.points);
  const auto a = fg::evaluate_grid(pf, xs, g.t, *a_route, parse_kind(g.kind));
  const auto b = fg::evaluate_grid(pf, xs, g.t, *b_route, parse_kind(g.kind));
  const fg::Comparison c = fg::compare_rows(a, b, pf.cfg);
  std::cout << routes[0] << " vs " << routes[1] << ": " << c.compared << " points compared, " << c.skipped
            << " skipped (route not applicable or failed)\n";
  if (c.compared == 0) {
    std::cout << "nothing to compare\n";
    return kMismatch;
  }
  std::cout << "max relative deviation  " << fg::format_double(c.max_rel) << " at x = " << fg::format_double(c.worst_x)
            << '\n';
  std::cout << "mean relative deviation " << fg::format_double(c.mean_rel) << '\n';
  std::cout << "points beyond the combined error estimates: " << c.exceeding << '\n';
  return c.exceeding == 0 ? kOk : kMismatch;
}

int run_moments(const std::string& params, double delta, double t, const std::string& method, const Overrides& o) {
  const fg::ParamsFile pf = load(params, o);
  const auto p = pf.single();
  if (!p) throw fg::ConstraintViolation(std::vector<fg::Violation>{{"terms", "moments need single-term parameters"}});
  std::optional<fg::MomentResult> closed;
  std::optional<fg::GreenValue> numeric;
  if (method != "numeric") closed = fg::moment_closed(*p, delta, t);
  if (method != "closed") numeric = fg::moment_numeric(*p, delta, t, pf.cfg);
  if (closed) std::cout << "closed   " << fg::format_double(closed->value) << '\n';
  if (numeric)
    std::cout << "numeric  " << fg::format_double(numeric->value) << "  err_est " << fg::format_double(numeric->err_est)
              << '\n';
  if (closed && numeric) {
    const double rel = std::abs(closed->value - numeric->value) / std::abs(numeric->value);
    std::cout << "relative difference " << fg::format_double(rel) << '\n';
  }
  if (closed && closed->unverified_asymmetric)
    std::cout << "unverified-asymmetric: theta != 0, the closed form treats both half-lines alike\n";
  return kOk;
}

int run_solve(const std::string& params, const std::string& n0_path, const std::string& phi_path, double t,
              const std::string& out, const std::string& format, const Overrides& o) {
  const fg::ParamsFile pf = load(params, o);
  const fg::SampledField n0 = fg::load_field(n0_path);
  std::optional<fg::SourceField> phi;
  if (!phi_path.empty()) phi = fg::load_source(phi_path);
  const fg::SampledField u = fg::solve(pf.as_multi(), n0, phi, t, pf.cfg);
  write_output(out, [&](std::ostream& os) {
    if (wants_json(format, out))
      fg::write_field_json(os, u);
    else
      fg::write_field_csv(os, u);
  });
  return kOk;
}

int run_selftest(const std::string& level) {
  const auto checks = fg::run_selftest(level == "full" ? fg::Level::Full : fg::Level::Quick);
  std::cout << fg::format_report(checks);
  for (const auto& c : checks)
    if (!c.pass) return kMismatch;
  return kOk;
}

void print_violations(const fg::ConstraintViolation& e) {
  std::cerr << "invalid input:\n";
  for (const auto& v : e.violations()) std::cerr << "  " << v.field << ": " << v.bound << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Green functions and solutions of space-time fractional diffusion"};
  app.require_subcommand(1);

  GridFlags grid;
  Overrides over;
  std::string params, route = "auto", out, format, method = "both", n0_path, phi_path, level = "quick";
  std::vector<std::string> routes;
  double delta = 0.0, t = 1.0;

  auto* eval = app.add_subcommand("eval", "density on a grid: x,value,err_est,route_tag");
  eval->add_option("params", params, "JSON parameter file")->required();
  add_grid_flags(eval, grid);
  eval->add_option("--route", route, "evaluation route")
      ->check(CLI::IsMember({"auto", "fourier", "series", "mellin", "closed"}))
      ->capture_default_str();
  eval->add_option("--out", out, "output file (default stdout)");
  eval->add_option("--format", format, "csv or json (default: from --out, else csv)")->check(CLI::IsMember({"csv", "json"}));
  add_overrides(eval, over);

  auto* compare = app.add_subcommand("compare", "deviation between two routes on a grid");
  compare->add_option("params", params, "JSON parameter file")->required();
  compare->add_option("--routes", routes, "two routes, comma separated")->delimiter(',')->required();
  add_grid_flags(compare, grid);
  add_overrides(compare, over);

  auto* moments = app.add_subcommand("moments", "fractional moment <|x|^delta>");
  moments->add_option("params", params, "JSON parameter file")->required();
  moments->add_option("--delta", delta, "moment order")->required();
  moments->add_option("--t", t, "time")->check(CLI::PositiveNumber)->capture_default_str();
  moments->add_option("--method", method, "closed, numeric or both")
      ->check(CLI::IsMember({"closed", "numeric", "both"}))
      ->capture_default_str();
  add_overrides(moments, over);

  auto* solve = app.add_subcommand("solve", "solution on a periodic grid from initial data and a source");
  solve->add_option("params", params, "JSON parameter file")->required();
  solve->add_option("--n0", n0_path, "initial data (CSV x,value or JSON)")->required();
  solve->add_option("--phi", phi_path, "source slices (JSON)");
  solve->add_option("--t", t, "time")->check(CLI::PositiveNumber)->capture_default_str();
  solve->add_option("--out", out, "output file (default stdout)");
  solve->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  add_overrides(solve, over);

  auto* selftest = app.add_subcommand("selftest", "run the invariant suites and print a pass/fail table");
  selftest->add_option("--level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*eval) return run_eval(params, grid, route, out, format, over);
    if (*compare) return run_compare(params, grid, routes, over);
    if (*moments) return run_moments(params, delta, t, method, over);
    if (*solve) return run_solve(params, n0_path, phi_path, t, out, format, over);
    if (*selftest) return run_selftest(level);
  } catch (const fg::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const fg::ConstraintViolation& e) {
    print_violations(e);
    return kInvalid;
  } catch (const fg::BoundaryLeak& e) {
    std::cerr << "boundary leak: " << e.what() << "\nleak magnitude " << fg::format_double(e.leak())
              << "; widen the grid\n";
    return kLeak;
  } catch (const fg::DomainViolation& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInvalid;
  } catch (const fg::GammaPole& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInvalid;
  } catch (const fg::NonConvergentTail& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInvalid;
  } catch (const fg::ContourInvalid& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInvalid;
  } catch (const fg::Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kInvalid;
}
