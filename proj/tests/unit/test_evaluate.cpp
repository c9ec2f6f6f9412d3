#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "fracgreen/errors.hpp"
#include "fracgreen/evaluate.hpp"
#include "fracgreen/parallel.hpp"

using namespace fracgreen;

namespace {

ParamsFile file_of(const DiffusionParams& p) {
  ParamsFile pf;
  pf.params = p;
  return pf;
}

}  // namespace

TEST_CASE("route names") {
  CHECK(parse_route("mellin") == Route::Mellin);
  CHECK_FALSE(parse_route("laplace").has_value());
  CHECK(std::string(to_string(Route::Series)) == "series");
}

TEST_CASE("linear grid hits both ends") {
  const auto xs = linear_grid(-5.0, 5.0, 101);
  REQUIRE(xs.size() == 101);
  CHECK(xs.front() == -5.0);
  CHECK(xs.back() == 5.0);
  CHECK(xs[50] == 0.0);
}

TEST_CASE("closed route reproduces the Gaussian and tags rows") {
  const ParamsFile pf = file_of(validate(1.0, 1.0, 2.0, 0.0, 1.0));
  const EvalRow r = evaluate_point(pf, 1.0, 1.0, Route::Closed, GreenKind::G1);
  CHECK(r.ok());
  CHECK(r.route_tag == "closed_gaussian");
  CHECK(r.value == doctest::Approx(std::exp(-0.25) / std::sqrt(4.0 * M_PI)).epsilon(1e-15));
  const ParamsFile other = file_of(validate(0.8, 0.5, 1.5, 0.3, 1.0));
  CHECK_THROWS_AS(evaluate_point(other, 1.0, 1.0, Route::Closed, GreenKind::G1), DomainViolation);
}

TEST_CASE("auto route switches between series and fourier") {
  const ParamsFile pf = file_of(validate(0.8, 0.5, 1.5, 0.3, 1.0));
  const auto rows = evaluate_grid(pf, linear_grid(-5.0, 5.0, 41), 1.0, Route::Auto, GreenKind::G1);
  std::set<std::string> tags;
  for (const auto& r : rows) {
    REQUIRE(r.ok());
    CHECK(r.err_est >= 0.0);
    tags.insert(r.route_tag);
  }
  CHECK(tags.count("series_ascending"));
  CHECK(tags.size() >= 2);
}

TEST_CASE("failed points carry their error instead of aborting the grid") {
  const ParamsFile pf = file_of(validate(0.8, 0.5, 1.5, 0.3, 1.0));
  const auto rows = evaluate_grid(pf, {-1.0, 0.0, 1.0}, 1.0, Route::Mellin, GreenKind::G1);
  CHECK(rows[0].ok());
  CHECK_FALSE(rows[1].ok());
  CHECK(std::isnan(rows[1].value));
  CHECK(rows[2].ok());
}

TEST_CASE("CSV output is identical across worker counts") {
  const ParamsFile pf = file_of(validate(0.8, 0.5, 1.5, 0.3, 1.0));
  auto render = [&](unsigned workers) {
    set_worker_override(workers);
    std::ostringstream os;
    write_rows_csv(os, evaluate_grid(pf, linear_grid(-4.0, 4.0, 33), 1.0, Route::Auto, GreenKind::G1));
    set_worker_override(0);
    return os.str();
  };
  const std::string one = render(1);
  CHECK(one.rfind("x,value,err_est,route_tag\n", 0) == 0);
  CHECK(one == render(3));
}

TEST_CASE("JSON rows use null for failed values") {
  std::vector<EvalRow> rows{{0.5, 1.25, 1e-16, "fourier", {}}, {1.0, std::nan(""), std::nan(""), "mellin", "boom"}};
  std::ostringstream os;
  write_rows_json(os, rows);
  const auto j = nlohmann::json::parse(os.str());
  CHECK(j["rows"][0]["value"] == 1.25);
  CHECK(j["rows"][1]["value"].is_null());
}

TEST_CASE("comparison counts points beyond the error estimates") {
  const std::vector<EvalRow> a{{0.0, 1.0, 1e-9, "a", {}}, {1.0, 2.0, 1e-9, "a", {}}, {2.0, 3.0, 1e-9, "a", {}}};
  const std::vector<EvalRow> b{{0.0, 1.0, 1e-9, "b", {}}, {1.0, 2.0 + 1e-6, 1e-9, "b", {}}, {2.0, 0.0, 0.0, "b", "x"}};
  const Comparison c = compare_rows(a, b, {});
  CHECK(c.compared == 2);
  CHECK(c.skipped == 1);
  CHECK(c.exceeding == 1);
  CHECK(c.worst_x == 1.0);
  CHECK(c.max_rel == doctest::Approx(5e-7).epsilon(1e-6));
}
