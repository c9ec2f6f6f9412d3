#include <doctest.h>

#include <algorithm>

#include "fracgreen/errors.hpp"
#include "fracgreen/params.hpp"

using namespace fracgreen;

namespace {

bool mentions(const ConstraintViolation& e, const std::string& field) {
  const auto& v = e.violations();
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.field == field; });
}

}  // namespace

TEST_CASE("valid parameters pass through unchanged") {
  const DiffusionParams p = validate(0.8, 0.5, 1.5, 0.3, 1.0);
  CHECK(p.mu == 0.8);
  CHECK(p.theta == 0.3);
  CHECK(p.time_order() == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(p.rho() == doctest::Approx((1.5 - 0.3) / 3.0));
  CHECK_FALSE(p.boundary());
}

TEST_CASE("every violated field is reported at once") {
  try {
    validate(1.4, -0.1, 2.5, 0.9, 0.0);
    FAIL("expected ConstraintViolation");
  } catch (const ConstraintViolation& e) {
    CHECK(mentions(e, "mu"));
    CHECK(mentions(e, "nu"));
    CHECK(mentions(e, "alpha"));
    CHECK(mentions(e, "eta"));
  }
}

TEST_CASE("skewness is limited by min(alpha, 2 - alpha)") {
  CHECK_NOTHROW(validate(1.0, 1.0, 1.5, 0.5, 1.0));
  CHECK_THROWS_AS(validate(1.0, 1.0, 1.5, 0.6, 1.0), ConstraintViolation);
  CHECK_THROWS_AS(validate(1.0, 1.0, 0.5, -0.6, 1.0), ConstraintViolation);
  CHECK(validate(1.0, 1.0, 0.5, 0.5, 1.0).boundary());
}

TEST_CASE("multi-term parameters") {
  const MultiTermParams m = validate(MultiTermParams{0.9, 0.5, {{1.0, 1.7, 0.1}, {0.3, 0.9, 0.0}}});
  CHECK(m.terms.size() == 2);
  CHECK_FALSE(m.as_single().has_value());
  const auto single = MultiTermParams::from_single(validate(0.8, 0.5, 1.5, 0.3, 2.0)).as_single();
  REQUIRE(single.has_value());
  CHECK(single->eta == 2.0);
  CHECK_THROWS_AS(validate(MultiTermParams{0.9, 0.5, {}}), ConstraintViolation);
  CHECK_THROWS_AS(validate(MultiTermParams{0.9, 0.5, {{1.0, 2.5, 0.0}}}), ConstraintViolation);
}

TEST_CASE("quadrature configuration validation") {
  QuadratureConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.rel_tol = -1.0;
  cfg.series_max_terms = 0;
  try {
    cfg.validate();
    FAIL("expected ConstraintViolation");
  } catch (const ConstraintViolation& e) {
    CHECK(e.violations().size() >= 2);
  }
}

TEST_CASE("json round trip") {
  const DiffusionParams p = validate(0.8, 0.5, 1.5, 0.3, 1.0);
  nlohmann::json j = p;
  CHECK(j.get<DiffusionParams>() == p);
  const MultiTermParams m = validate(MultiTermParams{0.9, 0.5, {{1.0, 1.7, 0.1}, {0.3, 0.9, 0.0}}});
  nlohmann::json jm = m;
  CHECK(jm.get<MultiTermParams>() == m);
}
