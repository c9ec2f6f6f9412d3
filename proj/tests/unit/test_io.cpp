#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "fracgreen/errors.hpp"
#include "fracgreen/io.hpp"

using namespace fracgreen;
using nlohmann::json;

namespace {

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("fracgreen_test_" + name);
}

}  // namespace

TEST_CASE("single-term params file") {
  const ParamsFile pf = parse_params(json::parse(R"({"mu":0.8,"nu":0.5,"alpha":1.5,"theta":0.3,"eta":1,
                                                     "quadrature":{"rel_tol":1e-8}})"));
  REQUIRE_FALSE(pf.multi_term());
  CHECK(pf.single()->alpha == 1.5);
  CHECK(pf.cfg.rel_tol == 1e-8);
  CHECK(pf.as_multi().terms.size() == 1);
}

TEST_CASE("multi-term params file") {
  const ParamsFile pf = parse_params(json::parse(R"({"mu":0.9,"nu":0.5,"terms":[
      {"eta":1,"alpha":1.7,"theta":0.1},{"eta":0.3,"alpha":0.9,"theta":0}]})"));
  REQUIRE(pf.multi_term());
  CHECK_FALSE(pf.single().has_value());
  CHECK(pf.as_multi().terms[1].alpha == 0.9);
}

TEST_CASE("all problems in a params file are listed") {
  try {
    parse_params(json::parse(R"({"mu":"fast","alpha":3,"theta":0,"quadrature":{"rel_tol":-1}})"));
    FAIL("expected ConstraintViolation");
  } catch (const ConstraintViolation& e) {
    std::set<std::string> fields;
    for (const auto& v : e.violations()) fields.insert(v.field);
    CHECK(fields.count("mu"));
    CHECK(fields.count("nu"));
    CHECK(fields.count("eta"));
    CHECK(fields.count("alpha"));
    CHECK(fields.count("quadrature.rel_tol"));
  }
}

TEST_CASE("missing or broken files raise IoError") {
  CHECK_THROWS_AS(load_params("/nonexistent/params.json"), IoError);
  const auto path = scratch("broken.json");
  std::ofstream(path) << "{ not json";
  CHECK_THROWS_AS(load_params(path.string()), IoError);
  std::filesystem::remove(path);
}

TEST_CASE("doubles are printed round-trip safe") {
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300}) CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("field CSV and JSON round trips are exact") {
  SampledField f;
  f.x0 = -1.2;
  f.dx = 0.1;
  for (int j = 0; j < 24; ++j) f.values.push_back(std::exp(-0.37 * j) / 3.0);
  for (const char* name : {"field.csv", "field.json"}) {
    const auto path = scratch(name);
    save_field(path.string(), f);
    const SampledField g = load_field(path.string());
    CHECK(g.values == f.values);
    CHECK(g.dx == doctest::Approx(f.dx).epsilon(1e-14));
    CHECK(g.x0 == doctest::Approx(f.x0).epsilon(1e-14));
    std::filesystem::remove(path);
  }
}

TEST_CASE("CSV fields must be uniformly spaced") {
  std::istringstream in("x,value\n0,1\n0.1,2\n0.3,3\n0.4,4\n0.5,5\n0.6,6\n0.7,7\n0.8,8\n");
  CHECK_THROWS(read_field_csv(in));
}

TEST_CASE("source slices round trip through JSON") {
  SourceField s;
  s.times = {0.0, 0.5};
  for (int k = 0; k < 2; ++k) {
    SampledField f;
    f.x0 = -0.8;
    f.dx = 0.2;
    for (int j = 0; j < 9; ++j) f.values.push_back(k + 0.125 * j);
    s.slices.push_back(f);
  }
  const SourceField back = source_from_json(source_to_json(s));
  CHECK(back.times == s.times);
  REQUIRE(back.slices.size() == 2);
  CHECK(back.slices[1].values == s.slices[1].values);
}
