#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fracgreen/io.hpp"
#include "fracgreen/solver.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string output;  // stdout and stderr
};

Run run(const std::string& args) {
  const std::string cmd = std::string(FRACGREEN_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& name) { return std::string(FRACGREEN_TEST_DATA) + "/" + name; }

fs::path scratch(const std::string& name) { return fs::temp_directory_path() / ("fracgreen_cli_" + name); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("eval with the closed route") {
  const Run r = run("eval " + data("gaussian.json") + " --route closed --points 11");
  CHECK(r.code == 0);
  CHECK(contains(r.output, "x,value,err_est,route_tag\n"));
  CHECK(contains(r.output, "0,0.28209479177387814,"));
  CHECK(contains(r.output, "closed_gaussian"));
}

TEST_CASE("eval auto shows the route switch") {
  const Run r = run("eval " + data("skewed.json") + " --points 21");
  CHECK(r.code == 0);
  CHECK(contains(r.output, "series_ascending"));
  CHECK(contains(r.output, "fourier"));
}

TEST_CASE("eval json output") {
  const auto out = scratch("rows.json");
  const Run r = run("eval " + data("skewed.json") + " --points 5 --out " + out.string());
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(slurp(out));
  CHECK(j["rows"].size() == 5);
  CHECK(j["rows"][2].contains("route_tag"));
  fs::remove(out);
}

TEST_CASE("malformed params list every violation") {
  const Run r = run("eval " + data("malformed.json"));
  CHECK(r.code == 2);
  for (const char* field : {"mu", "alpha", "theta", "quadrature.rel_tol"}) CHECK(contains(r.output, field));
}

TEST_CASE("bad flags and missing files") {
  CHECK(run("eval " + data("gaussian.json") + " --points 0").code == 2);
  CHECK(run("eval " + data("gaussian.json") + " --route laplace").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("eval " + data("no_such_file.json")).code == 1);
}

TEST_CASE("numerical failures name the failing abscissa") {
  const Run r = run("eval " + data("skewed.json") + " --route series --x-min -1 --x-max 1 --points 3");
  CHECK(r.code == 3);
  CHECK(contains(r.output, "x = 0"));
}

TEST_CASE("compare agreeing routes") {
  const Run a = run("compare " + data("skewed.json") + " --routes fourier,series --x-min 0.05 --x-max 1 --points 20");
  CHECK(a.code == 0);
  CHECK(contains(a.output, "20 points compared"));
  const Run b = run("compare " + data("neutral.json") + " --routes fourier,mellin --points 40");
  CHECK(b.code == 0);
}

TEST_CASE("compare with a loosened tolerance against a tight oracle fails") {
  const Run r = run("compare " + data("gaussian.json") + " --routes closed,mellin --rel-tol 1e-2");
  CHECK(r.code == 4);
  CHECK(contains(r.output, "beyond the combined error estimates"));
}

TEST_CASE("moments") {
  const Run g = run("moments " + data("gaussian.json") + " --delta -0.5");
  CHECK(g.code == 0);
  CHECK(contains(g.output, "closed   1.44640908463207"));
  CHECK(contains(g.output, "numeric  1.44640908463207"));
  CHECK_FALSE(contains(g.output, "unverified-asymmetric"));
  const Run s = run("moments " + data("skewed.json") + " --delta -0.25 --method both");
  CHECK(s.code == 0);
  CHECK(contains(s.output, "relative difference"));
  CHECK(contains(s.output, "unverified-asymmetric"));
  CHECK(run("moments " + data("gaussian.json") + " --delta -2").code == 2);
}

TEST_CASE("solve with delta data matches the closed form") {
  const auto n0 = scratch("delta.csv");
  const auto out = scratch("solved.csv");
  fracgreen::SampledField delta = fracgreen::discrete_delta(1024, 0.1);
  fracgreen::save_field(n0.string(), delta);
  const Run r = run("solve " + data("gaussian.json") + " --n0 " + n0.string() + " --t 1 --out " + out.string());
  REQUIRE(r.code == 0);
  const fracgreen::SampledField u = fracgreen::load_field(out.string());
  double worst = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double x = u.x(j);
    if (std::abs(x) <= 5.0) worst = std::max(worst, std::abs(u.values[j] - std::exp(-x * x / 4.0) / std::sqrt(4.0 * M_PI)));
  }
  CHECK(worst <= 1e-6);
  fs::remove(n0);
  fs::remove(out);
}

TEST_CASE("solve on a grid that is too narrow") {
  const auto n0 = scratch("narrow.csv");
  fracgreen::save_field(n0.string(), fracgreen::discrete_delta(128, 0.1));
  const Run r = run("solve " + data("levy.json") + " --n0 " + n0.string());
  CHECK(r.code == 5);
  CHECK(contains(r.output, "leak magnitude"));
  fs::remove(n0);
}

TEST_CASE("multi-term files") {
  const auto n0 = scratch("wide.csv");
  fracgreen::save_field(n0.string(), fracgreen::discrete_delta(4096, 0.1));
  const Run two = run("solve " + data("two_terms.json") + " --n0 " + n0.string() + " --abs-tol 1e-7");
  CHECK(two.code == 0);
  const Run one = run("solve " + data("one_term.json") + " --n0 " + n0.string() + " --abs-tol 1e-7");
  const Run single = run("solve " + data("single_term.json") + " --n0 " + n0.string() + " --abs-tol 1e-7");
  CHECK(one.code == 0);
  CHECK(one.output == single.output);
  fs::remove(n0);
}
