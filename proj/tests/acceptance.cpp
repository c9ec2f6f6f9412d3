// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Exit status is 0 only when every criterion passes.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "fracgreen/selftest.hpp"

using namespace fracgreen;

namespace {

struct Line {
  int id;
  std::string name;
  bool pass;
  std::vector<std::string> notes;
};

template <class F>
double seconds(F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  body();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const Check* find(const std::vector<Check>& checks, int id) {
  for (const auto& c : checks)
    if (c.id == id) return &c;
  return nullptr;
}

}  // namespace

int main() {
  // Runtime budgets are measured on standalone runs of the two timed criteria.
  Check gaussian, cross;
  const double t_gaussian = seconds([&] { gaussian = check_gaussian(Level::Full); });
  const double t_cross = seconds([&] { cross = check_cross_routes(Level::Full); });

  std::vector<Check> first, second;
  const double t_first = seconds([&] { first = run_selftest(Level::Full); });
  second = run_selftest(Level::Full);
  const std::string report_a = format_report(first);
  const std::string report_b = format_report(second);

  std::vector<Line> lines;
  for (int id = 1; id <= 9; ++id) {
    const Check* c = find(first, id);
    Line l{id, c ? c->name : "missing", c && c->pass, c ? c->notes : std::vector<std::string>{}};
    if (id == 1) {
      l.pass = l.pass && gaussian.pass && t_gaussian < 30.0;
      char buf[64];
      std::snprintf(buf, sizeof buf, "runtime %.1f s (budget 30 s)", t_gaussian);
      l.notes.push_back(buf);
    }
    if (id == 3) {
      l.pass = l.pass && cross.pass && t_cross < 300.0;
      char buf[64];
      std::snprintf(buf, sizeof buf, "runtime %.1f s (budget 300 s)", t_cross);
      l.notes.push_back(buf);
    }
    lines.push_back(l);
  }
  const Check* det = find(first, 10);
  Line l10{10, "determinism", det && det->pass && report_a == report_b, det ? det->notes : std::vector<std::string>{}};
  l10.notes.push_back(std::string("two full self-test reports: ") + (report_a == report_b ? "byte-identical" : "DIFFERENT"));
  lines.push_back(l10);

  bool all = true;
  for (const auto& l : lines) {
    std::printf("criterion %2d  %s  %s\n", l.id, l.pass ? "PASS" : "FAIL", l.name.c_str());
    for (const auto& n : l.notes) std::printf("                    %s\n", n.c_str());
    all = all && l.pass;
  }
  std::printf("full self-test: %.1f s per run\n", t_first);
  std::printf("%s\n", all ? "all criteria passed" : "some criteria FAILED");
  return all ? 0 : 1;
}
