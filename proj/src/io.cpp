#include "fracgreen/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "fracgreen/errors.hpp"

namespace fracgreen {

namespace {

using nlohmann::json;

double number_field(const json& j, const std::string& key, const std::string& path, std::vector<Violation>& out) {
  if (!j.contains(key)) {
    out.push_back({path + key, "missing"});
    return std::nan("");
  }
  const json& v = j.at(key);
  if (!v.is_number()) {
    out.push_back({path + key, "expected a number, got " + std::string(v.type_name())});
    return std::nan("");
  }
  return v.get<double>();
}

void collect(const std::function<void()>& check, std::vector<Violation>& out) {
  try {
    check();
  } catch (const ConstraintViolation& e) {
    for (const auto& v : e.violations()) {
      // Fields already reported as missing or mistyped are not repeated.
      const bool seen = std::any_of(out.begin(), out.end(), [&](const Violation& w) { return w.field == v.field; });
      if (!seen) out.push_back(v);
    }
  }
}

std::string lower_extension(const std::string& path) {
  std::string ext = std::filesystem::path(path).extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError(path + ": " + e.what());
  }
}

double parse_number(const std::string& text, const std::string& where) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  while (first < last && std::isspace(static_cast<unsigned char>(*first))) ++first;
  while (last > first && std::isspace(static_cast<unsigned char>(last[-1]))) --last;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw IoError(where + ": not a number: '" + text + "'");
  return v;
}

}  // namespace

std::optional<DiffusionParams> ParamsFile::single() const {
  if (auto* d = std::get_if<DiffusionParams>(&params)) return *d;
  return std::get<MultiTermParams>(params).as_single();
}

MultiTermParams ParamsFile::as_multi() const {
  if (auto* d = std::get_if<DiffusionParams>(&params)) return MultiTermParams::from_single(*d);
  return std::get<MultiTermParams>(params);
}

ParamsFile parse_params(const json& j) {
  std::vector<Violation> v;
  if (!j.is_object()) throw ConstraintViolation(std::vector<Violation>{{"params", "expected a JSON object"}});
  ParamsFile out;
  const double mu = number_field(j, "mu", "", v);
  const double nu = number_field(j, "nu", "", v);
  if (j.contains("terms")) {
    MultiTermParams m;
    m.mu = mu;
    m.nu = nu;
    const json& terms = j.at("terms");
    if (!terms.is_array()) {
      v.push_back({"terms", "expected an array"});
    } else {
      for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string prefix = "terms[" + std::to_string(i) + "].";
        if (!terms[i].is_object()) {
          v.push_back({prefix.substr(0, prefix.size() - 1), "expected an object"});
          continue;
        }
        SpaceTerm s;
        s.eta = number_field(terms[i], "eta", prefix, v);
        s.alpha = number_field(terms[i], "alpha", prefix, v);
        s.theta = number_field(terms[i], "theta", prefix, v);
        m.terms.push_back(s);
      }
    }
    collect([&] { validate(m); }, v);
    out.params = m;
  } else {
    DiffusionParams p;
    p.mu = mu;
    p.nu = nu;
    p.alpha = number_field(j, "alpha", "", v);
    p.theta = number_field(j, "theta", "", v);
    p.eta = number_field(j, "eta", "", v);
    collect([&] { validate(p); }, v);
    out.params = p;
  }
  if (j.contains("quadrature")) {
    const json& q = j.at("quadrature");
    if (!q.is_object()) {
      v.push_back({"quadrature", "expected an object"});
    } else {
      QuadratureConfig& c = out.cfg;
      auto num = [&](const char* key, double& dst) {
        if (q.contains(key)) dst = number_field(q, key, "quadrature.", v);
      };
      auto integer = [&](const char* key, int& dst) {
        if (!q.contains(key)) return;
        if (!q.at(key).is_number_integer())
          v.push_back({std::string("quadrature.") + key, "expected an integer"});
        else
          dst = q.at(key).get<int>();
      };
      num("rel_tol", c.rel_tol);
      num("abs_tol", c.abs_tol);
      num("k_max", c.k_max);
      integer("max_panels", c.max_panels);
      integer("series_max_terms", c.series_max_terms);
      double tmp = 0.0;
      if (q.contains("contour_abscissa")) {
        num("contour_abscissa", tmp);
        c.contour_abscissa = tmp;
      }
      if (q.contains("contour_height")) {
        num("contour_height", tmp);
        c.contour_height = tmp;
      }
      std::vector<Violation> qv;
      collect([&] { c.validate(); }, qv);
      for (auto& e : qv) {
        e.field = "quadrature." + e.field;
        const bool seen = std::any_of(v.begin(), v.end(), [&](const Violation& w) { return w.field == e.field; });
        if (!seen) v.push_back(e);
      }
    }
  }
  if (!v.empty()) throw ConstraintViolation(std::move(v));
  return out;
}

ParamsFile load_params(const std::string& path) { return parse_params(read_json_file(path)); }

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

SampledField read_field_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty field file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.rfind("x,value", 0) != 0) throw IoError("field CSV must start with the header x,value");
  std::vector<double> xs;
  SampledField f;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < 2) throw IoError("row " + std::to_string(row) + ": expected x,value");
    xs.push_back(parse_number(cells[0], "row " + std::to_string(row)));
    f.values.push_back(parse_number(cells[1], "row " + std::to_string(row)));
  }
  if (xs.size() < 2) throw IoError("field CSV needs at least two rows");
  f.x0 = xs.front();
  f.dx = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (std::abs(xs[j] - f.x(j)) > 1e-9 * std::max(std::abs(f.dx), 1.0) * static_cast<double>(xs.size()))
      throw IoError("field CSV: x is not uniformly spaced near row " + std::to_string(j + 2));
  }
  return f;
}

void write_field_csv(std::ostream& out, const SampledField& f) {
  out << "x,value\n";
  for (std::size_t j = 0; j < f.size(); ++j) out << format_double(f.x(j)) << ',' << format_double(f.values[j]) << '\n';
}

void write_field_json(std::ostream& out, const SampledField& f) {
  out << "{\"x0\":" << format_double(f.x0) << ",\"dx\":" << format_double(f.dx) << ",\"values\":[";
  for (std::size_t j = 0; j < f.size(); ++j) out << (j ? "," : "") << format_double(f.values[j]);
  out << "]}\n";
}

json field_to_json(const SampledField& f) { return json{{"x0", f.x0}, {"dx", f.dx}, {"values", f.values}}; }

SampledField field_from_json(const json& j) {
  try {
    SampledField f;
    f.x0 = j.at("x0").get<double>();
    f.dx = j.at("dx").get<double>();
    f.values = j.at("values").get<std::vector<double>>();
    return f;
  } catch (const json::exception& e) {
    throw IoError(std::string("field JSON: ") + e.what());
  }
}

SampledField load_field(const std::string& path) {
  if (lower_extension(path) == ".json") return field_from_json(read_json_file(path));
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_field_csv(in);
}

void save_field(const std::string& path, const SampledField& f) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  if (lower_extension(path) == ".json")
    write_field_json(out, f);
  else
    write_field_csv(out, f);
  if (!out) throw IoError("write failed: " + path);
}

SourceField source_from_json(const json& j) {
  SourceField s;
  try {
    s.times = j.at("times").get<std::vector<double>>();
    for (const auto& slice : j.at("slices")) s.slices.push_back(field_from_json(slice));
  } catch (const json::exception& e) {
    throw IoError(std::string("source JSON: ") + e.what());
  }
  return s;
}

json source_to_json(const SourceField& s) {
  json slices = json::array();
  for (const auto& f : s.slices) slices.push_back(field_to_json(f));
  return json{{"times", s.times}, {"slices", slices}};
}

SourceField load_source(const std::string& path) { return source_from_json(read_json_file(path)); }

}  // namespace fracgreen
