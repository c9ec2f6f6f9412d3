#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include <json.hpp>

#include "fracgreen/params.hpp"
#include "fracgreen/solver.hpp"

namespace fracgreen {

/// Contents of a parameter file: either the five single-term numbers or
/// {"mu", "nu", "terms": [...]}, plus an optional "quadrature" object.
struct ParamsFile {
  std::variant<DiffusionParams, MultiTermParams> params;
  QuadratureConfig cfg;

  bool multi_term() const { return std::holds_alternative<MultiTermParams>(params); }
  /// Single-term view; a one-term multi-term file converts losslessly.
  std::optional<DiffusionParams> single() const;
  MultiTermParams as_multi() const;
};

/// Throws ConstraintViolation listing every missing, mistyped or
/// out-of-range field at once.
ParamsFile parse_params(const nlohmann::json& j);
/// Throws IoError when the file cannot be read or is not JSON.
ParamsFile load_params(const std::string& path);

/// Shortest text that reads back to the same double (17 significant digits).
std::string format_double(double v);

/// CSV with header "x,value"; x must be uniformly spaced.
SampledField read_field_csv(std::istream& in);
void write_field_csv(std::ostream& out, const SampledField& f);
/// {"x0", "dx", "values"} with every number at 17 significant digits.
void write_field_json(std::ostream& out, const SampledField& f);
nlohmann::json field_to_json(const SampledField& f);
SampledField field_from_json(const nlohmann::json& j);
/// Picks CSV or JSON by the file extension.
SampledField load_field(const std::string& path);
void save_field(const std::string& path, const SampledField& f);

/// {"times": [...], "slices": [{"x0", "dx", "values"}, ...]}
SourceField source_from_json(const nlohmann::json& j);
nlohmann::json source_to_json(const SourceField& s);
SourceField load_source(const std::string& path);

}  // namespace fracgreen
