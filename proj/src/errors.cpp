#include "fracgreen/errors.hpp"

#include <sstream>

namespace fracgreen {

namespace {

std::string describe(const std::vector<Violation>& violations) {
  std::ostringstream os;
  os << "invalid parameters:";
  for (const auto& v : violations) os << " [" << v.field << ": " << v.bound << "]";
  return os.str();
}

std::string with_value(const std::string& what, double value) {
  std::ostringstream os;
  os.precision(3);
  os << what << " (" << std::scientific << value << ")";
  return os.str();
}

}  // namespace

ConstraintViolation::ConstraintViolation(std::vector<Violation> violations)
    : Error(describe(violations)), violations_(std::move(violations)) {}

ToleranceNotMet::ToleranceNotMet(const std::string& where, double achieved)
    : Error(with_value(where + ": tolerance not met, achieved", achieved)), achieved_(achieved) {}

ImaginaryResidueTooLarge::ImaginaryResidueTooLarge(double residue)
    : Error(with_value("imaginary residue of inverse Fourier integral too large", residue)),
      residue_(residue) {}

BoundaryLeak::BoundaryLeak(double leak)
    : Error(with_value("solution leaks through the periodic boundary, edge magnitude", leak)),
      leak_(leak) {}

}  // namespace fracgreen
