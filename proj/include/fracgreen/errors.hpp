#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fracgreen {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Violation {
  std::string field;
  std::string bound;
};

/// Raised by parameter validation; carries every violated constraint.
class ConstraintViolation : public Error {
 public:
  explicit ConstraintViolation(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// A numerical method could not reach the requested tolerance.
class ToleranceNotMet : public Error {
 public:
  ToleranceNotMet(const std::string& where, double achieved);
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

class PoleAtBMinusA : public Error {
 public:
  using Error::Error;
};

/// The assembled inverse Fourier integral had a non-negligible imaginary part.
class ImaginaryResidueTooLarge : public Error {
 public:
  explicit ImaginaryResidueTooLarge(double residue);
  double residue() const noexcept { return residue_; }

 private:
  double residue_;
};

class DivergentAtOrigin : public Error {
 public:
  using Error::Error;
};

class UnsupportedAtBoundary : public Error {
 public:
  using Error::Error;
};

class NonSimplePoles : public Error {
 public:
  using Error::Error;
};

class ContourInvalid : public Error {
 public:
  using Error::Error;
};

class DomainViolation : public Error {
 public:
  using Error::Error;
};

class GammaPole : public Error {
 public:
  using Error::Error;
};

class NonConvergentTail : public Error {
 public:
  using Error::Error;
};

/// A file could not be read, written or parsed.
class IoError : public Error {
 public:
  using Error::Error;
};

/// The solution does not decay towards the edges of the periodic grid.
class BoundaryLeak : public Error {
 public:
  explicit BoundaryLeak(double leak);
  double leak() const noexcept { return leak_; }

 private:
  double leak_;
};

}  // namespace fracgreen
