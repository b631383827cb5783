#pragma once

#include <stdexcept>
#include <string>

namespace ccn {

/// Malformed network, generator or field file. Line and column are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + what),
        line_(line),
        column_(column),
        detail_(what) {}

  int line() const { return line_; }
  int column() const { return column_; }
  /// The message without the position prefix.
  const std::string& detail() const { return detail_; }

 private:
  int line_;
  int column_;
  std::string detail_;
};

/// Structurally valid input that violates a model assumption
/// (missing identity arrow, arrow out of range, non-equivariant field ...).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical consistency check failed: tolerance misconfiguration or a
/// genuine inconsistency such as a quotient dimension outside {1, 2, 4}.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Eigenvalues of an endomorphism are too close to the zero cluster to
/// split reliably; callers retry with a different sample.
class IllSeparatedSpectrum : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// No parameter value in the requested window makes the linearization
/// singular.
class NoBifurcation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ccn
