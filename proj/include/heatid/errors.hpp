#pragma once

#include <stdexcept>
#include <string>

namespace heatid {

// Base for everything thrown by this library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Invalid argument or state: out-of-domain parameter, bad invariant, misuse.
class DomainError : public Error {
public:
  using Error::Error;
};

// t_contact * sample_rate < 1: no sample would land in the contact window.
class EmptyTraceError : public DomainError {
public:
  using DomainError::DomainError;
};

// normalize_trace with t_sens0 == t_obj0.
class DegenerateNormalizationError : public DomainError {
public:
  using DomainError::DomainError;
};

// A series or iteration failed to converge within its budget.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, double partial_sum, long terms)
      : Error(what + " (partial sum " + std::to_string(partial_sum) + " after " +
              std::to_string(terms) + " terms)"),
        partial_sum(partial_sum),
        terms(terms) {}

  double partial_sum;
  long terms;
};

// Adaptive quadrature could not reach the requested relative error.
class QuadratureError : public Error {
public:
  QuadratureError(const std::string& what, double achieved_rel_error)
      : Error(what + " (achieved relative error " + std::to_string(achieved_rel_error) + ")"),
        achieved_rel_error(achieved_rel_error) {}

  double achieved_rel_error;
};

// Malformed input file; line/column are 1-based.
class ParseError : public Error {
public:
  ParseError(const std::string& what, long line, long column)
      : Error(what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
        line(line),
        column(column) {}

  long line;
  long column;
};

// Structurally valid input with inconsistent content; subject names the record.
class ValidationError : public Error {
public:
  ValidationError(const std::string& subject, const std::string& reason)
      : Error(subject + ": " + reason), subject(subject) {}

  std::string subject;
};

// Operands whose sizes must agree do not.
class DimensionError : public Error {
public:
  using Error::Error;
};

// Material effusivity range does not intersect the evaluation grid.
class RangeError : public Error {
public:
  using Error::Error;
};

// A cross-validation fold would contain a single class.
class StratificationError : public Error {
public:
  using Error::Error;
};

// Filesystem / format failure while reading or writing artifacts.
class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace heatid
