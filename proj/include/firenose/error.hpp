#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace firenose {

// Root of every error thrown by the library. Messages are single-line so the
// CLI can forward them verbatim to stderr.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numeric precondition of an extractor or estimator is violated
// (log of a non-positive voltage, zero baseline, zero-norm input, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Shapes or dimensions disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Bad configuration or argument value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A metric whose denominator is zero. Never reported as 0.
class UndefinedMetric : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace firenose
