#pragma once

#include <stdexcept>
#include <string>

namespace compeval {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or invalid input documents (descriptors, logs, traces, reports).
// CLI exit class 2.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

// Violated metric preconditions (missing fields, zero denominators,
// empty logs, invalid thresholds). CLI exit class 3.
class MetricError : public Error {
 public:
  explicit MetricError(const std::string& msg) : Error(msg) {}
};

// Filesystem and I/O failures. CLI exit class 4.
class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace compeval
