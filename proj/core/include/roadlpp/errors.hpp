#pragma once

#include <stdexcept>
#include <string>

namespace roadlpp {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid argument values (bad angles, nonpositive scales, malformed config).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Point or cell outside the region/grid it is queried against.
class BoundsError : public Error {
 public:
  using Error::Error;
};

/// Requested allocation exceeds the configured memory budget.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Backtracking hit an exact tie under the strict tie policy.
class TieError : public Error {
 public:
  using Error::Error;
};

/// Simulation box too small to decide a geodesic; message lists offending starts.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Directed geodesic does not reach the requested line.
class HorizonError : public Error {
 public:
  using Error::Error;
};

/// Scale parameter below the minimum the estimator supports.
class ScaleError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; message carries a line number where known.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Input table is missing mandatory columns.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Destination unreachable in the terrain graph.
class NoPathError : public Error {
 public:
  using Error::Error;
};

/// Run configuration failed validation before any work started.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace roadlpp
