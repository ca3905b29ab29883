#pragma once

#include <stdexcept>
#include <string>

namespace cubealg {

enum class ErrorKind {
  ParseError,
  IoError,
  InvalidArgument,
  UnknownDimension,
  UnknownLevel,
  UnknownMember,
  UnknownMeasure,
  ValueOutsideDomain,
  LevelsNotComparable,
  OrderRequired,
  DuplicateCoordinates,
  ArityMismatch,
  SchemaMismatch,
  LevelMismatch,
  DimensionMismatch,
  IncompatibleSchemas,
  MaterializationCap,
  TheoremNotSatisfied,
  NotUsable,
  StaleResult,
  ValidationFailed,
};

const char* errorKindName(ErrorKind kind);

// Single exception type for the whole library; `kind` carries the error
// category so callers (and the CLI) can branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(errorKindName(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace cubealg
