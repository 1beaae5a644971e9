#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rvtail {

enum class ErrorKind {
  DegeneratePoint,
  DimensionMismatch,
  EmptyMeasure,
  InvalidGain,
  MomentDivergence,
  UnsupportedPair,
  InvalidConstruction,
  EmptyInput,
  DegenerateTail,
  UnboundedGain,
  HypothesisViolation,
  InvalidArgument,
  InvalidSpec,
  Io,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegeneratePoint: return "DegeneratePoint";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::EmptyMeasure: return "EmptyMeasure";
    case ErrorKind::InvalidGain: return "InvalidGain";
    case ErrorKind::MomentDivergence: return "MomentDivergence";
    case ErrorKind::UnsupportedPair: return "UnsupportedPair";
    case ErrorKind::InvalidConstruction: return "InvalidConstruction";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::DegenerateTail: return "DegenerateTail";
    case ErrorKind::UnboundedGain: return "UnboundedGain";
    case ErrorKind::HypothesisViolation: return "HypothesisViolation";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (tests, the CLI exit-code mapping) can branch without string
/// matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace rvtail
