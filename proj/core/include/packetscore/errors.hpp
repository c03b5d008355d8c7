#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace packetscore {

/// Profile construction was asked to summarize zero training periods.
struct EmptyTrainingSetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Two profiles (or a profile and a scorebook) built under different
/// bucket configurations were combined.
struct ProfileConfigMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A discard fraction fell outside [0, 1].
struct InvalidFractionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Malformed trace (or config) input. Carries the 1-based line number of
/// the offending row; line() is 0 when no line applies.
class TraceParseError : public std::runtime_error {
public:
  TraceParseError(std::size_t line, const std::string& message)
      : std::runtime_error(line == 0 ? message
                                     : "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const { return line_; }

private:
  std::size_t line_ = 0;
};

/// Trace timestamps went backwards.
class NonMonotoneTraceError : public TraceParseError {
public:
  using TraceParseError::TraceParseError;
};

}  // namespace packetscore
