#ifndef RTCLAB_COMMON_ERRORS_H_
#define RTCLAB_COMMON_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rtclab {

// Input violates a documented invariant (bad trace, bad config, bad shape).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Text input could not be parsed. Carries the 1-based line and the field.
class ParseError : public ValidationError {
 public:
  ParseError(std::size_t line, std::string field, const std::string& what)
      : ValidationError("line " + std::to_string(line) + ", field '" + field +
                        "': " + what),
        line_(line),
        field_(std::move(field)) {}

  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

// A query outside the domain of a function (e.g. time past trace end).
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Operation called in the wrong lifecycle state (step after done, grad
// before backward).
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Non-finite value or unrecoverable numerical breakdown.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rtclab

#endif  // RTCLAB_COMMON_ERRORS_H_
