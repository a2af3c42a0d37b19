#pragma once

#include <stdexcept>
#include <string>

namespace wz {

// Error categories. The CLI maps each one to exactly one exit status.
enum class ErrorKind {
  Usage,      // malformed input, bad descriptor, unsupported parameters
  Violation,  // a checked property failed
  Precision,  // precision, support bound or envelope exhausted
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

struct UsageError : Error {
  explicit UsageError(const std::string& w) : Error(ErrorKind::Usage, w) {}
};

// Non-prime p, non-monic extension polynomial, non-local ring, ...
struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error(ErrorKind::Usage, w) {}
};

struct ParseError : Error {
  ParseError(const std::string& w, size_t pos)
      : Error(ErrorKind::Usage, w + " at position " + std::to_string(pos)),
        position(pos) {}
  size_t position;
};

struct PropertyViolation : Error {
  explicit PropertyViolation(const std::string& w)
      : Error(ErrorKind::Violation, w) {}
};

struct PrecisionExhausted : Error {
  explicit PrecisionExhausted(const std::string& w)
      : Error(ErrorKind::Precision, w) {}
};

struct SupportOverflow : PrecisionExhausted {
  explicit SupportOverflow(const std::string& w) : PrecisionExhausted(w) {}
};

struct EnvelopeExceeded : PrecisionExhausted {
  explicit EnvelopeExceeded(const std::string& w) : PrecisionExhausted(w) {}
};

inline int exit_status(ErrorKind k) {
  switch (k) {
    case ErrorKind::Violation: return 1;
    case ErrorKind::Precision: return 2;
    case ErrorKind::Usage: return 3;
  }
  return 3;
}

}  // namespace wz
