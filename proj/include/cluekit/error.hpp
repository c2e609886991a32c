#pragma once

#include <stdexcept>
#include <string>

namespace cluekit {

// Base of every error raised by the library. The CLI maps the concrete
// kind to a process exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad JSON, bad zoo spec, bad subset syntax.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Size guard exceeded (exact engine, materialized tables, group closure).
class GuardError : public Error {
 public:
  using Error::Error;
};

// The requested ratio is undefined: zero variance, zero entropy, ...
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// Precondition violated: non-Boolean table, non-monotone input,
// unsupported measure, out-of-range coordinate.
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace cluekit
