#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dagcast {

// Base of every error raised by the library. The CLI maps all of these to
// exit code 1; argument errors are reported separately with exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed network: dangling node id, self-loop, non-rooted graph.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Input outside an operation's mathematical domain (cyclic graph where a DAG
// is required, time share outside [0,1], K = 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// An enumeration or search would exceed its configured size limit.
class ResourceLimitError : public Error {
 public:
  ResourceLimitError(const std::string& what, std::uint64_t partial_count = 0)
      : Error(what), partial_count_(partial_count) {}

  std::uint64_t partial_count() const noexcept { return partial_count_; }

 private:
  std::uint64_t partial_count_;
};

// A policy invariant was broken at runtime; always signals a bug.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

// Unknown scenario or named object.
class LookupError : public Error {
 public:
  using Error::Error;
};

// Network file could not be parsed or failed validation.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace dagcast
