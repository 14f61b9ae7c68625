#pragma once

#include <stdexcept>
#include <string>

namespace pdperm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (CSV/JSON). Messages name the offending line where known.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Input that parses but violates a domain invariant (birth > death, bad group sizes, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A configurable size cap was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace pdperm
