#pragma once

#include <stdexcept>
#include <string>

namespace vcb {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input: bad indices, dimension mismatches,
// out-of-range parameters, malformed files.
class InputError : public Error {
 public:
  using Error::Error;
};

// Exhaustive enumeration requested beyond the supported node count.
class ScaleExceeded : public Error {
 public:
  using Error::Error;
};

// A method was asked to handle an event or selector combination it does
// not support.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Non-finite values encountered during a numerical procedure.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace vcb
