#pragma once

#include <stdexcept>
#include <string>

namespace retinoblob {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// File exists but its contents cannot be decoded.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Inputs are well-formed but inconsistent (size mismatch, bad parameter).
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace retinoblob
