#pragma once

#include <stdexcept>
#include <string>

namespace netpop {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent arguments (asymmetric matrix, size mismatch, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A TW1 table that is not strictly increasing or otherwise unusable.
class InvalidTable : public Error {
 public:
  using Error::Error;
};

/// Errors while reading files; the message names file and location.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A test or detector was asked for a configuration it does not support.
class UnsupportedConfig : public Error {
 public:
  using Error::Error;
};

}  // namespace netpop
