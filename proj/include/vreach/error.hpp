#pragma once

#include <stdexcept>
#include <string>

namespace vreach {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was applied outside its mathematical domain
/// (division by an interval containing zero, log of a negative, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An interval is too narrow to be split at a representable midpoint.
class CannotSplit : public Error {
 public:
  using Error::Error;
};

}  // namespace vreach
