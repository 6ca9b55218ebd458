#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dexroute {

// Base class for every error thrown by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonPositiveReserve : public Error {
 public:
  using Error::Error;
};

class NegativeInput : public Error {
 public:
  using Error::Error;
};

// Malformed input file; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class EmptyResult : public Error {
 public:
  using Error::Error;
};

class MissingPrice : public Error {
 public:
  using Error::Error;
};

class DuplicatePool : public Error {
 public:
  using Error::Error;
};

class UnknownToken : public Error {
 public:
  using Error::Error;
};

class IsolatedSource : public Error {
 public:
  using Error::Error;
};

class NoRoute : public Error {
 public:
  using Error::Error;
};

class BrokenPath : public Error {
 public:
  using Error::Error;
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

}  // namespace dexroute
