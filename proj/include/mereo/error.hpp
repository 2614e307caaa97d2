#pragma once

#include <stdexcept>
#include <string>

namespace mereo {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Syntax error with source position (1-based line/column).
class ParseError : public Error {
 public:
  ParseError(std::string msg, int line, int col)
      : Error(std::move(msg) + " at line " + std::to_string(line) + ", column " +
              std::to_string(col)),
        line_(line),
        col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

// Theory-mode violation: the universe constant in set mode, or an operation
// applied with a formula/model of the wrong mode.
class ModeError : public Error {
 public:
  using Error::Error;
};

// A resource cap was exceeded (normal-form blowup, oracle search space).
class CapError : public Error {
 public:
  using Error::Error;
};

// Bad model element, descriptor, or presentation mismatch.
class ModelError : public Error {
 public:
  using Error::Error;
};

}  // namespace mereo
