#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rspell {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. line() is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Inconsistent or invalid configuration (bad flag values, fingerprint mismatch).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A caller broke a documented precondition (length mismatch, missing branch).
class ContractError : public Error {
 public:
  using Error::Error;
};

}  // namespace rspell
