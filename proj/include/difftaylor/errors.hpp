#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace difftaylor {

// Raised when an operation is well-formed but mathematically undefined for
// its inputs: a non-unit passed to inversion, a divided-power map over a ring
// in which factorials are not invertible, a derivation applied past the
// truncation order, and so on.
class MathDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A homomorphism out of a differential polynomial ring was asked for the
// image of a symbol that its value table does not cover.
class MissingSymbolError : public std::invalid_argument {
 public:
  explicit MissingSymbolError(std::string symbol)
      : std::invalid_argument("no value given for symbol " + symbol), symbol_(std::move(symbol)) {}

  const std::string& symbol() const noexcept { return symbol_; }

 private:
  std::string symbol_;
};

// Malformed input document. `path` is a JSON pointer to the offending value.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string path, const std::string& message)
      : std::invalid_argument((path.empty() ? std::string("/") : path) + ": " + message),
        path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace difftaylor
