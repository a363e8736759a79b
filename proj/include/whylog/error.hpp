#pragma once

#include <stdexcept>
#include <string>

namespace whylog {

// Base class for all whylog errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed concrete syntax in formulas, terms, model files or proof files.
struct ParseError : Error {
  ParseError(int line, int col, const std::string& what)
      : Error("syntax error at " + std::to_string(line) + ":" + std::to_string(col) + ": " + what),
        line(line),
        col(col) {}

  int line;
  int col;
};

// Structurally well-formed input that violates a model or proof constraint.
struct ValidationError : Error {
  using Error::Error;
};

// A formula was queried outside the table/model universe.
struct UniverseError : Error {
  using Error::Error;
};

// A configured resource cap was exceeded (tautology atoms, oracle term count).
struct ResourceError : Error {
  using Error::Error;
};

// Operation undefined for the requested semantics (e.g. conditional Ky under JL).
struct UnsupportedError : Error {
  using Error::Error;
};

}  // namespace whylog
