#pragma once

#include <stdexcept>
#include <string>

namespace subdiv {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad or inconsistent input: files, configs, arguments.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Text that could not be parsed. The message is prefixed with the line.
class ParseError : public InputError {
 public:
  ParseError(int line, const std::string& msg)
      : InputError("line " + std::to_string(line) + ": " + msg), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public InputError {
 public:
  using InputError::InputError;
};

/// No color left for a vertex; the palette is too small for the graph.
class PaletteExhausted : public InputError {
 public:
  using InputError::InputError;
};

/// An algorithm broke one of its own guarantees (e.g. a round cap was hit).
class AlgorithmError : public Error {
 public:
  using Error::Error;
};

}  // namespace subdiv
