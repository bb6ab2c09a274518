#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qstack {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// An instruction or gate violated a circuit invariant (bad index, arity).
class CircuitError : public Error {
  public:
    using Error::Error;
};

/// Source text could not be parsed. Line and column are 1-based.
class ParseError : public Error {
  public:
    ParseError(std::size_t line, std::size_t column, const std::string &message)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " +
                message),
          line_(line), column_(column), message_(message) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }
    [[nodiscard]] const std::string &message() const noexcept {
        return message_;
    }

  private:
    std::size_t line_;
    std::size_t column_;
    std::string message_;
};

/// A circuit uses a construct the target dialect cannot express.
class EmitError : public Error {
  public:
    EmitError(std::size_t instruction, const std::string &message)
        : Error("instruction " + std::to_string(instruction) + ": " + message),
          instruction_(instruction) {}

    [[nodiscard]] std::size_t instruction() const noexcept {
        return instruction_;
    }

  private:
    std::size_t instruction_;
};

/// ISA descriptor problems and compiler pass failures.
class CompileError : public Error {
  public:
    using Error::Error;
};

class SimulationError : public Error {
  public:
    using Error::Error;
};

} // namespace qstack
