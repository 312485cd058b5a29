#ifndef BCNQ_ERROR_HPP
#define BCNQ_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bcnq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Shapes or indices do not fit the operation.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// Malformed input file or table. `line` is 1-based, 0 when unknown.
class ParseError : public Error {
public:
  ParseError(const std::string& detail, std::size_t line = 0, const std::string& source = {})
      : Error((source.empty() ? "" : source + ": ") +
              (line == 0 ? "" : "line " + std::to_string(line) + ": ") + detail),
        detail_(detail), line_(line) {}

  const std::string& detail() const noexcept { return detail_; }
  std::size_t line() const noexcept { return line_; }

private:
  std::string detail_;
  std::size_t line_;
};

/// Witness of a block whose image under one input is split across blocks:
/// states `a` and `b` share a block but step(a,u) and step(b,u) do not.
struct CongruenceWitness {
  std::size_t input = 0;
  std::size_t a = 0;
  std::size_t b = 0;
};

class CongruenceViolation : public Error {
public:
  explicit CongruenceViolation(const CongruenceWitness& w)
      : Error("partition violates the congruence condition: input " +
              std::to_string(w.input) + " sends states " + std::to_string(w.a) +
              " and " + std::to_string(w.b) + " into different blocks"),
        witness_(w) {}

  const CongruenceWitness& witness() const noexcept { return witness_; }

private:
  CongruenceWitness witness_;
};

/// A cost function is not constant on some class of the projecting partition.
class IllDefinedCost : public Error {
public:
  using Error::Error;
};

} // namespace bcnq

#endif
