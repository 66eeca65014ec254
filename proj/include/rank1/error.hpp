#ifndef RANK1_ERROR_HPP
#define RANK1_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rank1 {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes or lengths that do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Input outside the domain an operation is defined on (non-symmetric,
// wrong n or d, non-finite entries).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A numerically degenerate situation: zero tensor, zero contraction,
// vanishing critical value, Newton continuation that does not converge.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace rank1

#endif  // RANK1_ERROR_HPP
