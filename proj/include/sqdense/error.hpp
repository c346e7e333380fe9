#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace sqd {

enum class ErrorKind {
  domain,        // argument outside the operation's domain (n = 0, zero modulus, ...)
  parse,         // malformed polynomial / field text
  precondition,  // mathematical hypothesis not met (non-squarefree input, common factor, ...)
  budget,        // enumeration or memory budget exceeded
  internal,      // consistency check between two independent routes failed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(ErrorKind::precondition, what) {}
};

class BudgetError : public Error {
 public:
  explicit BudgetError(const std::string& what) : Error(ErrorKind::budget, what) {}
};

class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error(ErrorKind::internal, what) {}
};

/// Parse failure with a 1-based position in the input text.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : Error(ErrorKind::parse, msg + " at " + std::to_string(line) + ":" + std::to_string(column)),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Default enumeration budget (number of polynomial evaluations) for brute-force loops.
inline constexpr std::uint64_t kDefaultBudget = 100'000'000;

}  // namespace sqd
