#pragma once

// Recursive-descent parser shared by the polynomial and F_q[t] text forms.
//
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' uint)?
//   atom   := int | '[' int (',' int)* ']' | identifier | '(' expr ')'
//
// The Builder supplies the value type and the semantics of each atom.

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sqdense/arith.hpp"
#include "sqdense/error.hpp"

namespace sqd::detail {

struct SourcePos {
  std::size_t line = 1;
  std::size_t column = 1;
};

template <class Builder>
class ExprParser {
 public:
  using Value = typename Builder::Value;

  ExprParser(std::string_view text, Builder& builder) : text_(text), b_(builder) {}

  Value parse() {
    skip_ws();
    if (at_end()) fail("empty expression");
    Value v = expr();
    skip_ws();
    if (!at_end()) fail(std::string("unexpected '") + text_[i_] + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    const SourcePos pos = position();
    throw ParseError(msg, pos.line, pos.column);
  }

  SourcePos position() const {
    SourcePos pos;
    for (std::size_t k = 0; k < i_ && k < text_.size(); ++k) {
      if (text_[k] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
    }
    return pos;
  }

  bool at_end() const { return i_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[i_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
  }
  bool accept(char c) {
    skip_ws();
    if (peek() == c) {
      ++i_;
      return true;
    }
    return false;
  }

  Value expr() {
    skip_ws();
    bool negate = false;
    if (peek() == '-' || peek() == '+') {
      negate = peek() == '-';
      ++i_;
    }
    Value acc = term();
    if (negate) acc = b_.neg(acc);
    for (;;) {
      skip_ws();
      const char c = peek();
      if (c != '+' && c != '-') break;
      ++i_;
      Value rhs = term();
      acc = c == '+' ? b_.add(acc, rhs) : b_.sub(acc, rhs);
    }
    return acc;
  }

  Value term() {
    Value acc = factor();
    while (accept('*')) acc = b_.mul(acc, factor());
    return acc;
  }

  Value factor() {
    Value base = atom();
    if (accept('^')) {
      skip_ws();
      if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected exponent");
      const Int e = integer();
      if (e > 1'000'000) fail("exponent too large");
      base = b_.pow(base, static_cast<unsigned>(e.get_ui()));
    }
    return base;
  }

  Int integer() {
    const std::size_t start = i_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[i_]))) ++i_;
    return Int(std::string(text_.substr(start, i_ - start)));
  }

  Value atom() {
    skip_ws();
    const SourcePos pos = position();
    const char c = peek();
    if (at_end()) fail("expected a term");
    if (std::isdigit(static_cast<unsigned char>(c))) return b_.from_int(integer(), pos);
    if (c == '(') {
      ++i_;
      Value v = expr();
      if (!accept(')')) fail("expected ')'");
      return v;
    }
    if (c == '[') {
      ++i_;
      std::vector<std::uint32_t> digits;
      do {
        skip_ws();
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected digit in tuple");
        const Int d = integer();
        if (d > 0xFFFF) fail("tuple entry too large");
        digits.push_back(static_cast<std::uint32_t>(d.get_ui()));
      } while (accept(','));
      if (!accept(']')) fail("expected ']'");
      return b_.from_tuple(digits, pos);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = i_;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(text_[i_])) || text_[i_] == '_')) ++i_;
      return b_.from_identifier(text_.substr(start, i_ - start), pos);
    }
    fail(std::string("unexpected '") + c + "'");
  }

  std::string_view text_;
  Builder& b_;
  std::size_t i_ = 0;
};

template <class Builder>
typename Builder::Value parse_expression(std::string_view text, Builder& builder) {
  return ExprParser<Builder>(text, builder).parse();
}

}  // namespace sqd::detail
