#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>

#include "tdq/errors.hpp"
#include "tdq/field.hpp"

namespace tdq {

namespace detail {

// Recursive-descent parser for scalar literals:
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' exponent)?
//   exponent:= ['+' | '-'] integer | '(' ['+' | '-'] integer ')'
//   primary := integer | identifier | '(' expr ')'
//
// Binary operators are left associative; unary minus binds looser than '^'.
template <ExactField F>
class ScalarParser {
 public:
  explicit ScalarParser(std::string_view text) : text_(text) {}

  F parse() {
    F value = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return value;
  }

 private:
  static constexpr long kMaxExponent = 100000;

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  F expr() {
    F value = term();
    while (true) {
      if (accept('+')) {
        value = value + term();
      } else if (accept('-')) {
        value = value - term();
      } else {
        return value;
      }
    }
  }

  F term() {
    F value = unary();
    while (true) {
      if (accept('*')) {
        value = value * unary();
      } else if (accept('/')) {
        const std::size_t at = pos_;
        F divisor = unary();
        if (divisor.is_zero()) throw ParseError("division by zero", at);
        value = value / divisor;
      } else {
        return value;
      }
    }
  }

  F unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  F power() {
    F base = primary();
    if (!accept('^')) return base;
    const std::size_t at = pos_;
    const long e = exponent();
    if (e < 0 && base.is_zero()) throw ParseError("division by zero", at);
    return pow(base, e);
  }

  long exponent() {
    const bool parenthesized = accept('(');
    bool negative = false;
    if (accept('-')) {
      negative = true;
    } else {
      accept('+');
    }
    skip_space();
    const mpz_class magnitude = integer_literal();
    if (magnitude > kMaxExponent) fail("exponent too large");
    if (parenthesized && !accept(')')) fail("expected ')'");
    const long e = magnitude.get_si();
    return negative ? -e : e;
  }

  mpz_class integer_literal() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0) ++pos_;
    if (start == pos_) fail("expected integer");
    return mpz_class(std::string(text_.substr(start, pos_ - start)), 10);
  }

  F primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) != 0) {
      const mpz_class v = integer_literal();
      if constexpr (std::is_same_v<F, Rational>) {
        return Rational(v);
      } else {
        return F(Rational(v));
      }
    }
    if (std::isalpha(static_cast<unsigned char>(c)) != 0) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_])) != 0) ++pos_;
      const std::string name(text_.substr(start, pos_ - start));
      if (name.size() != 1 || variable_index(name[0]) < 0) {
        throw ParseError("unknown identifier '" + name + "'", start);
      }
      if constexpr (SymbolicField<F>) {
        return F::variable(name[0]);
      } else {
        throw ParseError("identifier '" + name + "' is not allowed in the " +
                             std::string(F::backend_name()) + " backend",
                         start);
      }
    }
    if (accept('(')) {
      F value = expr();
      if (!accept(')')) fail("expected ')'");
      return value;
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a scalar literal into the field F. Throws ParseError (with the
/// byte position) on syntax errors, unknown identifiers, identifiers in the
/// rational backend, and division by zero.
template <ExactField F>
F parse_scalar(std::string_view text) {
  return detail::ScalarParser<F>(text).parse();
}

}  // namespace tdq
