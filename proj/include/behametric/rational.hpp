#pragma once

#include <gmpxx.h>

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "behametric/errors.hpp"

namespace behametric {

using Rational = mpq_class;

inline std::string to_string(const Rational& q) {
  // mpq_class keeps values canonical, so "n" for integers and "p/q" otherwise.
  return q.get_str();
}

/// Exact p-th root when both numerator and denominator are perfect p-th powers.
inline std::optional<Rational> exact_root(const Rational& q, unsigned long p) {
  if (p == 0) throw ConfigurationError("root of order 0");
  if (sgn(q) < 0) return std::nullopt;
  if (p == 1) return q;
  mpz_class num, den;
  bool num_exact = mpz_root(num.get_mpz_t(), q.get_num_mpz_t(), p) != 0;
  bool den_exact = mpz_root(den.get_mpz_t(), q.get_den_mpz_t(), p) != 0;
  if (!num_exact || !den_exact) return std::nullopt;
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational pow(const Rational& q, unsigned long p) {
  Rational r(1);
  for (unsigned long i = 0; i < p; ++i) r *= q;
  return r;
}

using Parameters = std::map<std::string, Rational, std::less<>>;

namespace detail {

// Recursive-descent evaluator for the small arithmetic language used in
// documents and on the command line: rationals, decimals, named
// parameters, + - * / and parentheses. "1/2" is just a division.
class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, const Parameters& params) : text_(text), params_(params) {}

  Rational parse() {
    Rational value = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return value;
  }

 private:
  Rational expression() {
    Rational value = term();
    for (;;) {
      skip_space();
      if (accept('+')) {
        value += term();
      } else if (accept('-')) {
        value -= term();
      } else {
        return value;
      }
    }
  }

  Rational term() {
    Rational value = factor();
    for (;;) {
      skip_space();
      if (accept('*')) {
        value *= factor();
      } else if (accept('/')) {
        Rational divisor = factor();
        if (sgn(divisor) == 0) fail("division by zero");
        value /= divisor;
      } else {
        return value;
      }
    }
  }

  Rational factor() {
    skip_space();
    if (accept('-')) return -factor();
    if (accept('+')) return factor();
    if (accept('(')) {
      Rational value = expression();
      skip_space();
      if (!accept(')')) fail("missing ')'");
      return value;
    }
    if (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      return number();
    }
    if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      std::string_view name = text_.substr(start, pos_ - start);
      auto it = params_.find(name);
      if (it == params_.end()) fail("unknown parameter '" + std::string(name) + "'");
      return it->second;
    }
    fail("expected a number");
  }

  Rational number() {
    mpz_class mantissa = 0;
    mpz_class scale = 1;
    bool digits = false;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      mantissa = mantissa * 10 + (text_[pos_++] - '0');
      digits = true;
    }
    if (accept('.')) {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        mantissa = mantissa * 10 + (text_[pos_++] - '0');
        scale *= 10;
        digits = true;
      }
    }
    if (!digits) fail("malformed number");
    Rational value(mantissa, scale);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      bool negative = accept('-');
      if (!negative) accept('+');
      long exponent = 0;
      bool exp_digits = false;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        exponent = exponent * 10 + (text_[pos_++] - '0');
        exp_digits = true;
        if (exponent > 4000) fail("exponent out of range");
      }
      if (!exp_digits) fail("malformed exponent");
      mpz_class ten_pow;
      mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(exponent));
      if (negative) {
        value /= ten_pow;
      } else {
        value *= ten_pow;
      }
    }
    value.canonicalize();
    return value;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError("cannot parse '" + std::string(text_) + "': " + what);
  }

  std::string_view text_;
  const Parameters& params_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Rational evaluate_expression(std::string_view text, const Parameters& params) {
  return detail::ExpressionParser(text, params).parse();
}

inline Rational parse_rational(std::string_view text) {
  static const Parameters none;
  return evaluate_expression(text, none);
}

}  // namespace behametric
