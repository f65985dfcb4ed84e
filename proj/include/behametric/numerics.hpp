#pragma once

#include <charconv>
#include <cmath>
#include <compare>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "behametric/errors.hpp"
#include "behametric/rational.hpp"

namespace behametric {

/// The maximal distance ⊤ ∈ (0, ∞].
class TopBound {
 public:
  static TopBound infinite() { return TopBound(); }
  static TopBound finite(Rational q) {
    if (sgn(q) <= 0) throw ConfigurationError("top bound must be strictly positive, got " + behametric::to_string(q));
    TopBound t;
    t.finite_ = std::move(q);
    return t;
  }

  bool is_infinite() const noexcept { return !finite_.has_value(); }
  const Rational& finite_value() const {
    if (!finite_) throw ConfigurationError("top bound is infinite");
    return *finite_;
  }

  std::string to_string() const { return finite_ ? behametric::to_string(*finite_) : "inf"; }

  friend bool operator==(const TopBound& a, const TopBound& b) {
    if (a.is_infinite() || b.is_infinite()) return a.is_infinite() == b.is_infinite();
    return *a.finite_ == *b.finite_;
  }

 private:
  TopBound() = default;
  std::optional<Rational> finite_;
};

/// Exact rationals or floats with a comparison tolerance.
class NumericMode {
 public:
  static NumericMode exact() { return NumericMode(0.0); }
  static NumericMode floating(double tolerance = 1e-9) {
    if (!(tolerance > 0)) throw ConfigurationError("float mode needs a positive tolerance");
    return NumericMode(tolerance);
  }

  bool is_exact() const noexcept { return tolerance_ == 0.0; }
  double tolerance() const noexcept { return tolerance_; }
  std::string name() const { return is_exact() ? "exact" : "float"; }

  friend bool operator==(const NumericMode&, const NumericMode&) = default;

 private:
  explicit NumericMode(double tolerance) : tolerance_(tolerance) {}
  double tolerance_;
};

/// An element of [0, ∞]: an exact rational, a finite float, or infinity.
///
/// Exact values stay exact under +, ·, max and min with other exact values.
/// A float operand makes the result a float; in exact mode a float value marks
/// an irrational intermediate (a p-th root that is not a perfect power).
class Value {
 public:
  Value() : repr_(Rational(0)) {}
  Value(Rational q) : repr_(std::move(q)) {  // NOLINT(google-explicit-constructor)
    std::get<Rational>(repr_).canonicalize();
    if (sgn(std::get<Rational>(repr_)) < 0) throw ConfigurationError("negative value " + behametric::to_string(std::get<Rational>(repr_)));
  }
  Value(long n) : Value(Rational(n)) {}  // NOLINT(google-explicit-constructor)
  Value(int n) : Value(Rational(n)) {}   // NOLINT(google-explicit-constructor)

  static Value infinity() {
    Value v;
    v.repr_ = Infinite{};
    return v;
  }

  static Value approx(double x) {
    if (std::isinf(x) && x > 0) return infinity();
    if (!(x >= 0) || !std::isfinite(x)) throw ConfigurationError("invalid float value " + std::to_string(x));
    Value v;
    v.repr_ = x;
    return v;
  }

  /// Exact in exact mode, rounded to double in float mode.
  static Value in_mode(const Rational& q, const NumericMode& mode) {
    return mode.is_exact() ? Value(q) : approx(q.get_d());
  }

  static Value top(const TopBound& t) { return t.is_infinite() ? infinity() : Value(t.finite_value()); }

  bool is_infinite() const noexcept { return std::holds_alternative<Infinite>(repr_); }
  bool is_finite() const noexcept { return !is_infinite(); }
  /// True for exact rationals and for infinity.
  bool is_exact() const noexcept { return !std::holds_alternative<double>(repr_); }
  bool is_zero() const noexcept {
    if (auto q = std::get_if<Rational>(&repr_)) return sgn(*q) == 0;
    if (auto x = std::get_if<double>(&repr_)) return *x == 0.0;
    return false;
  }

  const Rational& rational() const {
    if (auto q = std::get_if<Rational>(&repr_)) return *q;
    throw ConfigurationError("value " + to_string() + " is not an exact rational");
  }

  double to_double() const {
    if (auto q = std::get_if<Rational>(&repr_)) return q->get_d();
    if (auto x = std::get_if<double>(&repr_)) return *x;
    return std::numeric_limits<double>::infinity();
  }

  /// Same number, float-backed (infinity stays infinity).
  Value to_float() const { return is_infinite() ? *this : approx(to_double()); }

  std::string to_string() const {
    if (auto q = std::get_if<Rational>(&repr_)) return behametric::to_string(*q);
    if (auto x = std::get_if<double>(&repr_)) {
      char buf[64];
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, *x);
      return std::string(buf, end);
    }
    return "inf";
  }

  friend Value operator+(const Value& a, const Value& b) {
    if (a.is_infinite() || b.is_infinite()) return infinity();
    if (a.is_exact() && b.is_exact()) return Value(a.rational() + b.rational());
    return approx(a.to_double() + b.to_double());
  }

  /// Product with the measure-theoretic convention 0·∞ = 0.
  friend Value operator*(const Value& a, const Value& b) {
    if (a.is_zero() || b.is_zero()) {
      return (a.is_exact() && b.is_exact()) ? Value() : approx(0.0);
    }
    if (a.is_infinite() || b.is_infinite()) return infinity();
    if (a.is_exact() && b.is_exact()) return Value(a.rational() * b.rational());
    return approx(a.to_double() * b.to_double());
  }

  Value& operator+=(const Value& other) { return *this = *this + other; }

  friend std::strong_ordering operator<=>(const Value& a, const Value& b) {
    if (a.is_infinite() || b.is_infinite()) {
      return static_cast<int>(a.is_infinite()) <=> static_cast<int>(b.is_infinite());
    }
    if (a.is_exact() && b.is_exact()) {
      int c = cmp(a.rational(), b.rational());
      return c <=> 0;
    }
    double x = a.to_double();
    double y = b.to_double();
    if (x < y) return std::strong_ordering::less;
    if (x > y) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  friend bool operator==(const Value& a, const Value& b) { return (a <=> b) == 0; }

 private:
  struct Infinite {};
  std::variant<Rational, double, Infinite> repr_;
};

inline Value operator""_v(const char* text, std::size_t n) {
  std::string_view s(text, n);
  if (s == "inf") return Value::infinity();
  return Value(parse_rational(s));
}

/// Parses "p/q", a decimal, a parameter expression, or "inf".
inline Value parse_value(std::string_view text, const NumericMode& mode, const Parameters& params = {}) {
  if (text == "inf" || text == "∞" || text == "infinity") return Value::infinity();
  return Value::in_mode(evaluate_expression(text, params), mode);
}

/// a − b for a ≥ b (finite b); used where the order is known.
inline Value subtract(const Value& a, const Value& b) {
  if (b.is_infinite()) throw ConfigurationError("cannot subtract infinity");
  if (a.is_infinite()) return Value::infinity();
  if (a.is_exact() && b.is_exact()) return Value(a.rational() - b.rational());
  double d = a.to_double() - b.to_double();
  return Value::approx(d < 0 ? 0.0 : d);
}

/// Euclidean distance on [0, ⊤] with d_e(x, ∞) = ∞ for finite x and d_e(∞, ∞) = 0.
inline Value dist_e(const Value& a, const Value& b) {
  if (a.is_infinite() && b.is_infinite()) return Value();
  if (a.is_infinite() || b.is_infinite()) return Value::infinity();
  return a < b ? subtract(b, a) : subtract(a, b);
}

/// Extended addition; with `clamp_to` the sum is cut at ⊤.
inline Value add_ext(const Value& a, const Value& b, const std::optional<TopBound>& clamp_to = std::nullopt) {
  Value sum = a + b;
  if (clamp_to && !clamp_to->is_infinite()) {
    Value top = Value::top(*clamp_to);
    if (top < sum) return top;
  }
  return sum;
}

inline Value sup_fin(std::span<const Value> values) {
  if (values.empty()) throw ConfigurationError("sup_fin of an empty sequence");
  const Value* best = &values.front();
  for (const Value& v : values) {
    if (*best < v) best = &v;
  }
  return *best;
}

inline Value inf_fin(std::span<const Value> values) {
  if (values.empty()) throw ConfigurationError("inf_fin of an empty sequence");
  const Value* best = &values.front();
  for (const Value& v : values) {
    if (v < *best) best = &v;
  }
  return *best;
}

inline Value min_value(const Value& a, const Value& b) { return b < a ? b : a; }
inline Value max_value(const Value& a, const Value& b) { return a < b ? b : a; }

/// x^p for a positive integer p.
inline Value power(const Value& x, unsigned long p) {
  if (x.is_infinite()) return x;
  if (x.is_exact()) return Value(pow(x.rational(), p));
  return Value::approx(std::pow(x.to_double(), static_cast<double>(p)));
}

/// x^(1/p): exact whenever x is a perfect p-th power of a rational,
/// otherwise a float carrying the irrational result.
inline Value root(const Value& x, unsigned long p) {
  if (x.is_infinite()) return x;
  if (x.is_exact()) {
    if (auto r = exact_root(x.rational(), p)) return Value(*r);
  }
  return Value::approx(std::pow(x.to_double(), 1.0 / static_cast<double>(p)));
}

/// Equality up to `tol` for finite values; infinities must match exactly.
inline bool approx_equal(const Value& a, const Value& b, double tol) {
  if (a.is_infinite() || b.is_infinite()) return a.is_infinite() == b.is_infinite();
  if (tol == 0.0 && a.is_exact() && b.is_exact()) return a == b;
  return std::abs(a.to_double() - b.to_double()) <= tol;
}

/// a ≤ b up to `tol`.
inline bool approx_leq(const Value& a, const Value& b, double tol) {
  if (b.is_infinite()) return true;
  if (a.is_infinite()) return false;
  if (tol == 0.0 && a.is_exact() && b.is_exact()) return a <= b;
  return a.to_double() <= b.to_double() + tol;
}

}  // namespace behametric
