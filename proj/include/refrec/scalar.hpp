#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <compare>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>

namespace refrec {

using Index = std::int64_t;

/// Exact element of Q. Always canonical: gcd(|num|, den) = 1, den > 0, zero is 0/1.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : q_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(long num, long den);
  explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

  /// Accepts "p", "-p", "p/q" (whitespace-free). Throws Error(ParseError).
  static Rational parse(std::string_view text);

  const mpq_class& value() const { return q_; }
  mpz_class numerator() const { return q_.get_num(); }
  mpz_class denominator() const { return q_.get_den(); }

  bool is_zero() const { return sgn(q_) == 0; }
  int sign() const { return sgn(q_); }
  double to_double() const { return q_.get_d(); }
  std::string to_string() const { return q_.get_str(); }

  Rational inverse() const;

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class q_;
};

using Complex = std::complex<double>;

/// Comparison policy for inexact fields: |a - b| <= eps * (1 + max(|a|, |b|)).
struct Tolerance {
  double eps = 1e-9;
};

template <class F>
struct FieldTraits;

template <>
struct FieldTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr std::string_view name = "rational";

  static Rational zero() { return Rational(); }
  static Rational one() { return Rational(1); }
  static Rational from_rational(const Rational& q) { return q; }
  static Rational from_int(long v) { return Rational(v); }

  static bool is_exact_zero(const Rational& x) { return x.is_zero(); }
  static bool near_zero(const Rational& x, double /*scale*/, Tolerance = {}) { return x.is_zero(); }
  static bool near(const Rational& a, const Rational& b, Tolerance = {}) { return a == b; }
  static double magnitude(const Rational& x) { return std::abs(x.to_double()); }
  static std::string format(const Rational& x) { return x.to_string(); }
};

std::string format_double(double v);

template <>
struct FieldTraits<Complex> {
  static constexpr bool exact = false;
  static constexpr std::string_view name = "complex";

  static Complex zero() { return {0.0, 0.0}; }
  static Complex one() { return {1.0, 0.0}; }
  static Complex from_rational(const Rational& q) { return {q.to_double(), 0.0}; }
  static Complex from_int(long v) { return {static_cast<double>(v), 0.0}; }

  static bool is_exact_zero(const Complex& x) { return x == Complex{}; }
  /// `scale` is the magnitude of the quantities that produced x.
  static bool near_zero(const Complex& x, double scale, Tolerance tol = {}) {
    return std::abs(x) <= tol.eps * (1.0 + scale);
  }
  static bool near(const Complex& a, const Complex& b, Tolerance tol = {}) {
    return std::abs(a - b) <= tol.eps * (1.0 + std::max(std::abs(a), std::abs(b)));
  }
  static double magnitude(const Complex& x) { return std::abs(x); }
  /// "re+imi", e.g. "1.5+0i", "-2-0.25i".
  static std::string format(const Complex& x);
};

template <class F>
concept Field = requires(F a, F b) {
  { FieldTraits<F>::exact } -> std::convertible_to<bool>;
  { a + b } -> std::convertible_to<F>;
  { a - b } -> std::convertible_to<F>;
  { a * b } -> std::convertible_to<F>;
  { a / b } -> std::convertible_to<F>;
  { -a } -> std::convertible_to<F>;
  { a == b } -> std::convertible_to<bool>;
};

template <Field F>
F field_zero() { return FieldTraits<F>::zero(); }

template <Field F>
F field_one() { return FieldTraits<F>::one(); }

template <Field F>
bool is_exact_zero(const F& x) { return FieldTraits<F>::is_exact_zero(x); }

template <Field F>
double magnitude(const F& x) { return FieldTraits<F>::magnitude(x); }

template <Field F>
std::string format_scalar(const F& x) { return FieldTraits<F>::format(x); }

Complex parse_complex(std::string_view text);

}  // namespace refrec
