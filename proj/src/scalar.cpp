#include "refrec/scalar.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

#include "refrec/errors.hpp"

namespace refrec {

Rational::Rational(long num, long den) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-' || den[0] == '+') {
    throw Error(ErrorCode::ParseError, "malformed rational '" + std::string(text) + "'");
  }
  mpz_class n(std::string(num[0] == '+' ? num.substr(1) : num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
  mpq_class q(n, d);
  q.canonicalize();
  return Rational(std::move(q));
}

Rational Rational::inverse() const {
  if (is_zero()) throw std::domain_error("Rational: inverse of zero");
  return Rational(mpq_class(1 / q_));
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("Rational: division by zero");
  q_ /= o.q_;
  return *this;
}

std::string format_double(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string FieldTraits<Complex>::format(const Complex& x) {
  std::string out = format_double(x.real());
  const double im = x.imag() == 0.0 ? 0.0 : x.imag();
  if (im < 0) {
    out += "-" + format_double(-im);
  } else {
    out += "+" + format_double(im);
  }
  return out + "i";
}

Complex parse_complex(std::string_view text) {
  // Inverse of FieldTraits<Complex>::format; also accepts a bare real.
  auto parse_real = [&](std::string_view s) {
    double v = 0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end) {
      throw Error(ErrorCode::ParseError, "malformed number '" + std::string(text) + "'");
    }
    return v;
  };
  if (text.empty()) throw Error(ErrorCode::ParseError, "empty complex literal");
  if (text.back() != 'i') return {parse_real(text), 0.0};
  const std::string_view body = text.substr(0, text.size() - 1);
  // split at the last sign that is not the leading one and not part of an exponent
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      const double re = parse_real(body.substr(0, i));
      std::string_view ims = body.substr(i + 1);
      const double im = parse_real(ims);
      return {re, body[i] == '-' ? -im : im};
    }
  }
  return {0.0, parse_real(body)};
}

}  // namespace refrec
