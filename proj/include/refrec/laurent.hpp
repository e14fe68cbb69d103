#pragma once

// Laurent polynomials sum a_j D^j over a field, the star factorization
// P = P_* D^k, and gcd / exact division in the star-part sense.

#include <algorithm>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "refrec/errors.hpp"
#include "refrec/scalar.hpp"
#include "refrec/sequence.hpp"

namespace refrec {

template <Field F>
class LaurentPoly {
 public:
  using Terms = std::map<Index, F>;

  LaurentPoly() = default;

  static LaurentPoly monomial(F c, Index e) {
    LaurentPoly p;
    p.add_term(e, std::move(c));
    return p;
  }
  static LaurentPoly constant(F c) { return monomial(std::move(c), 0); }
  static LaurentPoly identity() { return constant(field_one<F>()); }
  /// D^e
  static LaurentPoly shift_op(Index e = 1) { return monomial(field_one<F>(), e); }

  /// Repeated exponents are summed.
  static LaurentPoly from_terms(const std::vector<std::pair<Index, F>>& terms) {
    LaurentPoly p;
    for (const auto& [e, c] : terms) p.add_term(e, c);
    return p;
  }

  /// a_0 + a_1 D + ... + a_n D^n
  static LaurentPoly from_coeffs(const std::vector<F>& a) {
    LaurentPoly p;
    for (std::size_t i = 0; i < a.size(); ++i) p.add_term(static_cast<Index>(i), a[i]);
    return p;
  }

  const Terms& terms() const { return c_; }
  bool is_zero() const { return c_.empty(); }

  F coeff(Index e) const {
    auto it = c_.find(e);
    return it == c_.end() ? field_zero<F>() : it->second;
  }

  Index deg_high() const {
    require_nonzero("deg_high");
    return c_.rbegin()->first;
  }
  Index deg_low() const {
    require_nonzero("deg_low");
    return c_.begin()->first;
  }
  /// deg_high - deg_low, the order of the recurrence it defines.
  Index span() const { return deg_high() - deg_low(); }

  F leading() const {
    require_nonzero("leading");
    return c_.rbegin()->second;
  }

  /// P(D^{-1})
  LaurentPoly conjugate() const {
    LaurentPoly p;
    for (const auto& [e, c] : c_) p.c_.emplace(-e, c);
    return p;
  }

  /// P * D^e
  LaurentPoly shifted(Index e) const {
    LaurentPoly p;
    for (const auto& [x, c] : c_) p.c_.emplace(checked_add(x, e), c);
    return p;
  }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    for (const auto& [e, c] : o.c_) add_term(e, c);
    return *this;
  }
  LaurentPoly& operator-=(const LaurentPoly& o) {
    for (const auto& [e, c] : o.c_) add_term(e, -c);
    return *this;
  }
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator-(const LaurentPoly& a) { return scaled(-field_one<F>(), a); }

  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly p;
    for (const auto& [ea, ca] : a.c_)
      for (const auto& [eb, cb] : b.c_) p.add_term(checked_add(ea, eb), ca * cb);
    return p;
  }
  friend LaurentPoly operator*(const F& s, const LaurentPoly& a) { return scaled(s, a); }

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.c_ == b.c_; }

  /// Coefficientwise comparison with the field tolerance.
  friend bool near(const LaurentPoly& a, const LaurentPoly& b, Tolerance tol = {}) {
    auto ia = a.c_.begin();
    auto ib = b.c_.begin();
    while (ia != a.c_.end() || ib != b.c_.end()) {
      if (ib == b.c_.end() || (ia != a.c_.end() && ia->first < ib->first)) {
        if (!FieldTraits<F>::near(ia->second, field_zero<F>(), tol)) return false;
        ++ia;
      } else if (ia == a.c_.end() || ib->first < ia->first) {
        if (!FieldTraits<F>::near(ib->second, field_zero<F>(), tol)) return false;
        ++ib;
      } else {
        if (!FieldTraits<F>::near(ia->second, ib->second, tol)) return false;
        ++ia, ++ib;
      }
    }
    return true;
  }

  /// result(k) = sum_j a_j u(k + j). Vector sequences are acted on componentwise.
  template <class V>
  Sequence<V> apply(const Sequence<V>& u) const {
    if (u.finitely_supported()) {
      Sequence<V> out = Sequence<V>::zero(u.dim());
      for (const auto& [e, c] : c_) out = out + scale(c, shift(u, e));
      return out;
    }
    const auto terms = c_;
    return Sequence<V>::rule(
        [terms, u](Index k) {
          auto acc = ValueTraits<V>::zero(u.dim());
          for (const auto& [e, c] : terms) acc += c * u(k + e);
          return acc;
        },
        u.dim());
  }

  /// Drops coefficients that are negligible relative to the largest one.
  /// A no-op over exact fields.
  LaurentPoly cleaned(Tolerance tol = {}) const {
    if constexpr (FieldTraits<F>::exact) {
      return *this;
    } else {
      double scale_ = 0;
      for (const auto& [e, c] : c_) scale_ = std::max(scale_, magnitude(c));
      LaurentPoly p;
      for (const auto& [e, c] : c_)
        if (magnitude(c) > tol.eps * scale_) p.c_.emplace(e, c);
      return p;
    }
  }

  /// "c*D^e" terms in descending exponent order, e.g. "1*D^2 + 7*D^1 + 1*D^0".
  std::string to_string() const {
    if (c_.empty()) return "0";
    std::string out;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      if (!out.empty()) out += " + ";
      out += format_scalar(it->second) + "*D^" + std::to_string(it->first);
    }
    return out;
  }

 private:
  static LaurentPoly scaled(const F& s, const LaurentPoly& a) {
    LaurentPoly p;
    if (is_exact_zero(s)) return p;
    for (const auto& [e, c] : a.c_) p.add_term(e, s * c);
    return p;
  }

  static Index checked_add(Index a, Index b) {
    Index r;
    if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorCode::InvalidArgument, "exponent overflow");
    return r;
  }

  void add_term(Index e, const F& c) {
    auto [it, inserted] = c_.try_emplace(e, c);
    if (!inserted) it->second += c;
    if (is_exact_zero(it->second)) c_.erase(it);
  }

  void require_nonzero(const char* what) const {
    if (c_.empty()) throw Error(ErrorCode::ZeroPolynomial, std::string(what) + " of the zero polynomial");
  }

  Terms c_;
};

template <Field F>
LaurentPoly<F> lp_add(const LaurentPoly<F>& p, const LaurentPoly<F>& q) { return p + q; }
template <Field F>
LaurentPoly<F> lp_mul(const LaurentPoly<F>& p, const LaurentPoly<F>& q) { return p * q; }
template <Field F>
LaurentPoly<F> lp_scale(const F& s, const LaurentPoly<F>& p) { return s * p; }
template <Field F>
LaurentPoly<F> lp_conjugate(const LaurentPoly<F>& p) { return p.conjugate(); }
template <Field F, class V>
Sequence<V> lp_apply(const LaurentPoly<F>& p, const Sequence<V>& u) { return p.apply(u); }

/// P = star_part * D^power with star_part(0) != 0.
template <Field F>
struct StarFactorization {
  LaurentPoly<F> star_part;
  Index power = 0;

  LaurentPoly<F> reconstruct() const { return star_part.shifted(power); }
};

template <Field F>
StarFactorization<F> psi_factor(const LaurentPoly<F>& p) {
  if (p.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "psi_factor of the zero polynomial");
  const Index k = p.deg_low();
  return {p.shifted(-k), k};
}

template <Field F>
LaurentPoly<F> psi_inverse(const StarFactorization<F>& s) { return s.reconstruct(); }

/// min if all >= 0, max if all <= 0, otherwise 0.
inline Index nu(const std::vector<Index>& ks) {
  if (ks.empty()) throw Error(ErrorCode::InvalidArgument, "nu of an empty list");
  const auto [lo, hi] = std::minmax_element(ks.begin(), ks.end());
  if (*lo >= 0) return *lo;
  if (*hi <= 0) return *hi;
  return 0;
}

template <Field F>
LaurentPoly<F> monic(const LaurentPoly<F>& p) {
  if (p.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "monic of the zero polynomial");
  return (field_one<F>() / p.leading()) * p;
}

namespace detail {

template <Field F>
void require_ordinary(const LaurentPoly<F>& p, const char* what) {
  if (!p.is_zero() && p.deg_low() < 0) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + ": negative exponent in an ordinary polynomial");
  }
}

}  // namespace detail

/// Euclidean division of ordinary polynomials: a = q*b + r, deg r < deg b.
template <Field F>
std::pair<LaurentPoly<F>, LaurentPoly<F>> poly_divmod(const LaurentPoly<F>& a, const LaurentPoly<F>& b,
                                                      Tolerance tol = {}) {
  detail::require_ordinary(a, "poly_divmod");
  detail::require_ordinary(b, "poly_divmod");
  if (b.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "division by the zero polynomial");
  LaurentPoly<F> q;
  LaurentPoly<F> r = a;
  const Index db = b.deg_high();
  const F lb = b.leading();
  // bounded by deg a - deg b + 1 steps; the guard keeps inexact fields from looping
  for (Index steps = 0; !r.is_zero() && r.deg_high() >= db; ++steps) {
    if (steps > a.deg_high() - db + 1) throw Error(ErrorCode::InexactDivision, "division did not terminate");
    const Index e = r.deg_high() - db;
    const auto t = LaurentPoly<F>::monomial(r.leading() / lb, e);
    q += t;
    const Index top = r.deg_high();
    r = r - t * b;
    if (!r.is_zero() && r.deg_high() == top) {
      // inexact cancellation of the leading term
      auto terms = r.terms();
      terms.erase(top);
      LaurentPoly<F> rr;
      for (const auto& [x, c] : terms) rr += LaurentPoly<F>::monomial(c, x);
      r = rr;
    }
  }
  return {q, r.cleaned(tol)};
}

/// Monic gcd of ordinary polynomials by Euclid's algorithm.
template <Field F>
LaurentPoly<F> gcd_star(const LaurentPoly<F>& p, const LaurentPoly<F>& q, Tolerance tol = {}) {
  detail::require_ordinary(p, "gcd_star");
  detail::require_ordinary(q, "gcd_star");
  if (p.is_zero() && q.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "gcd of two zero polynomials");
  LaurentPoly<F> a = p, b = q;
  while (!b.is_zero()) {
    auto r = poly_divmod(a, b, tol).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

namespace detail {

template <Field F>
bool proportional(const LaurentPoly<F>& a, const LaurentPoly<F>& b, Tolerance tol) {
  if (a.is_zero() || b.is_zero()) return false;
  if (a.deg_high() != b.deg_high() || a.deg_low() != b.deg_low()) return false;
  return near(monic(a), monic(b), tol);
}

}  // namespace detail

/// gcd in the Laurent sense: Psi^{-1}(gcd_star(P_*, Q_*), nu(k_P, k_Q)).
/// Over inexact fields the star gcd is monic(P_*) when the star parts are
/// proportional within tolerance and Id otherwise.
template <Field F>
LaurentPoly<F> gcd_laurent(const LaurentPoly<F>& p, const LaurentPoly<F>& q, Tolerance tol = {}) {
  if (p.is_zero() && q.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "gcd of two zero polynomials");
  std::vector<Index> ks;
  LaurentPoly<F> ps, qs;
  if (!p.is_zero()) {
    auto f = psi_factor(p);
    ps = f.star_part;
    ks.push_back(f.power);
  }
  if (!q.is_zero()) {
    auto f = psi_factor(q);
    qs = f.star_part;
    ks.push_back(f.power);
  }
  LaurentPoly<F> g;
  if constexpr (FieldTraits<F>::exact) {
    g = gcd_star(ps, qs, tol);
  } else {
    if (ps.is_zero()) {
      g = monic(qs);
    } else if (qs.is_zero() || detail::proportional(ps, qs, tol)) {
      g = monic(ps);
    } else {
      g = LaurentPoly<F>::identity();
    }
  }
  return g.shifted(nu(ks));
}

/// Q divides P when Q_* divides P_*.
template <Field F>
bool lp_divides(const LaurentPoly<F>& q, const LaurentPoly<F>& p, Tolerance tol = {}) {
  if (q.is_zero()) return p.is_zero();
  if (p.is_zero()) return true;
  return poly_divmod(psi_factor(p).star_part, psi_factor(q).star_part, tol).second.is_zero();
}

/// The Laurent polynomial X with X * Q = P. Throws InexactDivision when Q_* does not divide P_*.
template <Field F>
LaurentPoly<F> lp_divide_exact(const LaurentPoly<F>& p, const LaurentPoly<F>& q, Tolerance tol = {}) {
  if (q.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "division by the zero polynomial");
  if (p.is_zero()) return {};
  const auto fp = psi_factor(p);
  const auto fq = psi_factor(q);
  auto [quot, rem] = poly_divmod(fp.star_part, fq.star_part, tol);
  if (!rem.is_zero()) throw Error(ErrorCode::InexactDivision, "nonzero remainder " + rem.to_string());
  return quot.shifted(fp.power - fq.power);
}

}  // namespace refrec
