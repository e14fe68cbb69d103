#pragma once

// Operators phi*P + Q in F[D, D^-1, phi*] and the reductions that turn a
// reflection operator into a plain Laurent polynomial.

#include <string>

#include "refrec/errors.hpp"
#include "refrec/laurent.hpp"
#include "refrec/sequence.hpp"

namespace refrec {

template <Field F>
class ReflectionOperator {
 public:
  using Poly = LaurentPoly<F>;

  ReflectionOperator() = default;
  /// L = phi* p + q
  ReflectionOperator(Poly p, Poly q) : p_(std::move(p)), q_(std::move(q)) {}

  static ReflectionOperator identity() { return {Poly{}, Poly::identity()}; }
  static ReflectionOperator reflection() { return {Poly::identity(), Poly{}}; }
  static ReflectionOperator plain(Poly q) { return {Poly{}, std::move(q)}; }

  const Poly& P() const { return p_; }
  const Poly& Q() const { return q_; }
  bool is_zero() const { return p_.is_zero() && q_.is_zero(); }
  bool is_plain() const { return p_.is_zero(); }

  /// reflect(P u) + Q u
  template <class V>
  Sequence<V> apply(const Sequence<V>& u) const {
    return reflect(p_.apply(u)) + q_.apply(u);
  }

  friend ReflectionOperator operator+(const ReflectionOperator& a, const ReflectionOperator& b) {
    return {a.p_ + b.p_, a.q_ + b.q_};
  }
  friend ReflectionOperator operator-(const ReflectionOperator& a, const ReflectionOperator& b) {
    return {a.p_ - b.p_, a.q_ - b.q_};
  }
  friend ReflectionOperator operator*(const F& s, const ReflectionOperator& a) { return {s * a.p_, s * a.q_}; }
  friend bool operator==(const ReflectionOperator& a, const ReflectionOperator& b) {
    return a.p_ == b.p_ && a.q_ == b.q_;
  }
  friend bool near(const ReflectionOperator& a, const ReflectionOperator& b, Tolerance tol = {}) {
    return near(a.p_, b.p_, tol) && near(a.q_, b.q_, tol);
  }

  std::string to_string() const { return "phi*(" + p_.to_string() + ") + (" + q_.to_string() + ")"; }

 private:
  Poly p_;
  Poly q_;
};

template <Field F, class V>
Sequence<V> op_apply(const ReflectionOperator<F>& L, const Sequence<V>& u) {
  return L.apply(u);
}

/// Product L1 * L2 obtained by expanding both into monomials phi*^a D^i and
/// rewriting with D^i phi* = phi* D^{-i} and (phi*)^2 = Id.
template <Field F>
ReflectionOperator<F> op_compose(const ReflectionOperator<F>& l1, const ReflectionOperator<F>& l2) {
  struct Mono {
    bool refl;
    Index e;
    F c;
  };
  auto expand = [](const ReflectionOperator<F>& l) {
    std::vector<Mono> out;
    for (const auto& [e, c] : l.P().terms()) out.push_back({true, e, c});
    for (const auto& [e, c] : l.Q().terms()) out.push_back({false, e, c});
    return out;
  };
  std::vector<std::pair<Index, F>> p_terms, q_terms;
  for (const Mono& x : expand(l1)) {
    for (const Mono& y : expand(l2)) {
      // (phi*^a D^i)(phi*^b D^j) = phi*^{a+b} D^{(b ? -i : i) + j}
      const Index e = (y.refl ? -x.e : x.e) + y.e;
      const bool refl = x.refl != y.refl;
      (refl ? p_terms : q_terms).emplace_back(e, x.c * y.c);
    }
  }
  return {LaurentPoly<F>::from_terms(p_terms), LaurentPoly<F>::from_terms(q_terms)};
}

/// L * D^k
template <Field F>
ReflectionOperator<F> compose_shift(const ReflectionOperator<F>& l, Index k) {
  return {l.P().shifted(k), l.Q().shifted(k)};
}

namespace detail {

/// Extracts the plain part of a product that must lie in F[D, D^-1].
template <Field F>
LaurentPoly<F> plain_part(const ReflectionOperator<F>& prod, Tolerance tol, const char* what) {
  if constexpr (FieldTraits<F>::exact) {
    if (!prod.P().is_zero()) {
      throw Error(ErrorCode::VerificationFailed, std::string(what) + ": product has a reflected part");
    }
  } else {
    if (!near(prod.P(), LaurentPoly<F>{}, tol)) {
      throw Error(ErrorCode::VerificationFailed, std::string(what) + ": product has a reflected part");
    }
  }
  return prod.Q().cleaned(tol);
}

}  // namespace detail

template <Field F>
struct FullReduction {
  ReflectionOperator<F> R;
  LaurentPoly<F> S;
};

/// R = phi* P - conj(Q), S = R L = L R.
template <Field F>
FullReduction<F> reduce_full(const ReflectionOperator<F>& L, Tolerance tol = {}) {
  ReflectionOperator<F> R(L.P(), -L.Q().conjugate());
  const auto rl = op_compose(R, L);
  const auto lr = op_compose(L, R);
  auto S = detail::plain_part(lr, tol, "reduce_full");
  if (!near(rl, lr, tol)) throw Error(ErrorCode::VerificationFailed, "reduce_full: R and L do not commute");
  return {std::move(R), std::move(S)};
}

template <Field F>
struct GcdReduction {
  ReflectionOperator<F> Rtilde;
  LaurentPoly<F> S;
  LaurentPoly<F> Lbar;
};

/// Lbar = gcd(P, conj Q), Rtilde = phi* (P / Lbar) - conj(Q) / Lbar, S = L Rtilde.
template <Field F>
GcdReduction<F> reduce_gcd(const ReflectionOperator<F>& L, Tolerance tol = {}) {
  if (L.is_zero()) throw Error(ErrorCode::ZeroOperator, "reduce_gcd of the zero operator");
  const auto qc = L.Q().conjugate();
  auto lbar = gcd_laurent(L.P(), qc, tol);
  auto pt = lp_divide_exact(L.P(), lbar, tol);
  auto qt = lp_divide_exact(qc, lbar, tol);
  ReflectionOperator<F> rt(std::move(pt), -qt);
  auto S = detail::plain_part(op_compose(L, rt), tol, "reduce_gcd");
  return {std::move(rt), std::move(S), std::move(lbar)};
}

template <Field F>
struct PolyNormalization {
  ReflectionOperator<F> Rbar;
  LaurentPoly<F> Spoly;
  Index k = 0;
};

/// k = max(0, -deg_low(S)), Rbar = Rtilde D^k, Spoly = S D^k.
template <Field F>
PolyNormalization<F> normalize_to_poly(const ReflectionOperator<F>& /*L*/, const ReflectionOperator<F>& rtilde,
                                       const LaurentPoly<F>& S) {
  if (S.is_zero()) {
    throw Error(ErrorCode::DegenerateReduction,
                "L*R is the zero operator, so the reduced equation carries no information (e.g. L = D +- phi*)");
  }
  const Index k = std::max<Index>(0, -S.deg_low());
  return {compose_shift(rtilde, k), S.shifted(k), k};
}

}  // namespace refrec
