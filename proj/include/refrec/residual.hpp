#pragma once

#include <algorithm>
#include <vector>

#include "refrec/reflection.hpp"

namespace refrec {

/// Result of comparing op(u) with c on a window. Over exact fields `exact_zero`
/// is authoritative; over inexact fields `max_relative` divides each residual
/// by 1 + the sum of magnitudes of the terms that produced it.
struct ResidualReport {
  bool exact_zero = true;
  double max_abs = 0;
  double max_relative = 0;
  std::vector<Index> offending;

  bool passes(bool exact_field, Tolerance tol) const {
    return exact_field ? exact_zero : max_relative <= tol.eps;
  }
};

namespace detail {

template <Field F>
void record(ResidualReport& r, Index k, const F& diff, double term_scale, Tolerance tol) {
  const double a = magnitude(diff);
  const double rel = a / (1.0 + term_scale);
  r.max_abs = std::max(r.max_abs, a);
  r.max_relative = std::max(r.max_relative, rel);
  const bool bad = FieldTraits<F>::exact ? !is_exact_zero(diff) : rel > tol.eps;
  if (!is_exact_zero(diff)) r.exact_zero = false;
  if (bad) r.offending.push_back(k);
}

}  // namespace detail

/// Residual of L u = c at every k in w.
template <Field F>
ResidualReport residual(const ReflectionOperator<F>& L, const Sequence<F>& u, const Sequence<F>& c, Window w,
                        Tolerance tol = {}) {
  ResidualReport r;
  for (Index k = w.lo; k <= w.hi; ++k) {
    F acc = -c(k);
    double scale_ = magnitude(c(k));
    for (const auto& [e, p] : L.P().terms()) {
      const F t = p * u(-k + e);
      acc += t;
      scale_ += magnitude(t);
    }
    for (const auto& [e, q] : L.Q().terms()) {
      const F t = q * u(k + e);
      acc += t;
      scale_ += magnitude(t);
    }
    detail::record(r, k, acc, scale_, tol);
  }
  return r;
}

/// Residual of plain recurrence S u = c at every k in w.
template <Field F>
ResidualReport residual(const LaurentPoly<F>& S, const Sequence<F>& u, const Sequence<F>& c, Window w,
                        Tolerance tol = {}) {
  return residual(ReflectionOperator<F>::plain(S), u, c, w, tol);
}

/// Compares two vectors entrywise: exact equality or relative tolerance.
template <Field F>
ResidualReport vector_mismatch(const Vector<F>& got, const Vector<F>& want, Tolerance tol = {}) {
  ResidualReport r;
  for (std::size_t i = 0; i < got.size(); ++i) {
    detail::record(r, static_cast<Index>(i), got[i] - want[i], magnitude(got[i]) + magnitude(want[i]), tol);
  }
  return r;
}

}  // namespace refrec
