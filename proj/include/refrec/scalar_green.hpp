#pragma once

// Green's functions of pure recurrences sum_l a_l x_{k+l} = c_k over Z, and
// the solvers built on them: initial value problems, general boundary
// conditions, and reflection problems through their reduction.

#include <cmath>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "refrec/boundary.hpp"
#include "refrec/errors.hpp"
#include "refrec/linalg.hpp"
#include "refrec/reflection.hpp"
#include "refrec/residual.hpp"
#include "refrec/sequence.hpp"

namespace refrec {

enum class Region { A1, A2, A3, A4 };

inline std::string_view to_string(Region r) {
  switch (r) {
    case Region::A1: return "A1";
    case Region::A2: return "A2";
    case Region::A3: return "A3";
    case Region::A4: return "A4";
  }
  return "?";
}

/// A1: k > j >= 0; A2: k+1-n <= j < 0; A3: j < k+1-n, j < 0; A4: k <= j, j >= 0.
inline Region classify_region(Index k, Index j, Index n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "classify_region needs n >= 1");
  if (j >= 0) return k > j ? Region::A1 : Region::A4;
  return j >= k + 1 - n ? Region::A2 : Region::A3;
}

/// sum_{l=0}^{n} a_l D^l with a_0 a_n != 0 and n >= 1.
template <Field F>
class RecurrenceOperator {
 public:
  explicit RecurrenceOperator(std::vector<F> a) : a_(std::move(a)) {
    if (a_.size() < 2) throw Error(ErrorCode::InvalidArgument, "recurrence needs order >= 1");
    if (is_exact_zero(a_.front()) || is_exact_zero(a_.back())) {
      throw Error(ErrorCode::InvalidArgument, "recurrence needs a_0 a_n != 0");
    }
  }

  /// From an ordinary polynomial with nonzero constant term.
  static RecurrenceOperator from_poly(const LaurentPoly<F>& s) {
    if (s.is_zero() || s.deg_low() != 0) {
      throw Error(ErrorCode::InvalidArgument, "recurrence polynomial must have a nonzero constant term");
    }
    std::vector<F> a(static_cast<std::size_t>(s.deg_high()) + 1, field_zero<F>());
    for (const auto& [e, c] : s.terms()) a[static_cast<std::size_t>(e)] = c;
    return RecurrenceOperator(std::move(a));
  }

  std::size_t order() const { return a_.size() - 1; }
  const std::vector<F>& coeffs() const { return a_; }
  const F& a(std::size_t l) const { return a_[l]; }
  LaurentPoly<F> poly() const { return LaurentPoly<F>::from_coeffs(a_); }

  template <class V>
  Sequence<V> apply(const Sequence<V>& u) const { return poly().apply(u); }

 private:
  std::vector<F> a_;
};

/// Delta-normalized fundamental system y_0..y_{n-1}: y_j(i) = [i == j] for
/// i in 0..n-1, extended in both directions by exact recursion. Rows are
/// cached and grown on demand under a mutex.
template <Field F>
class FundamentalSystem {
 public:
  FundamentalSystem(RecurrenceOperator<F> s, Window w = {}) : state_(std::make_shared<State>(std::move(s))) {
    row(w.lo);
    row(w.hi);
  }

  std::size_t order() const { return state_->op.order(); }
  const RecurrenceOperator<F>& op() const { return state_->op; }

  /// (y_0(k), ..., y_{n-1}(k))
  Vector<F> row(Index k) const {
    std::lock_guard lock(state_->mu);
    return state_->row_locked(k);
  }

  F value(std::size_t j, Index k) const { return row(k)[j]; }

  std::vector<Sequence<F>> sequences() const {
    std::vector<Sequence<F>> out;
    for (std::size_t j = 0; j < order(); ++j) {
      out.push_back(Sequence<F>::rule([st = state_, j](Index k) {
        std::lock_guard lock(st->mu);
        return st->row_locked(k)[j];
      }));
    }
    return out;
  }

 private:
  struct State {
    explicit State(RecurrenceOperator<F> s) : op(std::move(s)) {
      const std::size_t n = op.order();
      for (std::size_t i = 0; i < n; ++i) {
        Vector<F> r(n);
        r[i] = field_one<F>();
        rows.push_back(std::move(r));
      }
      lo = 0;
    }

    const Vector<F>& row_locked(Index k) {
      const std::size_t n = op.order();
      while (k < lo) {
        // x_k = -(1/a_0) sum_{l>0} a_l x_{k+l}
        Vector<F> r(n);
        for (std::size_t l = 1; l <= n; ++l) r += op.a(l) * rows[l - 1];
        rows.push_front((-field_one<F>() / op.a(0)) * r);
        --lo;
      }
      while (k >= lo + static_cast<Index>(rows.size())) {
        // x_{k+n} = -(1/a_n) sum_{l<n} a_l x_{k+l}
        Vector<F> r(n);
        const std::size_t base = rows.size() - n;
        for (std::size_t l = 0; l < n; ++l) r += op.a(l) * rows[base + l];
        rows.push_back((-field_one<F>() / op.a(n)) * r);
      }
      return rows[static_cast<std::size_t>(k - lo)];
    }

    RecurrenceOperator<F> op;
    std::mutex mu;
    std::deque<Vector<F>> rows;
    Index lo = 0;
  };

  std::shared_ptr<State> state_;
};

/// H_{k,j} of a recurrence: (-1)^{n-1}/(a_n C_{j+1}) Ht_{k,j} on A1,
/// 1/(a_0 C_j) Ht_{k,j} on A2, zero on A3 and A4. Ht_{k,j} is the determinant
/// with first row y(k) and rows y(j+1), ..., y(j+n-1) below it, and
/// C_j = Ht_{j,j} is the Casoratian.
template <Field F>
class GreenFunction {
 public:
  explicit GreenFunction(RecurrenceOperator<F> s, Window w = {}, Tolerance tol = {})
      : fs_(s, w.padded(1, static_cast<Index>(s.order()))), memo_(std::make_shared<Memo>()), tol_(tol) {}

  explicit GreenFunction(FundamentalSystem<F> fs, Tolerance tol = {})
      : fs_(std::move(fs)), memo_(std::make_shared<Memo>()), tol_(tol) {}

  const FundamentalSystem<F>& fundamental_system() const { return fs_; }
  const RecurrenceOperator<F>& op() const { return fs_.op(); }
  std::size_t order() const { return fs_.order(); }

  /// Ht_{k,j}
  F htilde(Index k, Index j) const {
    const auto w = cofactors(j);
    const auto y = fs_.row(k);
    F acc = field_zero<F>();
    for (std::size_t i = 0; i < y.size(); ++i) acc += y[i] * w[i];
    return acc;
  }

  /// C_j; throws SingularCasoratian if it vanishes.
  F casoratian(Index j) const {
    {
      std::lock_guard lock(memo_->mu);
      if (auto it = memo_->cas.find(j); it != memo_->cas.end()) return it->second;
    }
    F c;
    if constexpr (FieldTraits<F>::exact) {
      c = htilde(j, j);
    } else {
      // the determinant cancels badly once |y| is large; C_j = rho^j C_0 instead
      const std::size_t n = order();
      const F rho = (n % 2 == 0 ? op().a(0) : -op().a(0)) / op().a(n);
      c = field_one<F>();
      for (Index i = 0; i < (j < 0 ? -j : j); ++i) c = j < 0 ? c / rho : c * rho;
    }
    bool singular = is_exact_zero(c);
    if constexpr (!FieldTraits<F>::exact) singular = singular || !std::isfinite(magnitude(c));
    if (singular) throw Error(ErrorCode::SingularCasoratian, "C_" + std::to_string(j) + " = 0");
    std::lock_guard lock(memo_->mu);
    memo_->cas.emplace(j, c);
    return c;
  }

  Region region(Index k, Index j) const { return classify_region(k, j, static_cast<Index>(order())); }

  F operator()(Index k, Index j) const {
    const std::size_t n = order();
    if constexpr (!FieldTraits<F>::exact) return by_recursion(k, j);
    switch (region(k, j)) {
      case Region::A1: {
        const F sign = n % 2 == 1 ? field_one<F>() : -field_one<F>();
        return sign / (op().a(n) * casoratian(j + 1)) * htilde(k, j);
      }
      case Region::A2:
        return field_one<F>() / (op().a(0) * casoratian(j)) * htilde(k, j);
      default:
        return field_zero<F>();
    }
  }

  /// k |-> sum_j H_{k,j} c(j) for finitely supported c.
  Sequence<F> apply(const Sequence<F>& c) const {
    if (!c.finitely_supported()) {
      throw Error(ErrorCode::InvalidArgument, "the Green's function is applied to finitely supported data only");
    }
    if (c.support().empty()) return Sequence<F>::zero();
    auto support = c.support();
    GreenFunction self = *this;
    return Sequence<F>::rule([self, support](Index k) {
      F acc = field_zero<F>();
      for (const auto& [j, cj] : support) acc += self(k, j) * cj;
      return acc;
    });
  }

 private:
  /// Column j of H from S H_{.,j} = delta_j: forward from zeros below j+n when
  /// j >= 0, backward from H_{j,j} = 1/a_0 when j < 0. Used over inexact fields.
  F by_recursion(Index k, Index j) const {
    const auto n = static_cast<Index>(order());
    const bool forward = j >= 0;
    const Index start = forward ? j + n : j;
    if (forward ? k < start : k > start) return field_zero<F>();
    const auto steps = static_cast<std::size_t>(forward ? k - start : start - k);
    std::lock_guard lock(memo_->mu);
    auto& col = memo_->col[j];
    auto at = [&](Index m) {
      if (forward ? m < start : m > start) return field_zero<F>();
      return col[static_cast<std::size_t>(forward ? m - start : start - m)];
    };
    while (col.size() <= steps) {
      const auto i = static_cast<Index>(col.size());
      F acc = field_zero<F>();
      if (forward) {
        const Index m = start + i;
        if (m - n == j) acc = field_one<F>();
        for (Index l = 0; l < n; ++l) acc -= op().a(static_cast<std::size_t>(l)) * at(m - n + l);
        col.push_back(acc / op().a(static_cast<std::size_t>(n)));
      } else {
        const Index m = start - i;
        if (m == j) acc = field_one<F>();
        for (Index l = 1; l <= n; ++l) acc -= op().a(static_cast<std::size_t>(l)) * at(m + l);
        col.push_back(acc / op().a(0));
      }
    }
    return col[steps];
  }

  /// Row vector w with Ht_{k,j} = y(k) . w, i.e. first-row cofactors.
  Vector<F> cofactors(Index j) const {
    {
      std::lock_guard lock(memo_->mu);
      if (auto it = memo_->cof.find(j); it != memo_->cof.end()) return it->second;
    }
    const std::size_t n = order();
    Vector<F> w(n);
    if (n == 1) {
      w[0] = field_one<F>();
    } else {
      Matrix<F> rows(n - 1, n);
      for (std::size_t r = 0; r + 1 < n; ++r) {
        const auto y = fs_.row(j + 1 + static_cast<Index>(r));
        for (std::size_t i = 0; i < n; ++i) rows(r, i) = y[i];
      }
      for (std::size_t i = 0; i < n; ++i) {
        Matrix<F> minor(n - 1, n - 1);
        for (std::size_t r = 0; r + 1 < n; ++r)
          for (std::size_t c = 0, cc = 0; c < n; ++c)
            if (c != i) minor(r, cc++) = rows(r, c);
        const F d = determinant(minor);
        w[i] = i % 2 == 0 ? d : -d;
      }
    }
    std::lock_guard lock(memo_->mu);
    memo_->cof.emplace(j, w);
    return w;
  }

  struct Memo {
    std::mutex mu;
    std::map<Index, F> cas;
    std::map<Index, Vector<F>> cof;
    std::map<Index, std::vector<F>> col;
  };

  FundamentalSystem<F> fs_;
  std::shared_ptr<Memo> memo_;
  Tolerance tol_;
};

template <Field F>
FundamentalSystem<F> fundamental_system(const RecurrenceOperator<F>& s, Window w = {}) {
  return FundamentalSystem<F>(s, w);
}

template <Field F>
F casoratian(const GreenFunction<F>& g, Index j) {
  return g.casoratian(j);
}

template <Field F>
F green_eval(const GreenFunction<F>& g, Index k, Index j) {
  return g(k, j);
}

/// u = H c: S u = c with u(0) = ... = u(n-1) = 0. Tabulated on `w`.
template <Field F>
Sequence<F> solve_ivp(const GreenFunction<F>& g, const Sequence<F>& c, Window w = {}) {
  return Sequence<F>::tabulated(g.apply(c), w);
}

template <Field F>
Sequence<F> solve_ivp(const RecurrenceOperator<F>& s, const Sequence<F>& c, Window w = {}) {
  return solve_ivp(GreenFunction<F>(s, w), c, w);
}

/// S u = c, W u = h via u = Phi W_Phi^{-1} h + (H - Phi W_Phi^{-1} W H) c.
template <Field F>
Sequence<F> solve_bvp(const GreenFunction<F>& g, const Sequence<F>& c, const std::vector<BoundaryFunctional<F>>& W,
                      const Vector<F>& h, Window w = {}, Tolerance tol = {}) {
  const std::size_t n = g.order();
  if (W.size() != n || h.size() != n) {
    throw Error(ErrorCode::ConditionCountMismatch,
                "expected " + std::to_string(n) + " conditions, got " + std::to_string(W.size()));
  }
  const auto phi = g.fundamental_system().sequences();
  const auto w_phi = functional_matrix(W, phi);
  const auto w_phi_inv = inverse(w_phi, tol);
  if (!w_phi_inv) throw Error(ErrorCode::SingularConditions, "det(W Phi) = 0");
  const auto hc = g.apply(c);
  const auto r = (*w_phi_inv) * (h - apply_all(W, hc));
  Sequence<F> u = hc;
  for (std::size_t j = 0; j < n; ++j) u = u + scale(r[j], phi[j]);
  return Sequence<F>::tabulated(u, w);
}

template <Field F>
Sequence<F> solve_bvp(const RecurrenceOperator<F>& s, const Sequence<F>& c,
                      const std::vector<BoundaryFunctional<F>>& W, const Vector<F>& h, Window w = {},
                      Tolerance tol = {}) {
  return solve_bvp(GreenFunction<F>(s, w, tol), c, W, h, w, tol);
}

/// Largest |exponent| in either part of r.
template <Field F>
Index rbar_reach(const ReflectionOperator<F>& r) {
  Index m = 0;
  for (const auto* p : {&r.P(), &r.Q()})
    if (!p->is_zero()) m = std::max({m, std::abs(p->deg_low()), std::abs(p->deg_high())});
  return m;
}

/// A basis of ker L, computed inside ker(R L) for the full reduction R L:
/// u in ker(R L) has L u in ker(R L) as well, so L u = 0 as soon as it
/// vanishes on the n consecutive indices 0..n-1.
template <Field F>
std::vector<Sequence<F>> reflection_kernel(const ReflectionOperator<F>& L, Tolerance tol = {}) {
  const auto full = reduce_full(L, tol);
  if (full.S.is_zero()) throw Error(ErrorCode::DegenerateReduction, "kernel of L is infinite-dimensional");
  const auto star = psi_factor(full.S).star_part;
  if (star.deg_high() == 0) return {};
  FundamentalSystem<F> fs(RecurrenceOperator<F>::from_poly(star));
  const auto phi = fs.sequences();
  const std::size_t nf = phi.size();
  Matrix<F> m(nf, nf);
  for (std::size_t j = 0; j < nf; ++j) {
    const auto lphi = L.apply(phi[j]);
    for (std::size_t i = 0; i < nf; ++i) m(i, j) = lphi(static_cast<Index>(i));
  }
  std::vector<Sequence<F>> out;
  for (const auto& v : null_space(m, tol)) {
    Sequence<F> u = Sequence<F>::zero();
    for (std::size_t j = 0; j < nf; ++j)
      if (!is_exact_zero(v[j])) u = u + scale(v[j], phi[j]);
    out.push_back(u);
  }
  return out;
}

/// L u = c, W u = h for a reflection operator L. The reduction L Rbar = S
/// turns L u = c into S y = c with u = Rbar y; y is fixed by the conditions
/// W y = 0 and W Rbar y = 0, and the homogeneous part is added from a basis
/// of ker L. The result is checked against both equations on `w`.
template <Field F>
Sequence<F> solve_reflection_bvp(const ReflectionOperator<F>& L, const Sequence<F>& c,
                                 const std::vector<BoundaryFunctional<F>>& W, const Vector<F>& h, Window w = {},
                                 Tolerance tol = {}) {
  if (W.size() != h.size()) throw Error(ErrorCode::ConditionCountMismatch, "|W| != |h|");
  const auto red = reduce_gcd(L, tol);
  normalize_to_poly(L, red.Rtilde, red.S);  // throws DegenerateReduction
  // Strip every power of D, so the recurrence has a nonzero constant term.
  const Index shift_by = -red.S.deg_low();
  const auto rbar = compose_shift(red.Rtilde, shift_by);
  const auto star = red.S.shifted(shift_by);
  const auto order = static_cast<std::size_t>(star.deg_high());

  const auto kernel = reflection_kernel(L, tol);
  if (W.size() != kernel.size()) {
    throw Error(ErrorCode::ConditionCountMismatch, "the solution space has dimension " +
                                                       std::to_string(kernel.size()) + " but " +
                                                       std::to_string(W.size()) + " conditions were given");
  }

  Sequence<F> y;
  if (order == 0) {
    y = scale(field_one<F>() / star.coeff(0), c);
  } else {
    std::vector<BoundaryFunctional<F>> V = W;
    for (const auto& wi : W) V.push_back(wi.after(rbar));
    if (V.size() != order) {
      throw Error(ErrorCode::ConditionCountMismatch, "the reduced problem has order " + std::to_string(order) +
                                                         " but " + std::to_string(V.size()) +
                                                         " stacked conditions were given");
    }
    const Window wy = w.padded(rbar_reach(rbar), rbar_reach(rbar));
    y = solve_bvp(RecurrenceOperator<F>::from_poly(star), c, V, Vector<F>(order), wy, tol);
  }
  Sequence<F> u = rbar.apply(y);

  if (!kernel.empty()) {
    const auto w_phi_inv = inverse(functional_matrix(W, kernel), tol);
    if (!w_phi_inv) throw Error(ErrorCode::SingularConditions, "det(W Phi) = 0");
    const auto r = (*w_phi_inv) * (h - apply_all(W, u));
    for (std::size_t j = 0; j < kernel.size(); ++j) u = u + scale(r[j], kernel[j]);
  }
  u = Sequence<F>::tabulated(u, w);

  const auto res = residual(L, u, c, w, tol);
  if (!res.passes(FieldTraits<F>::exact, tol)) {
    throw Error(ErrorCode::VerificationFailed, "L u != c at " + std::to_string(res.offending.size()) + " indices");
  }
  if (!vector_mismatch(apply_all(W, u), h, tol).passes(FieldTraits<F>::exact, tol)) {
    throw Error(ErrorCode::VerificationFailed, "W u != h");
  }
  return u;
}

}  // namespace refrec
