#pragma once

// Brute-force ground truth: direct recursion, and dense linear solves of all
// equations whose terms fall inside a finite window of unknowns.

#include <map>
#include <vector>

#include "refrec/boundary.hpp"
#include "refrec/errors.hpp"
#include "refrec/linalg.hpp"
#include "refrec/reflection.hpp"
#include "refrec/residual.hpp"
#include "refrec/scalar_green.hpp"
#include "refrec/system_green.hpp"

namespace refrec {

/// u(0..n-1) = initial; forward x_{k+n} = (c_k - sum_{l<n} a_l x_{k+l}) / a_n,
/// backward x_k = (c_k - sum_{l>0} a_l x_{k+l}) / a_0. Exact on exact fields.
template <Field F>
Sequence<F> iterate_scalar(const RecurrenceOperator<F>& s, const std::vector<F>& initial, const Sequence<F>& c,
                           Window w) {
  const std::size_t n = s.order();
  if (initial.size() != n) throw Error(ErrorCode::InvalidArgument, "initial block must have n values");
  const Index lo = std::min<Index>(w.lo, 0);
  const Index hi = std::max<Index>(w.hi, static_cast<Index>(n) - 1);
  std::vector<F> x(static_cast<std::size_t>(hi - lo + 1), field_zero<F>());
  auto at = [&](Index k) -> F& { return x[static_cast<std::size_t>(k - lo)]; };
  for (std::size_t i = 0; i < n; ++i) at(static_cast<Index>(i)) = initial[i];
  for (Index k = 0; k + static_cast<Index>(n) <= hi; ++k) {
    F acc = c(k);
    for (std::size_t l = 0; l < n; ++l) acc -= s.a(l) * at(k + static_cast<Index>(l));
    at(k + static_cast<Index>(n)) = acc / s.a(n);
  }
  for (Index k = -1; k >= lo; --k) {
    F acc = c(k);
    for (std::size_t l = 1; l <= n; ++l) acc -= s.a(l) * at(k + static_cast<Index>(l));
    at(k) = acc / s.a(0);
  }
  std::vector<typename Sequence<F>::Entry> entries;
  for (Index k = w.lo; k <= w.hi; ++k) entries.emplace_back(k, at(k));
  return Sequence<F>::finite(std::move(entries));
}

/// Linear equations over the unknowns u(k)_i, k in `unknowns`, i < dim.
template <Field F>
struct WindowSystem {
  struct Row {
    std::map<std::size_t, F> coeffs;  // column -> coefficient
    F rhs;
  };

  Window unknowns;
  std::size_t dim = 1;
  std::vector<Row> rows;

  std::size_t columns() const { return unknowns.size() * dim; }
  std::size_t column(Index k, std::size_t i = 0) const { return static_cast<std::size_t>(k - unknowns.lo) * dim + i; }
};

/// Rows of L u = c at every k whose terms all lie in `unknowns`, plus one row
/// per condition sum_i w_i u(i) = h.
template <Field F>
WindowSystem<F> assemble_reflection(const ReflectionOperator<F>& L, const Sequence<F>& c,
                                    const std::vector<BoundaryFunctional<F>>& W, const Vector<F>& h,
                                    Window unknowns) {
  WindowSystem<F> ws{unknowns, 1, {}};
  for (Index k = unknowns.lo; k <= unknowns.hi; ++k) {
    typename WindowSystem<F>::Row row{{}, c(k)};
    bool inside = true;
    auto add = [&](Index idx, const F& coef) {
      if (!unknowns.contains(idx)) {
        inside = false;
        return;
      }
      auto [it, fresh] = row.coeffs.try_emplace(ws.column(idx), coef);
      if (!fresh) it->second += coef;
    };
    for (const auto& [e, p] : L.P().terms()) add(-k + e, p);
    for (const auto& [e, q] : L.Q().terms()) add(k + e, q);
    if (inside) ws.rows.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < W.size(); ++i) {
    typename WindowSystem<F>::Row row{{}, h[i]};
    for (const auto& [idx, wgt] : W[i].point_weights()) {
      if (!unknowns.contains(idx)) throw Error(ErrorCode::InvalidArgument, "condition outside the window");
      row.coeffs[ws.column(idx)] += wgt;
    }
    ws.rows.push_back(std::move(row));
  }
  return ws;
}

template <Field F>
WindowSystem<F> assemble_recurrence(const RecurrenceOperator<F>& s, const Sequence<F>& c,
                                    const std::vector<BoundaryFunctional<F>>& W, const Vector<F>& h,
                                    Window unknowns) {
  return assemble_reflection(ReflectionOperator<F>::plain(s.poly()), c, W, h, unknowns);
}

/// Rows of J u = c (componentwise) plus rows of W u = h.
template <Field F>
WindowSystem<F> assemble_system(const MatrixFG<F>& m, const VectorSequence<F>& c, const SystemBoundary<F>& W,
                                const Vector<F>& h, Window unknowns) {
  const std::size_t n = m.dim();
  WindowSystem<F> ws{unknowns, n, {}};
  for (Index k = unknowns.lo; k <= unknowns.hi; ++k) {
    const std::pair<const Matrix<F>*, Index> parts[] = {{&m.f, k + 1}, {&m.g, -k - 1}, {&m.a, k}, {&m.b, -k}};
    bool inside = true;
    for (const auto& [mat, idx] : parts) inside = inside && unknowns.contains(idx);
    if (!inside) continue;
    const auto ck = c(k);
    for (std::size_t i = 0; i < n; ++i) {
      typename WindowSystem<F>::Row row{{}, ck[i]};
      for (const auto& [mat, idx] : parts)
        for (std::size_t j = 0; j < n; ++j)
          if (!is_exact_zero((*mat)(i, j))) row.coeffs[ws.column(idx, j)] += (*mat)(i, j);
      ws.rows.push_back(std::move(row));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    typename WindowSystem<F>::Row row{{}, h[i]};
    for (const auto& t : W.terms()) {
      if (!unknowns.contains(t.index)) throw Error(ErrorCode::InvalidArgument, "condition outside the window");
      for (std::size_t j = 0; j < n; ++j) row.coeffs[ws.column(t.index, j)] += t.coeff(i, j);
    }
    ws.rows.push_back(std::move(row));
  }
  return ws;
}

namespace detail {

/// Solves by row reduction of the augmented matrix. Returns the value of every
/// column the system determines uniquely (nullopt for the others).
/// Throws SingularWindowSystem if the system is inconsistent.
template <Field F>
std::vector<std::optional<F>> window_rref(const WindowSystem<F>& ws, Tolerance tol) {
  const std::size_t cols = ws.columns();
  Matrix<F> aug(ws.rows.size(), cols + 1);
  for (std::size_t r = 0; r < ws.rows.size(); ++r) {
    for (const auto& [c, v] : ws.rows[r].coeffs) aug(r, c) = v;
    aug(r, cols) = ws.rows[r].rhs;
  }
  const auto e = row_echelon(aug, tol);
  if (e.rank() > 0 && e.pivot_cols.back() == cols) {
    throw Error(ErrorCode::SingularWindowSystem, "the window equations are inconsistent");
  }
  std::vector<bool> pivot(cols, false);
  for (auto c : e.pivot_cols) pivot[c] = true;
  std::vector<std::optional<F>> out(cols);
  for (std::size_t r = 0; r < e.rank(); ++r) {
    const std::size_t pc = e.pivot_cols[r];
    bool determined = true;
    for (std::size_t c = pc + 1; c < cols && determined; ++c)
      if (!pivot[c] && !is_exact_zero(e.reduced(r, c))) determined = false;
    if (determined) out[pc] = e.reduced(r, cols);
  }
  return out;
}

}  // namespace detail

/// Values on `target` of the solution of the window system. Throws
/// SingularWindowSystem when the system is inconsistent or leaves any target
/// value undetermined.
template <Field F>
Sequence<F> dense_window_solve(const WindowSystem<F>& ws, Window target, Tolerance tol = {}) {
  if (ws.dim != 1) throw Error(ErrorCode::InvalidArgument, "scalar window solve on a vector system");
  const auto vals = detail::window_rref(ws, tol);
  std::vector<typename Sequence<F>::Entry> entries;
  for (Index k = target.lo; k <= target.hi; ++k) {
    if (!ws.unknowns.contains(k) || !vals[ws.column(k)]) {
      throw Error(ErrorCode::SingularWindowSystem, "u(" + std::to_string(k) + ") is not determined");
    }
    entries.emplace_back(k, *vals[ws.column(k)]);
  }
  return Sequence<F>::finite(std::move(entries));
}

template <Field F>
VectorSequence<F> dense_window_solve_system(const WindowSystem<F>& ws, Window target, Tolerance tol = {}) {
  const auto vals = detail::window_rref(ws, tol);
  std::vector<typename VectorSequence<F>::Entry> entries;
  for (Index k = target.lo; k <= target.hi; ++k) {
    Vector<F> v(ws.dim);
    for (std::size_t i = 0; i < ws.dim; ++i) {
      if (!ws.unknowns.contains(k) || !vals[ws.column(k, i)]) {
        throw Error(ErrorCode::SingularWindowSystem, "u(" + std::to_string(k) + ") is not determined");
      }
      v[i] = *vals[ws.column(k, i)];
    }
    entries.emplace_back(k, std::move(v));
  }
  return VectorSequence<F>::finite(std::move(entries), ws.dim);
}

/// Residual of a system J u = c (see system_residual).
template <Field F>
ResidualReport residual(const MatrixFG<F>& m, const VectorSequence<F>& u, const VectorSequence<F>& c, Window w,
                        Tolerance tol = {}) {
  return system_residual(m, u, c, w, tol);
}

}  // namespace refrec
