#pragma once

// Boundary functionals: finite combinations of point evaluations, each
// optionally taken after a reflection operator.

#include <map>
#include <optional>
#include <vector>

#include "refrec/linalg.hpp"
#include "refrec/reflection.hpp"

namespace refrec {

template <Field F>
class BoundaryFunctional {
 public:
  struct Term {
    F coeff;
    Index index;
    std::optional<ReflectionOperator<F>> pre;
  };

  BoundaryFunctional() = default;
  explicit BoundaryFunctional(std::vector<Term> terms) : terms_(std::move(terms)) {}

  /// u |-> u(k)
  static BoundaryFunctional eval_at(Index k) { return BoundaryFunctional({{field_one<F>(), k, std::nullopt}}); }

  const std::vector<Term>& terms() const { return terms_; }

  F operator()(const Sequence<F>& u) const {
    F acc = field_zero<F>();
    for (const auto& t : terms_) acc += t.coeff * (t.pre ? t.pre->apply(u)(t.index) : u(t.index));
    return acc;
  }

  /// This functional taken after `op`: u |-> W(op u).
  BoundaryFunctional after(const ReflectionOperator<F>& op) const {
    std::vector<Term> out;
    for (const auto& t : terms_) out.push_back({t.coeff, t.index, t.pre ? op_compose(*t.pre, op) : op});
    return BoundaryFunctional(std::move(out));
  }

  /// The same functional as plain point evaluations: index -> weight.
  std::map<Index, F> point_weights() const {
    std::map<Index, F> w;
    auto add = [&w](Index k, const F& c) {
      auto [it, inserted] = w.try_emplace(k, c);
      if (!inserted) it->second += c;
    };
    for (const auto& t : terms_) {
      if (!t.pre) {
        add(t.index, t.coeff);
        continue;
      }
      // (phi* P u)(i) = sum_e p_e u(-i + e), (Q u)(i) = sum_e q_e u(i + e)
      for (const auto& [e, c] : t.pre->P().terms()) add(-t.index + e, t.coeff * c);
      for (const auto& [e, c] : t.pre->Q().terms()) add(t.index + e, t.coeff * c);
    }
    std::erase_if(w, [](const auto& kv) { return is_exact_zero(kv.second); });
    return w;
  }

 private:
  std::vector<Term> terms_;
};

/// Values of the functionals W applied to each sequence in `basis`: M(i, j) = W_i(basis_j).
template <Field F>
Matrix<F> functional_matrix(const std::vector<BoundaryFunctional<F>>& W, const std::vector<Sequence<F>>& basis) {
  Matrix<F> m(W.size(), basis.size());
  for (std::size_t i = 0; i < W.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) m(i, j) = W[i](basis[j]);
  return m;
}

template <Field F>
Vector<F> apply_all(const std::vector<BoundaryFunctional<F>>& W, const Sequence<F>& u) {
  Vector<F> out(W.size());
  for (std::size_t i = 0; i < W.size(); ++i) out[i] = W[i](u);
  return out;
}

/// Conditions on F^n-valued sequences: u |-> sum_t M_t u(index_t), an element of F^n.
template <Field F>
class SystemBoundary {
 public:
  struct Term {
    Matrix<F> coeff;
    Index index;
  };

  SystemBoundary() = default;
  explicit SystemBoundary(std::vector<Term> terms) : terms_(std::move(terms)) {}

  static SystemBoundary eval_at(Index k, std::size_t n) { return SystemBoundary({{Matrix<F>::identity(n), k}}); }

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t rows() const { return terms_.empty() ? 0 : terms_.front().coeff.rows(); }

  /// W u
  Vector<F> operator()(const VectorSequence<F>& u) const { return eval(u, false); }
  /// W phi* u
  Vector<F> reflected(const VectorSequence<F>& u) const { return eval(u, true); }

  /// Same functional applied to the columns of a matrix-valued sequence:
  /// returns sum_t M_t X(+-index_t) restricted to the given block of rows of X.
  template <class MatAt>
  Matrix<F> on_matrix(MatAt&& x_at, bool reflected_index) const {
    Matrix<F> out;
    bool first = true;
    for (const auto& t : terms_) {
      auto term = t.coeff * x_at(reflected_index ? -t.index : t.index);
      if (first) {
        out = std::move(term);
        first = false;
      } else {
        out += term;
      }
    }
    return out;
  }

 private:
  Vector<F> eval(const VectorSequence<F>& u, bool reflected_index) const {
    Vector<F> acc(rows());
    for (const auto& t : terms_) acc += t.coeff * u(reflected_index ? -t.index : t.index);
    return acc;
  }

  std::vector<Term> terms_;
};

}  // namespace refrec
