#pragma once

// First-order systems with reflection
//   F x_{k+1} + G x_{-k-1} + A x_k + B x_{-k} = c_k,  x_k in F^n,
// their fundamental matrices, the Green's function of x_{k+1} = K x_k + c_k,
// the boundary value solver, and the embedding of scalar reflection
// recurrences into such systems.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "refrec/boundary.hpp"
#include "refrec/errors.hpp"
#include "refrec/linalg.hpp"
#include "refrec/residual.hpp"
#include "refrec/sequence.hpp"

namespace refrec {

template <Field F>
struct MatrixFG {
  Matrix<F> f, g, a, b;

  std::size_t dim() const { return f.rows(); }

  void validate() const {
    const std::size_t n = f.rows();
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "system of dimension 0");
    for (const Matrix<F>* m : {&f, &g, &a, &b}) {
      if (m->rows() != n || m->cols() != n) throw Error(ErrorCode::InvalidArgument, "F, G, A, B must be n x n");
    }
  }
};

template <Field F>
struct BlockPair {
  Matrix<F> fwd;  // [[F, G], [B, A]]
  Matrix<F> bwd;  // [[A, B], [G, F]]
  std::optional<Matrix<F>> fwd_inv;
  std::optional<Matrix<F>> bwd_inv;

  bool invertible() const { return fwd_inv.has_value() && bwd_inv.has_value(); }
};

/// Assembles both block matrices and their inverses. With `require`, a
/// singular block throws SingularBlock naming the offending matrix.
template <Field F>
BlockPair<F> block_pair(const MatrixFG<F>& m, bool require = true, Tolerance tol = {}) {
  m.validate();
  BlockPair<F> bp;
  bp.fwd = Matrix<F>::from_blocks(m.f, m.g, m.b, m.a);
  bp.bwd = Matrix<F>::from_blocks(m.a, m.b, m.g, m.f);
  bp.fwd_inv = inverse(bp.fwd, tol);
  bp.bwd_inv = inverse(bp.bwd, tol);
  if (require && !bp.fwd_inv) throw Error(ErrorCode::SingularBlock, "[[F, G], [B, A]] is singular");
  if (require && !bp.bwd_inv) throw Error(ErrorCode::SingularBlock, "[[A, B], [G, F]] is singular");
  return bp;
}

/// Integer powers of an invertible matrix, memoized in both directions from T^0 = Id.
template <Field F>
class MatrixPowers {
 public:
  MatrixPowers(Matrix<F> t, Matrix<F> t_inv) : st_(std::make_shared<State>()) {
    st_->t = std::move(t);
    st_->t_inv = std::move(t_inv);
    st_->pos.push_back(Matrix<F>::identity(st_->t.rows()));
    st_->neg.push_back(st_->pos.front());
  }

  const Matrix<F>& base() const { return st_->t; }
  const Matrix<F>& base_inverse() const { return st_->t_inv; }

  Matrix<F> operator()(Index k) const {
    std::lock_guard lock(st_->mu);
    auto& v = k >= 0 ? st_->pos : st_->neg;
    const auto& step = k >= 0 ? st_->t : st_->t_inv;
    const auto idx = static_cast<std::size_t>(k >= 0 ? k : -k);
    while (v.size() <= idx) v.push_back(step * v.back());
    return v[idx];
  }

 private:
  struct State {
    Matrix<F> t, t_inv;
    std::vector<Matrix<F>> pos, neg;
    std::mutex mu;
  };
  std::shared_ptr<State> st_;
};

/// X(k) = T^k with T = -[[F,G],[B,A]]^{-1} [[A,B],[G,F]], and the
/// fundamental matrix M(k) = T^k_(1) + T^k_(2).
template <Field F>
class FundamentalMatrix {
 public:
  explicit FundamentalMatrix(const MatrixFG<F>& m, Tolerance tol = {})
      : n_(m.dim()), bp_(block_pair(m, true, tol)), powers_(-(*bp_.fwd_inv * bp_.bwd), -(*bp_.bwd_inv * bp_.fwd)) {}

  std::size_t dim() const { return n_; }
  const BlockPair<F>& blocks() const { return bp_; }
  const Matrix<F>& generator() const { return powers_.base(); }

  /// T^k
  Matrix<F> X(Index k) const { return powers_(k); }

  Matrix<F> operator()(Index k) const {
    const auto t = powers_(k);
    return t.block(1) + t.block(2);
  }

 private:
  std::size_t n_;
  BlockPair<F> bp_;
  MatrixPowers<F> powers_;
};

template <Field F>
FundamentalMatrix<F> fundamental_matrix(const MatrixFG<F>& m, Tolerance tol = {}) {
  return FundamentalMatrix<F>(m, tol);
}

/// Green's function of x_{k+1} = K x_k + c_k on Z:
/// K^{k-1-j} for 0 <= j <= k-1, -K^{k-1-j} for k <= j <= -1, 0 otherwise.
template <Field F>
class SystemGreen {
 public:
  SystemGreen(Matrix<F> k, Tolerance tol = {}) : n_(k.rows()), powers_(k, require_inverse(k, tol)) {}

  std::size_t dim() const { return n_; }
  const Matrix<F>& K() const { return powers_.base(); }

  Matrix<F> operator()(Index k, Index j) const {
    if (0 <= j && j <= k - 1) return powers_(k - 1 - j);
    if (k <= j && j <= -1) return -powers_(k - 1 - j);
    return Matrix<F>(n_, n_);
  }

  /// u = H c for finitely supported c.
  VectorSequence<F> apply(const VectorSequence<F>& c) const {
    if (!c.finitely_supported()) {
      throw Error(ErrorCode::InvalidArgument, "the Green's function is applied to finitely supported data only");
    }
    auto support = c.support();
    SystemGreen self = *this;
    const std::size_t n = n_;
    return VectorSequence<F>::rule(
        [self, support, n](Index k) {
          Vector<F> acc(n);
          for (const auto& [j, cj] : support) {
            if ((0 <= j && j <= k - 1) || (k <= j && j <= -1)) acc += self(k, j) * cj;
          }
          return acc;
        },
        n);
  }

 private:
  static Matrix<F> require_inverse(const Matrix<F>& k, Tolerance tol) {
    if (!k.square()) throw Error(ErrorCode::InvalidArgument, "K must be square");
    auto inv = inverse(k, tol);
    if (!inv) throw Error(ErrorCode::SingularK, "K is singular");
    return *inv;
  }

  std::size_t n_;
  MatrixPowers<F> powers_;
};

template <Field F>
SystemGreen<F> first_order_green(const Matrix<F>& k, Tolerance tol = {}) {
  return SystemGreen<F>(k, tol);
}

/// Residual of F u(k+1) + G u(-k-1) + A u(k) + B u(-k) = c(k) on w, componentwise.
template <Field F>
ResidualReport system_residual(const MatrixFG<F>& m, const VectorSequence<F>& u, const VectorSequence<F>& c,
                               Window w, Tolerance tol = {}) {
  ResidualReport r;
  const std::size_t n = m.dim();
  auto row_scale = [](const Matrix<F>& mat, const Vector<F>& v, std::size_t i) {
    double s = 0;
    for (std::size_t j = 0; j < v.size(); ++j) s += magnitude(mat(i, j)) * magnitude(v[j]);
    return s;
  };
  for (Index k = w.lo; k <= w.hi; ++k) {
    const auto u1 = u(k + 1), u2 = u(-k - 1), u3 = u(k), u4 = u(-k);
    const auto ck = c(k);
    const auto lhs = m.f * u1 + m.g * u2 + m.a * u3 + m.b * u4;
    for (std::size_t i = 0; i < n; ++i) {
      const double s = row_scale(m.f, u1, i) + row_scale(m.g, u2, i) + row_scale(m.a, u3, i) +
                       row_scale(m.b, u4, i) + magnitude(ck[i]);
      detail::record(r, k, lhs[i] - ck[i], s, tol);
    }
  }
  return r;
}

template <Field F>
struct SystemSolution {
  VectorSequence<F> u;
  Matrix<F> Z;
};

/// J x = c, W x = h through the doubled system for (u, v) = (x, phi* x):
/// (u, v)(k+1) = T (u, v)(k) + g(k) with g(k) = Mfwd^{-1} (c(k); c(-k-1)).
/// The general solution is X r + Y with Y = H g for K = T; r is fixed by
/// W u = h and W phi* v = h. The result is verified on `w`.
template <Field F>
SystemSolution<F> solve_system(const MatrixFG<F>& m, const VectorSequence<F>& c, const SystemBoundary<F>& W,
                               const Vector<F>& h, Window w = {}, Tolerance tol = {}) {
  const std::size_t n = m.dim();
  if (c.dim() != n || h.size() != n || W.rows() != n) {
    throw Error(ErrorCode::ConditionCountMismatch, "conditions must produce exactly n = " + std::to_string(n) + " values");
  }
  if (!c.finitely_supported()) throw Error(ErrorCode::InvalidArgument, "c must be finitely supported");
  FundamentalMatrix<F> fm(m, tol);
  const auto& fwd_inv = *fm.blocks().fwd_inv;

  std::vector<typename VectorSequence<F>::Entry> g_entries;
  std::map<Index, bool> ks;
  for (const auto& [j, cj] : c.support()) {
    ks[j] = true;
    ks[-j - 1] = true;
  }
  for (const auto& [k, unused] : ks) g_entries.emplace_back(k, fwd_inv * stack(c(k), c(-k - 1)));
  const auto g = VectorSequence<F>::finite(std::move(g_entries), 2 * n);
  const auto Y = SystemGreen<F>(fm.generator(), tol).apply(g);

  auto top = [&](Index k) { return fm.X(k).sub(0, 0, n, 2 * n); };
  auto bottom = [&](Index k) { return fm.X(k).sub(n, 0, n, 2 * n); };
  const Matrix<F> z_top = W.on_matrix(top, false);
  const Matrix<F> z_bot = W.on_matrix(bottom, true);
  Matrix<F> Z(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < 2 * n; ++j) {
      Z(i, j) = z_top(i, j);
      Z(i + n, j) = z_bot(i, j);
    }
  const auto z_inv = inverse(Z, tol);
  if (!z_inv) throw Error(ErrorCode::SingularZ, "Z = (W; W phi*) X is singular");

  const auto uY = VectorSequence<F>::rule([Y, n](Index k) { return head(Y(k), n); }, n);
  const auto vY = VectorSequence<F>::rule([Y, n](Index k) { return tail(Y(k), n); }, n);
  const auto r = (*z_inv) * stack(h - W(uY), h - W.reflected(vY));

  auto u = VectorSequence<F>::rule([fm, r, Y, n](Index k) { return head(fm.X(k) * r + Y(k), n); }, n);
  u = VectorSequence<F>::tabulated(u, w.padded(1, 1));

  const auto res = system_residual(m, u, c, w, tol);
  if (!res.passes(FieldTraits<F>::exact, tol)) {
    throw Error(ErrorCode::VerificationFailed, "J u != c at " + std::to_string(res.offending.size()) + " indices");
  }
  if (!vector_mismatch(W(u), h, tol).passes(FieldTraits<F>::exact, tol)) {
    throw Error(ErrorCode::VerificationFailed, "W u != h");
  }
  return {u, Z};
}

/// Embedding of sum_{j=-n}^{n} (a_j x_{k+j} + b_j x_{-k-j}) = c_k into a
/// system of dimension 2n with state y_k = (x_{k-n}, ..., x_{k+n-1}).
template <Field F>
struct ScalarEmbedding {
  MatrixFG<F> system;
  F leading_det;       // a_n a_{-n} - b_n b_{-n}
  std::size_t n = 0;   // scalar reach; the system has dimension 2n
  /// x_k is component `component` of y_k
  std::size_t component() const { return n; }

  /// c_k placed in the last component.
  VectorSequence<F> forcing(const Sequence<F>& c) const {
    std::vector<typename VectorSequence<F>::Entry> out;
    for (const auto& [k, ck] : c.support()) {
      Vector<F> v(2 * n);
      v[2 * n - 1] = ck;
      out.emplace_back(k, std::move(v));
    }
    return VectorSequence<F>::finite(std::move(out), 2 * n);
  }

  Sequence<F> project(const VectorSequence<F>& y) const {
    const std::size_t i = component();
    return Sequence<F>::rule([y, i](Index k) { return y(k)[i]; });
  }
};

/// a and b hold a_{-n}..a_n and b_{-n}..b_n (length 2n+1).
///
/// Rows 0..2n-2 encode the shift structure y_{k+1,i} = y_{k,i+1}; the last row
/// is a_n x_{k+n} + sum_{i<2n} a_{i-n} x_{k+i-n} + sum_{j=-n+1}^{n} b_j x_{-k-j}.
/// The reflected term b_{-n} x_{-k+n} lies outside the window of y_{-k} and
/// y_{-k-1}, so it cannot be expressed and is rejected.
template <Field F>
ScalarEmbedding<F> embed_scalar(const std::vector<F>& a, const std::vector<F>& b) {
  if (a.size() != b.size() || a.size() < 3 || a.size() % 2 == 0) {
    throw Error(ErrorCode::InvalidArgument, "coefficient lists must both have length 2n+1 with n >= 1");
  }
  const std::size_t n = a.size() / 2;
  auto A_ = [&](Index j) { return a[static_cast<std::size_t>(j + static_cast<Index>(n))]; };
  auto B_ = [&](Index j) { return b[static_cast<std::size_t>(j + static_cast<Index>(n))]; };
  const auto nn = static_cast<Index>(n);
  const F det = A_(nn) * A_(-nn) - B_(nn) * B_(-nn);
  if (is_exact_zero(det)) throw Error(ErrorCode::DegenerateLeading, "a_n a_{-n} - b_n b_{-n} = 0");
  if (!is_exact_zero(B_(-nn))) {
    throw Error(ErrorCode::UnrepresentableTerm,
                "b_{-n} x_{-k+n} is not reachable from the state (x_{k-n}, ..., x_{k+n-1})");
  }
  const std::size_t N = 2 * n;
  MatrixFG<F> m{Matrix<F>::identity(N), Matrix<F>(N, N), Matrix<F>(N, N), Matrix<F>(N, N)};
  for (std::size_t i = 0; i + 1 < N; ++i) m.a(i, i + 1) = -field_one<F>();
  const std::size_t last = N - 1;
  m.f(last, last) = A_(nn);
  for (std::size_t i = 0; i < N; ++i) m.a(last, i) = A_(static_cast<Index>(i) - nn);
  for (Index j = -nn + 1; j <= nn; ++j) m.b(last, static_cast<std::size_t>(nn - j)) = B_(j);
  return {std::move(m), det, n};
}

/// The same equation as a reflection operator: Q = sum a_j D^j, P = sum b_j D^{-j}.
template <Field F>
std::pair<LaurentPoly<F>, LaurentPoly<F>> embedding_operator_parts(const std::vector<F>& a, const std::vector<F>& b) {
  const auto n = static_cast<Index>(a.size() / 2);
  std::vector<std::pair<Index, F>> p, q;
  for (Index j = -n; j <= n; ++j) {
    q.emplace_back(j, a[static_cast<std::size_t>(j + n)]);
    p.emplace_back(-j, b[static_cast<std::size_t>(j + n)]);
  }
  return {LaurentPoly<F>::from_terms(p), LaurentPoly<F>::from_terms(q)};
}

}  // namespace refrec
