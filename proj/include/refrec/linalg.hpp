#pragma once

// Dense matrices over a field. Exact fields use fraction-free (Bareiss)
// elimination and exact pivots; Complex uses partial pivoting with a
// scale-relative zero test.

#include <algorithm>
#include <optional>
#include <vector>

#include "refrec/errors.hpp"
#include "refrec/scalar.hpp"
#include "refrec/sequence.hpp"

namespace refrec {

template <Field F>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, field_zero<F>()) {}
  Matrix(std::initializer_list<std::initializer_list<F>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw Error(ErrorCode::InvalidArgument, "ragged matrix literal");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = field_one<F>();
    return m;
  }

  /// [[a, b], [c, d]] from four equally sized square blocks.
  static Matrix from_blocks(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d) {
    const std::size_t n = a.rows();
    for (const Matrix* m : {&a, &b, &c, &d}) {
      if (m->rows() != n || m->cols() != n) throw Error(ErrorCode::InvalidArgument, "block size mismatch");
    }
    Matrix out(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        out(i, j) = a(i, j);
        out(i, j + n) = b(i, j);
        out(i + n, j) = c(i, j);
        out(i + n, j + n) = d(i, j);
      }
    }
    return out;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  F& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const F& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Matrix sub(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw Error(ErrorCode::InvalidArgument, "submatrix out of range");
    Matrix out(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
    return out;
  }

  /// Block k in 1..4 of a 2n x 2n matrix, row-major: [[1, 2], [3, 4]].
  Matrix block(int k) const {
    if (rows_ != cols_ || rows_ % 2 != 0 || k < 1 || k > 4) {
      throw Error(ErrorCode::InvalidArgument, "block() needs an even square matrix and k in 1..4");
    }
    const std::size_t n = rows_ / 2;
    return sub(k > 2 ? n : 0, (k % 2 == 0) ? n : 0, n, n);
  }

  Vector<F> row_vector(std::size_t i) const {
    Vector<F> v(cols_);
    for (std::size_t j = 0; j < cols_; ++j) v[j] = (*this)(i, j);
    return v;
  }

  double max_magnitude() const {
    double m = 0;
    for (const auto& x : data_) m = std::max(m, magnitude(x));
    return m;
  }

  bool is_exact_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const F& x) { return refrec::is_exact_zero(x); });
  }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator-(Matrix a) {
    for (auto& x : a.data_) x = -x;
    return a;
  }
  friend Matrix operator*(const F& s, Matrix a) {
    for (auto& x : a.data_) x = s * x;
    return a;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw Error(ErrorCode::InvalidArgument, "matrix product shape mismatch");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t l = 0; l < a.cols_; ++l) {
        const F& ail = a(i, l);
        if (refrec::is_exact_zero(ail)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += ail * b(l, j);
      }
    }
    return out;
  }
  friend Vector<F> operator*(const Matrix& a, const Vector<F>& v) {
    if (a.cols_ != v.size()) throw Error(ErrorCode::InvalidArgument, "matrix-vector shape mismatch");
    Vector<F> out(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) out[i] += a(i, j) * v[j];
    return out;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  void check_same(const Matrix& o) const {
    if (o.rows_ != rows_ || o.cols_ != cols_) throw Error(ErrorCode::InvalidArgument, "matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<F> data_;
};

template <Field F>
bool near(const Matrix<F>& a, const Matrix<F>& b, Tolerance tol = {}) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!FieldTraits<F>::near(a(i, j), b(i, j), tol)) return false;
  return true;
}

template <Field F>
Vector<F> stack(const Vector<F>& top, const Vector<F>& bottom) {
  std::vector<F> out = top.data();
  out.insert(out.end(), bottom.data().begin(), bottom.data().end());
  return Vector<F>(std::move(out));
}

template <Field F>
Vector<F> head(const Vector<F>& v, std::size_t n) {
  return Vector<F>(std::vector<F>(v.data().begin(), v.data().begin() + static_cast<std::ptrdiff_t>(n)));
}

template <Field F>
Vector<F> tail(const Vector<F>& v, std::size_t n) {
  return Vector<F>(std::vector<F>(v.data().end() - static_cast<std::ptrdiff_t>(n), v.data().end()));
}

/// Determinant. Bareiss over exact fields, partial-pivot LU otherwise.
template <Field F>
F determinant(Matrix<F> m) {
  if (!m.square()) throw Error(ErrorCode::InvalidArgument, "determinant of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return field_one<F>();
  if constexpr (FieldTraits<F>::exact) {
    F sign = field_one<F>();
    F prev = field_one<F>();
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (is_exact_zero(m(k, k))) {
        std::size_t p = k + 1;
        while (p < n && is_exact_zero(m(p, k))) ++p;
        if (p == n) return field_zero<F>();
        for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
        sign = -sign;
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        for (std::size_t j = k + 1; j < n; ++j) {
          m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
        }
      }
      prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
  } else {
    F det = field_one<F>();
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      for (std::size_t i = k + 1; i < n; ++i)
        if (magnitude(m(i, k)) > magnitude(m(p, k))) p = i;
      if (is_exact_zero(m(p, k))) return field_zero<F>();
      if (p != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
        det = -det;
      }
      det *= m(k, k);
      for (std::size_t i = k + 1; i < n; ++i) {
        const F f = m(i, k) / m(k, k);
        for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
      }
    }
    return det;
  }
}

/// Reduced row echelon form. For inexact fields an entry is treated as zero
/// when it is below eps times the largest magnitude of the input.
template <Field F>
struct RowEchelon {
  Matrix<F> reduced;
  std::vector<std::size_t> pivot_cols;  // pivot column of row r, r < rank
  std::size_t rank() const { return pivot_cols.size(); }
};

template <Field F>
RowEchelon<F> row_echelon(Matrix<F> m, Tolerance tol = {}) {
  const double scale = m.max_magnitude();
  auto negligible = [&](const F& x) {
    if constexpr (FieldTraits<F>::exact) {
      return is_exact_zero(x);
    } else {
      return magnitude(x) <= tol.eps * scale;
    }
  };
  RowEchelon<F> out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    if constexpr (FieldTraits<F>::exact) {
      while (p < m.rows() && is_exact_zero(m(p, c))) ++p;
    } else {
      for (std::size_t i = r + 1; i < m.rows(); ++i)
        if (magnitude(m(i, c)) > magnitude(m(p, c))) p = i;
    }
    if (p == m.rows() || negligible(m(p, c))) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(p, j));
    const F inv = field_one<F>() / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || is_exact_zero(m(i, c))) continue;
      const F f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    out.pivot_cols.push_back(c);
    ++r;
  }
  if constexpr (!FieldTraits<F>::exact) {
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (negligible(m(i, j))) m(i, j) = field_zero<F>();
  }
  out.reduced = std::move(m);
  return out;
}

/// Inverse, or nullopt when singular.
template <Field F>
std::optional<Matrix<F>> inverse(const Matrix<F>& m, Tolerance tol = {}) {
  if (!m.square()) throw Error(ErrorCode::InvalidArgument, "inverse of non-square matrix");
  const std::size_t n = m.rows();
  Matrix<F> aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = field_one<F>();
  }
  // Zero test against the scale of m only, not of the identity block.
  RowEchelon<F> e;
  if constexpr (FieldTraits<F>::exact) {
    e = row_echelon(std::move(aug), tol);
  } else {
    Tolerance scaled = tol;
    const double s = m.max_magnitude();
    if (s > 0 && s < 1) scaled.eps = tol.eps * s;
    e = row_echelon(std::move(aug), scaled);
  }
  if (e.rank() < n || e.pivot_cols[n - 1] != n - 1) return std::nullopt;
  return e.reduced.sub(0, n, n, n);
}

/// Solves m x = b for square nonsingular m; nullopt when singular.
template <Field F>
std::optional<Vector<F>> solve(const Matrix<F>& m, const Vector<F>& b, Tolerance tol = {}) {
  auto inv = inverse(m, tol);
  if (!inv) return std::nullopt;
  return (*inv) * b;
}

/// Basis of {x : m x = 0}, one column per vector.
template <Field F>
std::vector<Vector<F>> null_space(const Matrix<F>& m, Tolerance tol = {}) {
  const auto e = row_echelon(m, tol);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : e.pivot_cols) is_pivot[c] = true;
  std::vector<Vector<F>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vector<F> v(m.cols());
    v[free] = field_one<F>();
    for (std::size_t r = 0; r < e.rank(); ++r) v[e.pivot_cols[r]] = -e.reduced(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace refrec
