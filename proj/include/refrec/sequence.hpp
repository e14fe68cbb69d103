#pragma once

// Bi-infinite sequences Z -> V with V = F or F^n, together with the shift,
// reflection, parity projections and sign alternation acting on them.

#include <algorithm>
#include <functional>
#include <memory>
#include <mutex>
#include <utility>
#include <variant>
#include <vector>

#include "refrec/errors.hpp"
#include "refrec/scalar.hpp"

namespace refrec {

/// Closed index range [lo, hi].
struct Window {
  Index lo = -16;
  Index hi = 16;

  Window() = default;
  Window(Index lo_, Index hi_) : lo(lo_), hi(hi_) {
    if (hi < lo) throw Error(ErrorCode::InvalidArgument, "window with hi < lo");
  }
  std::size_t size() const { return static_cast<std::size_t>(hi - lo + 1); }
  bool contains(Index k) const { return lo <= k && k <= hi; }
  Window padded(Index left, Index right) const { return {lo - left, hi + right}; }
  bool operator==(const Window&) const = default;
};

/// Dense vector in F^n. Used as the value type of vector sequences.
template <Field F>
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n) : data_(n, field_zero<F>()) {}
  Vector(std::initializer_list<F> init) : data_(init) {}
  explicit Vector(std::vector<F> data) : data_(std::move(data)) {}

  std::size_t size() const { return data_.size(); }
  F& operator[](std::size_t i) { return data_[i]; }
  const F& operator[](std::size_t i) const { return data_[i]; }
  const std::vector<F>& data() const { return data_; }

  bool is_exact_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const F& x) { return refrec::is_exact_zero(x); });
  }

  Vector& operator+=(const Vector& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Vector& operator-=(const Vector& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  friend Vector operator+(Vector a, const Vector& b) { return a += b; }
  friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
  friend Vector operator-(Vector a) {
    for (auto& x : a.data_) x = -x;
    return a;
  }
  friend Vector operator*(const F& s, Vector v) {
    for (auto& x : v.data_) x = s * x;
    return v;
  }
  friend bool operator==(const Vector& a, const Vector& b) { return a.data_ == b.data_; }

 private:
  void check_same(const Vector& o) const {
    if (o.data_.size() != data_.size()) throw Error(ErrorCode::InvalidArgument, "vector dimension mismatch");
  }
  std::vector<F> data_;
};

/// What a sequence needs from its value type.
template <class V>
struct ValueTraits;

template <Field F>
struct ValueTraits<F> {
  using field = F;
  static F zero(std::size_t /*dim*/) { return field_zero<F>(); }
  static bool is_exact_zero(const F& v) { return refrec::is_exact_zero(v); }
  static std::size_t dim(const F&) { return 1; }
};

template <Field F>
struct ValueTraits<Vector<F>> {
  using field = F;
  static Vector<F> zero(std::size_t dim) { return Vector<F>(dim); }
  static bool is_exact_zero(const Vector<F>& v) { return v.is_exact_zero(); }
  static std::size_t dim(const Vector<F>& v) { return v.size(); }
};

/// A total function Z -> V. Either an explicit finite support (sorted, no
/// duplicates, no stored zeros) or a rule evaluated on demand. Immutable and
/// cheap to copy; copies share state.
template <class V>
class Sequence {
 public:
  using value_type = V;
  using field_type = typename ValueTraits<V>::field;
  using Entry = std::pair<Index, V>;
  using Evaluator = std::function<V(Index)>;

  Sequence() : Sequence(zero(1)) {}

  static Sequence zero(std::size_t dim = 1) { return Sequence(Finite{{}}, dim); }

  /// Entries are sorted here; duplicate indices are rejected and exact zeros dropped.
  static Sequence finite(std::vector<Entry> entries, std::size_t dim = 1) {
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < entries.size(); ++i) {
      if (entries[i].first == entries[i - 1].first) {
        throw Error(ErrorCode::InvalidArgument, "duplicate index in finite sequence");
      }
    }
    std::vector<Entry> kept;
    kept.reserve(entries.size());
    for (auto& e : entries) {
      if (ValueTraits<V>::dim(e.second) != dim) {
        throw Error(ErrorCode::InvalidArgument, "sequence entry has wrong dimension");
      }
      if (!ValueTraits<V>::is_exact_zero(e.second)) kept.push_back(std::move(e));
    }
    return Sequence(Finite{std::move(kept)}, dim);
  }

  static Sequence delta(Index at, V value) {
    const std::size_t dim = ValueTraits<V>::dim(value);
    return finite({{at, std::move(value)}}, dim);
  }

  static Sequence rule(Evaluator f, std::size_t dim = 1) { return Sequence(Rule{std::move(f)}, dim); }

  /// Evaluates `src` on `w` eagerly; outside `w` it defers to `src`.
  static Sequence tabulated(const Sequence& src, Window w) {
    if (src.finitely_supported()) return src;
    auto table = std::make_shared<std::vector<V>>();
    table->reserve(w.size());
    for (Index k = w.lo; k <= w.hi; ++k) table->push_back(src(k));
    return rule(
        [table, w, src](Index k) { return w.contains(k) ? (*table)[static_cast<std::size_t>(k - w.lo)] : src(k); },
        src.dim());
  }

  V operator()(Index k) const {
    if (const auto* f = std::get_if<Finite>(&impl_->repr)) {
      auto it = std::lower_bound(f->entries.begin(), f->entries.end(), k,
                                 [](const Entry& e, Index key) { return e.first < key; });
      if (it != f->entries.end() && it->first == k) return it->second;
      return ValueTraits<V>::zero(impl_->dim);
    }
    return std::get<Rule>(impl_->repr).eval(k);
  }

  std::vector<V> values(Window w) const {
    std::vector<V> out;
    out.reserve(w.size());
    for (Index k = w.lo; k <= w.hi; ++k) out.push_back((*this)(k));
    return out;
  }

  bool finitely_supported() const { return std::holds_alternative<Finite>(impl_->repr); }

  /// Nonzero entries; only meaningful for finitely supported sequences.
  const std::vector<Entry>& support() const {
    const auto* f = std::get_if<Finite>(&impl_->repr);
    if (f == nullptr) throw Error(ErrorCode::InvalidArgument, "support() on a rule sequence");
    return f->entries;
  }

  std::size_t dim() const { return impl_->dim; }

 private:
  struct Finite {
    std::vector<Entry> entries;
  };
  struct Rule {
    Evaluator eval;
  };
  struct Impl {
    std::variant<Finite, Rule> repr;
    std::size_t dim;
  };

  template <class R>
  Sequence(R repr, std::size_t dim) : impl_(std::make_shared<const Impl>(Impl{std::move(repr), dim})) {}

  std::shared_ptr<const Impl> impl_;
};

template <Field F>
using ScalarSequence = Sequence<F>;
template <Field F>
using VectorSequence = Sequence<Vector<F>>;

namespace detail {

/// Re-indexes a finite sequence through `map` and rescales by `weight(k)`
/// (weight evaluated at the *new* index).
template <class V, class Map, class Weight>
Sequence<V> remap_finite(const Sequence<V>& u, Map map, Weight weight) {
  std::vector<typename Sequence<V>::Entry> out;
  out.reserve(u.support().size());
  for (const auto& [k, v] : u.support()) {
    const Index nk = map(k);
    out.emplace_back(nk, weight(nk) * v);
  }
  return Sequence<V>::finite(std::move(out), u.dim());
}

}  // namespace detail

/// result(k) = u(k + j). D is shift by +1.
template <class V>
Sequence<V> shift(const Sequence<V>& u, Index j) {
  using F = typename Sequence<V>::field_type;
  if (j == 0) return u;
  if (u.finitely_supported()) {
    return detail::remap_finite(u, [j](Index k) { return k - j; }, [](Index) { return field_one<F>(); });
  }
  return Sequence<V>::rule([u, j](Index k) { return u(k + j); }, u.dim());
}

/// result(k) = u(-k).
template <class V>
Sequence<V> reflect(const Sequence<V>& u) {
  using F = typename Sequence<V>::field_type;
  if (u.finitely_supported()) {
    return detail::remap_finite(u, [](Index k) { return -k; }, [](Index) { return field_one<F>(); });
  }
  return Sequence<V>::rule([u](Index k) { return u(-k); }, u.dim());
}

template <class V>
Sequence<V> scale(const typename Sequence<V>::field_type& s, const Sequence<V>& u) {
  if (u.finitely_supported()) {
    return detail::remap_finite(u, [](Index k) { return k; }, [&s](Index) { return s; });
  }
  return Sequence<V>::rule([s, u](Index k) { return s * u(k); }, u.dim());
}

template <class V>
Sequence<V> operator+(const Sequence<V>& a, const Sequence<V>& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::InvalidArgument, "sequence dimension mismatch");
  if (a.finitely_supported() && b.finitely_supported()) {
    std::vector<typename Sequence<V>::Entry> out;
    const auto& sa = a.support();
    const auto& sb = b.support();
    std::size_t i = 0, j = 0;
    while (i < sa.size() || j < sb.size()) {
      if (j == sb.size() || (i < sa.size() && sa[i].first < sb[j].first)) {
        out.push_back(sa[i++]);
      } else if (i == sa.size() || sb[j].first < sa[i].first) {
        out.push_back(sb[j++]);
      } else {
        out.emplace_back(sa[i].first, sa[i].second + sb[j].second);
        ++i, ++j;
      }
    }
    return Sequence<V>::finite(std::move(out), a.dim());
  }
  return Sequence<V>::rule([a, b](Index k) { return a(k) + b(k); }, a.dim());
}

template <class V>
Sequence<V> operator-(const Sequence<V>& a, const Sequence<V>& b) {
  using F = typename Sequence<V>::field_type;
  return a + scale(-field_one<F>(), b);
}

/// E: keeps even indices.
template <class V>
Sequence<V> project_even(const Sequence<V>& u) {
  using F = typename Sequence<V>::field_type;
  auto keep = [](Index k) { return k % 2 == 0 ? field_one<F>() : field_zero<F>(); };
  if (u.finitely_supported()) return detail::remap_finite(u, [](Index k) { return k; }, keep);
  return Sequence<V>::rule([u, keep](Index k) { return keep(k) * u(k); }, u.dim());
}

/// O: keeps odd indices.
template <class V>
Sequence<V> project_odd(const Sequence<V>& u) {
  using F = typename Sequence<V>::field_type;
  auto keep = [](Index k) { return k % 2 != 0 ? field_one<F>() : field_zero<F>(); };
  if (u.finitely_supported()) return detail::remap_finite(u, [](Index k) { return k; }, keep);
  return Sequence<V>::rule([u, keep](Index k) { return keep(k) * u(k); }, u.dim());
}

/// (u(k) + u(-k)) / 2
template <class V>
Sequence<V> even_part(const Sequence<V>& u) {
  using F = typename Sequence<V>::field_type;
  const F half = field_one<F>() / (field_one<F>() + field_one<F>());
  return scale(half, u + reflect(u));
}

/// (u(k) - u(-k)) / 2
template <class V>
Sequence<V> odd_part(const Sequence<V>& u) {
  using F = typename Sequence<V>::field_type;
  const F half = field_one<F>() / (field_one<F>() + field_one<F>());
  return scale(half, u - reflect(u));
}

/// (-1)^k u(k)
template <class V>
Sequence<V> alternate_signs(const Sequence<V>& u) {
  using F = typename Sequence<V>::field_type;
  auto sign = [](Index k) { return k % 2 == 0 ? field_one<F>() : -field_one<F>(); };
  if (u.finitely_supported()) return detail::remap_finite(u, [](Index k) { return k; }, sign);
  return Sequence<V>::rule([u, sign](Index k) { return sign(k) * u(k); }, u.dim());
}

/// Pointwise comparison on a window using the field's equality policy.
template <Field F>
bool equal_on(const Sequence<F>& a, const Sequence<F>& b, Window w, Tolerance tol = {}) {
  for (Index k = w.lo; k <= w.hi; ++k) {
    if (!FieldTraits<F>::near(a(k), b(k), tol)) return false;
  }
  return true;
}

template <Field F>
bool equal_on(const VectorSequence<F>& a, const VectorSequence<F>& b, Window w, Tolerance tol = {}) {
  for (Index k = w.lo; k <= w.hi; ++k) {
    const auto va = a(k), vb = b(k);
    if (va.size() != vb.size()) return false;
    for (std::size_t i = 0; i < va.size(); ++i) {
      if (!FieldTraits<F>::near(va[i], vb[i], tol)) return false;
    }
  }
  return true;
}

}  // namespace refrec
