#pragma once

#include <random>
#include <vector>

#include "refrec/laurent.hpp"
#include "refrec/linalg.hpp"
#include "refrec/reflection.hpp"
#include "refrec/sequence.hpp"

namespace testing_support {

using refrec::Index;
using refrec::LaurentPoly;
using refrec::Rational;
using refrec::ReflectionOperator;
using refrec::Sequence;
using Q = Rational;
using LP = LaurentPoly<Rational>;
using Op = ReflectionOperator<Rational>;
using Seq = Sequence<Rational>;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(gen_); }
  bool coin() { return integer(0, 1) == 1; }

  /// p/q with |p| <= 9, 1 <= q <= 5.
  Q rational() { return Q(integer(-9, 9), integer(1, 5)); }
  Q nonzero_rational() {
    for (;;) {
      Q q = rational();
      if (!q.is_zero()) return q;
    }
  }

  /// Finitely supported sequence with up to `count` points in [lo, hi].
  Seq finite_sequence(Index lo, Index hi, int count) {
    std::vector<Seq::Entry> e;
    std::vector<bool> used(static_cast<std::size_t>(hi - lo + 1), false);
    for (int i = 0; i < count; ++i) {
      const Index k = integer(lo, hi);
      if (used[static_cast<std::size_t>(k - lo)]) continue;
      used[static_cast<std::size_t>(k - lo)] = true;
      e.emplace_back(k, rational());
    }
    return Seq::finite(e);
  }

  /// Dense random sequence given by a rule: deterministic in k.
  Seq rule_sequence() {
    const auto salt = static_cast<std::uint64_t>(integer(0, 1 << 30));
    return Seq::rule([salt](Index k) {
      std::mt19937_64 g(salt ^ static_cast<std::uint64_t>(k * 2654435761LL));
      return Q(static_cast<long>(g() % 19) - 9, static_cast<long>(g() % 4) + 1);
    });
  }

  LP laurent(Index lo, Index hi, int max_terms) {
    std::vector<std::pair<Index, Q>> t;
    const int count = static_cast<int>(integer(1, max_terms));
    for (int i = 0; i < count; ++i) t.emplace_back(integer(lo, hi), rational());
    return LP::from_terms(t);
  }

  LP nonzero_laurent(Index lo, Index hi, int max_terms) {
    for (;;) {
      LP p = laurent(lo, hi, max_terms);
      if (!p.is_zero()) return p;
    }
  }

  Op op(Index lo, Index hi, int max_terms) { return Op(laurent(lo, hi, max_terms), laurent(lo, hi, max_terms)); }

  /// a_0..a_n with a_0 a_n != 0.
  std::vector<Q> recurrence(std::size_t n) {
    std::vector<Q> a(n + 1);
    for (auto& x : a) x = rational();
    a.front() = nonzero_rational();
    a.back() = nonzero_rational();
    return a;
  }

  refrec::Matrix<Q> matrix(std::size_t n) {
    refrec::Matrix<Q> m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = rational();
    return m;
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

inline bool same_on(const Seq& a, const Seq& b, Index lo, Index hi) {
  for (Index k = lo; k <= hi; ++k)
    if (!(a(k) == b(k))) return false;
  return true;
}

}  // namespace testing_support
