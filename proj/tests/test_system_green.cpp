#include <doctest.h>

#include "refrec/oracle.hpp"
#include "refrec/scalar_green.hpp"
#include "refrec/system_green.hpp"
#include "support.hpp"

using namespace refrec;
using namespace testing_support;

namespace {

using M = Matrix<Rational>;
using V = Vector<Rational>;
using VS = VectorSequence<Rational>;
using SB = SystemBoundary<Rational>;
using BF = BoundaryFunctional<Rational>;

MatrixFG<Rational> scalar_system(const Q& f, const Q& g, const Q& a, const Q& b) {
  return {M{{f}}, M{{g}}, M{{a}}, M{{b}}};
}

/// Random instance whose two block matrices are invertible.
MatrixFG<Rational> random_system(Rng& rng, std::size_t n) {
  for (;;) {
    MatrixFG<Rational> m{rng.matrix(n), rng.matrix(n), rng.matrix(n), rng.matrix(n)};
    if (block_pair(m, false).invertible()) return m;
  }
}

M random_invertible(Rng& rng, std::size_t n) {
  for (;;) {
    auto k = rng.matrix(n);
    if (!determinant(k).is_zero()) return k;
  }
}

VS random_vector_forcing(Rng& rng, std::size_t n, Index lo, Index hi, int count) {
  std::vector<VS::Entry> e;
  for (int i = 0; i < count; ++i) {
    const Index k = rng.integer(lo, hi);
    if (std::any_of(e.begin(), e.end(), [k](const auto& x) { return x.first == k; })) continue;
    V v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = rng.rational();
    e.emplace_back(k, v);
  }
  return VS::finite(e, n);
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("block matrices") {
  auto bp = block_pair(scalar_system(Q(1), Q(0), Q(5), Q(0)));
  CHECK(bp.fwd == M{{Q(1), Q(0)}, {Q(0), Q(5)}});
  CHECK(bp.bwd == M{{Q(5), Q(0)}, {Q(0), Q(1)}});
  CHECK(bp.invertible());

  CHECK(code_of([] { block_pair(scalar_system(Q(1), Q(0), Q(0), Q(0))); }) == ErrorCode::SingularBlock);
  // F = G and B = A: equal columns
  CHECK_FALSE(block_pair(scalar_system(Q(1), Q(1), Q(2), Q(2)), false).fwd_inv.has_value());

  Rng rng(51);
  for (int t = 0; t < 20; ++t) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 3));
    auto a = rng.matrix(n), b = rng.matrix(n), c = rng.matrix(n), d = rng.matrix(n);
    auto big = M::from_blocks(a, b, c, d);
    REQUIRE(big.block(1) == a);
    REQUIRE(big.block(2) == b);
    REQUIRE(big.block(3) == c);
    REQUIRE(big.block(4) == d);
  }
}

TEST_CASE("fundamental matrices") {
  FundamentalMatrix<Rational> fm(scalar_system(Q(1), Q(0), Q(3), Q(0)));
  Q p(1);
  for (Index k = 0; k <= 8; ++k, p *= Q(-3)) CHECK(fm(k)(0, 0) == p);
  CHECK(fm(-2)(0, 0) == Q(1, 9));

  Rng rng(52);
  for (int t = 0; t < 50; ++t) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 3));
    auto m = random_system(rng, n);
    FundamentalMatrix<Rational> f(m);
    REQUIRE(f(0) == M::identity(n));
    for (Index k = -8; k <= 8; ++k) {
      REQUIRE((m.f * f(k + 1) + m.g * f(-k - 1) + m.a * f(k) + m.b * f(-k)).is_exact_zero());
      REQUIRE(f.X(k + 1) == f.generator() * f.X(k));
      REQUIRE(f.X(-k) * f.X(k) == M::identity(2 * n));
    }
  }
}

TEST_CASE("Green's function of a first order system") {
  auto id = first_order_green(M::identity(2));
  CHECK(id(3, 1) == M::identity(2));
  CHECK(id(-2, -1) == -M::identity(2));
  CHECK(id(0, 5).is_exact_zero());
  CHECK(code_of([] { first_order_green(M{{Q(0)}}); }) == ErrorCode::SingularK);

  auto two = first_order_green(M{{Q(2)}});
  auto u = two.apply(VS::delta(0, V{Q(1)}));
  for (Index k = -6; k <= 6; ++k) {
    Q want;
    if (k >= 1) {
      want = Q(1);
      for (Index i = 1; i < k; ++i) want *= Q(2);
    }
    CHECK(u(k)[0] == want);
  }

  Rng rng(53);
  for (int t = 0; t < 50; ++t) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 3));
    auto K = random_invertible(rng, n);
    auto c = random_vector_forcing(rng, n, -6, 6, 5);
    auto v = first_order_green(K).apply(c);
    for (Index k = -10; k <= 10; ++k) REQUIRE(v(k + 1) - K * v(k) == c(k));
  }
}

TEST_CASE("boundary value problems for systems") {
  // W = evaluation at 0 and c = 0 gives fundamental matrix propagation
  Rng rng(54);
  for (int t = 0; t < 20; ++t) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 3));
    auto m = random_system(rng, n);
    V u0(n);
    for (std::size_t i = 0; i < n; ++i) u0[i] = rng.rational();
    auto sol = solve_system(m, VS::zero(n), SB::eval_at(0, n), u0);
    REQUIRE(sol.Z == M::identity(2 * n));
    FundamentalMatrix<Rational> f(m);
    for (Index k = -10; k <= 10; ++k) REQUIRE(sol.u(k) == f(k) * u0);
  }

  // x_{k+1} = 2 x_k
  auto geo = solve_system(scalar_system(Q(1), Q(0), Q(-2), Q(0)), VS::zero(1), SB::eval_at(0, 1), V{Q(1)});
  Q p(1);
  for (Index k = 0; k <= 8; ++k, p *= Q(2)) CHECK(geo.u(k)[0] == p);
  CHECK(geo.u(-1)[0] == Q(1, 2));
}

TEST_CASE("system solutions agree with a dense solve") {
  Rng rng(55);
  int checked = 0;
  for (int t = 0; t < 40; ++t) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 2));
    auto m = random_system(rng, n);
    VS c = t == 0 ? VS::delta(0, [n] {
      V e(n);
      e[0] = Q(1);
      return e;
    }())
                  : random_vector_forcing(rng, n, -5, 5, 4);
    SB W({{rng.matrix(n), rng.integer(-3, 3)}, {rng.matrix(n), rng.integer(-3, 3)}});
    V h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = rng.rational();
    SystemSolution<Rational> sol;
    try {
      sol = solve_system(m, c, W, h, Window(-12, 12));
    } catch (const Error& e) {
      REQUIRE(e.code() == ErrorCode::SingularZ);
      continue;
    }
    REQUIRE(system_residual(m, sol.u, c, Window(-12, 12)).exact_zero);
    REQUIRE(W(sol.u) == h);
    auto dense = dense_window_solve_system(assemble_system(m, c, W, h, Window(-13, 13)), Window(-10, 10));
    for (Index k = -10; k <= 10; ++k) REQUIRE(sol.u(k) == dense(k));
    ++checked;
  }
  CHECK(checked > 20);
}

TEST_CASE("embedding scalar reflection recurrences") {
  // x_{k+1} + x_{k-1} = c_k
  auto e = embed_scalar<Rational>({Q(1), Q(0), Q(1)}, {Q(0), Q(0), Q(0)});
  CHECK(e.leading_det == Q(1));
  CHECK(e.system.dim() == 2);
  auto sol = solve_system(e.system, e.forcing(Seq::delta(0, Q(1))), SB::eval_at(0, 2), V{Q(0), Q(1)});
  auto x = e.project(sol.u);
  CHECK(x(-1) == Q(0));
  CHECK(x(0) == Q(1));
  for (Index k = -9; k <= 9; ++k) REQUIRE(x(k + 1) + x(k - 1) == (k == 0 ? Q(1) : Q(0)));

  // L = D + m phi*: a_1 = 1, b_0 = m
  CHECK(code_of([] { embed_scalar<Rational>({Q(0), Q(0), Q(1)}, {Q(0), Q(2), Q(0)}); }) ==
        ErrorCode::DegenerateLeading);
  CHECK(code_of([] { embed_scalar<Rational>({Q(1), Q(0), Q(1)}, {Q(3), Q(0), Q(0)}); }) ==
        ErrorCode::UnrepresentableTerm);
}

TEST_CASE("embedding determinants") {
  Rng rng(56);
  for (int t = 0; t < 100; ++t) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 2));
    auto a = rng.recurrence(2 * n);
    std::vector<Q> b(2 * n + 1);
    for (auto& x : b) x = rng.rational();
    b.front() = Q(0);
    auto e = embed_scalar(a, b);
    auto bp = block_pair(e.system);
    REQUIRE(e.leading_det == a.back() * a.front());
    REQUIRE(determinant(bp.fwd) == e.leading_det);
    REQUIRE(determinant(bp.bwd) == e.leading_det);
  }
}

TEST_CASE("embedded solutions match the scalar reflection problem") {
  Rng rng(57);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = t % 2 == 0 ? 1 : 2;
    auto a = rng.recurrence(2 * n);
    std::vector<Q> b(2 * n + 1);
    for (auto& x : b) x = rng.rational();
    b.front() = Q(0);
    auto e = embed_scalar(a, b);
    auto c = rng.finite_sequence(-4, 4, 3);
    V h(2 * n);
    std::vector<BF> W;
    for (std::size_t i = 0; i < 2 * n; ++i) {
      h[i] = rng.rational();
      W.push_back(BF::eval_at(static_cast<Index>(i) - static_cast<Index>(n)));
    }
    auto sol = solve_system(e.system, e.forcing(c), SB::eval_at(0, 2 * n), h, Window(-14, 14));
    auto x = e.project(sol.u);

    auto [P, Qp] = embedding_operator_parts(a, b);
    ReflectionOperator<Rational> L(P, Qp);
    REQUIRE(residual(L, x, c, Window(-12, 12)).exact_zero);
    auto dense = dense_window_solve(assemble_reflection(L, c, W, h, Window(-13, 13)), Window(-10, 10));
    REQUIRE(same_on(x, dense, -10, 10));

    REQUIRE(same_on(solve_reflection_bvp(L, c, W, h, Window(-10, 10)), x, -10, 10));
  }
}

TEST_CASE("complex systems") {
  using MC = Matrix<Complex>;
  MatrixFG<Complex> m{MC{{Complex(1, 0)}}, MC{{Complex(0, 0)}}, MC{{Complex(0, -2)}}, MC{{Complex(0.5, 0)}}};
  auto c = VectorSequence<Complex>::delta(1, Vector<Complex>{Complex(1, 1)});
  auto sol = solve_system(m, c, SystemBoundary<Complex>::eval_at(0, 1), Vector<Complex>{Complex(1, 0)});
  CHECK(system_residual(m, sol.u, c, Window(-10, 10)).max_relative < 1e-12);
}
