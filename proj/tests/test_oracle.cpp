#include <doctest.h>

#include "refrec/oracle.hpp"
#include "support.hpp"

using namespace refrec;
using namespace testing_support;

namespace {

using Rec = RecurrenceOperator<Rational>;
using BF = BoundaryFunctional<Rational>;

const LP D = LP::shift_op(1);
const LP Id = LP::identity();

std::vector<BF> kronecker(std::size_t n) {
  std::vector<BF> W;
  for (std::size_t i = 0; i < n; ++i) W.push_back(BF::eval_at(static_cast<Index>(i)));
  return W;
}

}  // namespace

TEST_CASE("direct iteration") {
  auto geo = iterate_scalar(Rec({Q(-2), Q(1)}), {Q(1)}, Seq::zero(), Window(-5, 5));
  Q p(1, 32);
  for (Index k = -5; k <= 5; ++k, p *= Q(2)) CHECK(geo(k) == p);

  auto fib = iterate_scalar(Rec({Q(-1), Q(-1), Q(1)}), {Q(0), Q(1)}, Seq::zero(), Window(-5, 10));
  const Q fwd[] = {Q(0), Q(1), Q(1), Q(2), Q(3), Q(5), Q(8), Q(13), Q(21), Q(34), Q(55)};
  for (Index k = 0; k <= 10; ++k) CHECK(fib(k) == fwd[k]);
  const Q bwd[] = {Q(5), Q(-3), Q(2), Q(-1), Q(1)};  // k = -5..-1
  for (Index k = -5; k <= -1; ++k) CHECK(fib(k) == bwd[k + 5]);

  CHECK_THROWS_AS(iterate_scalar(Rec({Q(-2), Q(1)}), {}, Seq::zero(), Window(-5, 5)), Error);
}

TEST_CASE("iteration matches the initial value solver") {
  Rng rng(61);
  for (int t = 0; t < 100; ++t) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 4));
    Rec s(rng.recurrence(n));
    auto c = rng.finite_sequence(-8, 8, 5);
    auto it = iterate_scalar(s, std::vector<Q>(n), c, Window(-12, 12));
    REQUIRE(same_on(it, solve_ivp(s, c), -12, 12));
  }
}

TEST_CASE("dense solves agree with iteration under Kronecker conditions") {
  Rng rng(62);
  for (int t = 0; t < 50; ++t) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 3));
    Rec s(rng.recurrence(n));
    auto c = rng.finite_sequence(-6, 6, 4);
    std::vector<Q> init(n);
    Vector<Q> h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = init[i] = rng.rational();
    auto it = iterate_scalar(s, init, c, Window(-10, 10));
    auto dense = dense_window_solve(assemble_recurrence(s, c, kronecker(n), h, Window(-12, 12)), Window(-10, 10));
    REQUIRE(same_on(it, dense, -10, 10));
  }
}

TEST_CASE("dense solves of reflection problems") {
  ReflectionOperator<Rational> exac(Q(2) * Id, D);
  auto u = dense_window_solve(assemble_reflection(exac, Seq::delta(0, Q(1)), {}, Vector<Q>{}, Window(-12, 12)),
                              Window(-10, 10));
  auto rbar = reduce_gcd(exac).Rtilde;
  CHECK(same_on(u, rbar.apply(Seq::delta(0, Q(1, 3))), -10, 10));

  auto zero = dense_window_solve(assemble_reflection(exac, Seq::zero(), {}, Vector<Q>{}, Window(-12, 12)),
                                 Window(-10, 10));
  for (Index k = -10; k <= 10; ++k) CHECK(zero(k).is_zero());

  ReflectionOperator<Rational> degenerate(-Id, D);
  try {
    dense_window_solve(assemble_reflection(degenerate, Seq::zero(), {}, Vector<Q>{}, Window(-12, 12)),
                       Window(-10, 10));
    FAIL("expected an undetermined window system");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularWindowSystem);
  }
}

TEST_CASE("inconsistent window systems are rejected") {
  // u(0) = 1 and u(0) = 2
  WindowSystem<Rational> ws{Window(0, 0), 1, {}};
  ws.rows.push_back({{{0, Q(1)}}, Q(1)});
  ws.rows.push_back({{{0, Q(1)}}, Q(2)});
  CHECK_THROWS_AS(dense_window_solve(ws, Window(0, 0)), Error);
  CHECK_THROWS_AS(assemble_reflection(ReflectionOperator<Rational>::plain(D), Seq::zero(), {BF::eval_at(9)},
                                      Vector<Q>{Q(1)}, Window(-3, 3)),
                  Error);
}

TEST_CASE("window size does not change interior values") {
  Rng rng(63);
  for (int t = 0; t < 30; ++t) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 3));
    Rec s(rng.recurrence(n));
    auto c = rng.finite_sequence(-5, 5, 3);
    Vector<Q> h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = rng.rational();
    auto small = dense_window_solve(assemble_recurrence(s, c, kronecker(n), h, Window(-8, 8)), Window(-6, 6));
    auto large = dense_window_solve(assemble_recurrence(s, c, kronecker(n), h, Window(-12, 12)), Window(-6, 6));
    REQUIRE(same_on(small, large, -6, 6));
  }
  ReflectionOperator<Rational> L(Q(3) * Id, D - Id);
  auto a = dense_window_solve(assemble_reflection(L, Seq::delta(1, Q(1)), {BF::eval_at(0)}, Vector<Q>{Q(1)},
                                                  Window(-8, 8)),
                              Window(-6, 6));
  auto b = dense_window_solve(assemble_reflection(L, Seq::delta(1, Q(1)), {BF::eval_at(0)}, Vector<Q>{Q(1)},
                                                  Window(-12, 12)),
                              Window(-6, 6));
  CHECK(same_on(a, b, -6, 6));
}

TEST_CASE("residuals") {
  Rec s({Q(-1), Q(-1), Q(1)});
  auto c = Seq::delta(2, Q(3));
  auto u = solve_ivp(s, c);
  CHECK(residual(s.poly(), u, c, Window(-10, 10)).exact_zero);
  auto bumped = u + Seq::delta(4, Q(1, 7));
  auto r = residual(s.poly(), bumped, c, Window(-10, 10));
  CHECK_FALSE(r.exact_zero);
  CHECK(r.offending == std::vector<Index>{2, 3, 4});
  CHECK(r.max_abs > 0);

  // complex: relative measure
  using LC = LaurentPoly<Complex>;
  auto sc = LC::shift_op(1) - Complex(2, 0) * LC::identity();
  auto geo = Sequence<Complex>::rule([](Index k) { return Complex(std::pow(2.0, static_cast<double>(k)), 0); });
  auto rc = residual(sc, geo, Sequence<Complex>::zero(), Window(-30, 30));
  CHECK(rc.max_relative < 1e-15);
  CHECK(rc.passes(false, Tolerance{}));
}
