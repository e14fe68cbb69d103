#include <doctest.h>

#include "refrec/reflection.hpp"
#include "support.hpp"

using namespace refrec;
using namespace testing_support;

namespace {

const LP D = LP::shift_op(1);
const LP Dinv = LP::shift_op(-1);
const LP Id = LP::identity();

Index order(const LP& s) { return s.deg_high() - s.deg_low(); }

}  // namespace

TEST_CASE("application") {
  Rng rng(31);
  auto u = rng.rule_sequence();
  auto r = Op::reflection().apply(u);
  for (Index k = -10; k <= 10; ++k) CHECK(r(k) == u(-k));

  const Q m(3);
  auto lu = Op(m * Id, D).apply(u);
  for (Index k = -10; k <= 10; ++k) CHECK(lu(k) == u(k + 1) + m * u(-k));

  auto ones = Seq::rule([](Index) { return Q(1); });
  auto c = Op(m * Id, D - Id).apply(ones);
  for (Index k = -10; k <= 10; ++k) CHECK(c(k) == m);
}

TEST_CASE("composition examples") {
  CHECK(op_compose(Op::reflection(), Op::reflection()) == Op::identity());
  const Q m(2);
  CHECK(op_compose(Op(m * Id, D), Op(m * Id, -Dinv)) == Op::plain(Q(3) * Id));
  CHECK(op_compose(Op::identity(), Op(D, Dinv)) == Op(D, Dinv));
  // D phi* = phi* D^-1
  CHECK(op_compose(Op::plain(D), Op::reflection()) == Op(Dinv, LP{}));
}

TEST_CASE("composition agrees with repeated application") {
  Rng rng(32);
  for (int t = 0; t < 50; ++t) {
    auto l1 = rng.op(-3, 3, 4), l2 = rng.op(-3, 3, 4);
    auto u = rng.rule_sequence();
    REQUIRE(same_on(op_compose(l1, l2).apply(u), l1.apply(l2.apply(u)), -12, 12));
  }
}

TEST_CASE("composition is associative") {
  Rng rng(33);
  for (int t = 0; t < 100; ++t) {
    auto a = rng.op(-3, 3, 3), b = rng.op(-3, 3, 3), c = rng.op(-3, 3, 3);
    REQUIRE(op_compose(op_compose(a, b), c) == op_compose(a, op_compose(b, c)));
  }
}

TEST_CASE("full reduction examples") {
  auto full = reduce_full(Op(Q(3) * Id, D - Id));
  CHECK(full.S == D + Dinv + Q(7) * Id);

  auto plain = reduce_full(Op::plain(D + Q(2) * Id));
  CHECK(plain.R == Op(LP{}, -(Dinv + Q(2) * Id)));
  CHECK(plain.S == -((Dinv + Q(2) * Id) * (D + Q(2) * Id)));

  CHECK(reduce_full(Op(Q(2) * Id, D)).S == Q(3) * Id);
}

TEST_CASE("full reduction commutes on a random corpus") {
  Rng rng(34);
  for (int t = 0; t < 500; ++t) {
    auto L = rng.op(-3, 3, 4);
    auto red = reduce_full(L);
    auto rl = op_compose(red.R, L), lr = op_compose(L, red.R);
    REQUIRE(rl == lr);
    REQUIRE(rl.P().is_zero());
    REQUIRE(rl.Q() == red.S);
    auto u = rng.finite_sequence(-10, 10, 6);
    REQUIRE(same_on(red.S.apply(u), red.R.apply(L.apply(u)), -15, 15));
  }
}

TEST_CASE("gcd reduction examples") {
  auto L = Op(Q(3) * Id, D - Id);
  auto g = reduce_gcd(L);
  CHECK(g.Lbar == Id);
  CHECK(g.Rtilde == reduce_full(L).R);
  CHECK(g.S == D + Dinv + Q(7) * Id);

  auto refl = reduce_gcd(Op::reflection());
  CHECK(refl.Lbar == Id);
  CHECK(refl.Rtilde == Op::reflection());
  CHECK(refl.S == Id);

  CHECK_THROWS_AS(reduce_gcd(Op{}), Error);
}

TEST_CASE("gcd reduction with a common factor lowers the order") {
  // P = (D-2)(D+1), conj Q = 3(D-2): common factor D-2
  const LP common = D - Q(2) * Id;
  Op L(common * (D + Id), Q(3) * (Dinv - Q(2) * Id));
  auto g = reduce_gcd(L);
  CHECK(g.Lbar == common);
  auto f = reduce_full(L);
  CHECK(order(g.S) < order(f.S));
  CHECK(op_compose(L, g.Rtilde) == Op::plain(g.S));
}

TEST_CASE("gcd reduction never raises the order") {
  Rng rng(35);
  for (int t = 0; t < 300; ++t) {
    auto L = rng.op(-3, 3, 4);
    if (L.is_zero()) continue;
    auto g = reduce_gcd(L);
    auto f = reduce_full(L);
    REQUIRE(op_compose(L, g.Rtilde) == Op::plain(g.S));
    if (g.S.is_zero()) {
      REQUIRE(f.S.is_zero());
      continue;
    }
    REQUIRE(order(g.S) <= order(f.S));
  }
}

TEST_CASE("normalization to an ordinary polynomial") {
  auto S = D + Dinv + Q(7) * Id;
  auto n = normalize_to_poly(Op(Q(3) * Id, D - Id), reduce_full(Op(Q(3) * Id, D - Id)).R, S);
  CHECK(n.k == 1);
  CHECK(n.Spoly == LP::shift_op(2) + Q(7) * D + Id);
  CHECK(n.Spoly.deg_low() >= 0);

  auto c = normalize_to_poly(Op(Q(2) * Id, D), Op::identity(), Q(3) * Id);
  CHECK(c.k == 0);
  CHECK(c.Spoly == Q(3) * Id);

  auto deg = Op(-Id, D);
  auto g = reduce_gcd(deg);
  CHECK(g.S.is_zero());
  try {
    normalize_to_poly(deg, g.Rtilde, g.S);
    FAIL("expected a degenerate reduction");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateReduction);
  }
}

TEST_CASE("explicit kernels of the degenerate operators") {
  Rng rng(36);
  for (int sign : {1, -1}) {
    // L = D - sign phi*: u(k) = v(k) for k >= 1 and u(k) = sign u(1-k) otherwise
    auto v = rng.rule_sequence();
    auto u = Seq::rule([v, sign](Index k) { return k >= 1 ? v(k) : Q(sign) * v(1 - k); });
    Op L(Q(-sign) * Id, D);
    auto lu = L.apply(u);
    for (Index k = -15; k <= 15; ++k) REQUIRE(lu(k).is_zero());
    auto red = reduce_full(L);
    auto su = red.S.apply(u);
    for (Index k = -14; k <= 14; ++k) REQUIRE(su(k).is_zero());
  }
}

TEST_CASE("complex operators") {
  using LC = LaurentPoly<Complex>;
  using OC = ReflectionOperator<Complex>;
  const Complex m(3, 0);
  OC L(m * LC::identity(), LC::shift_op(1) - LC::identity());
  auto f = reduce_full(L);
  CHECK(near(f.S, LC::shift_op(1) + LC::shift_op(-1) + Complex(7, 0) * LC::identity()));
  auto g = reduce_gcd(L);
  CHECK(near(g.S, f.S));
}
