#include <doctest.h>

#include "refrec/sequence.hpp"
#include "support.hpp"

using namespace refrec;
using namespace testing_support;

namespace {

const Seq kOnes = Seq::rule([](Index) { return Q(1); });

bool is_zero_on(const Seq& u, Index lo, Index hi) {
  for (Index k = lo; k <= hi; ++k)
    if (!u(k).is_zero()) return false;
  return true;
}

}  // namespace

TEST_CASE("rational arithmetic is canonical and exact") {
  CHECK(Q(2, 4) == Q(1, 2));
  CHECK(Q(3, -6).to_string() == "-1/2");
  CHECK(Q(0, 7).to_string() == "0");
  CHECK(Q(6, 3).to_string() == "2");
  CHECK(Q::parse("-10/4") == Q(-5, 2));
  CHECK(Q::parse("+7") == Q(7));
  CHECK_THROWS_AS(Q::parse("1/0"), Error);
  CHECK_THROWS_AS(Q::parse("1.5"), Error);
  CHECK_THROWS_AS(Q::parse("1/-2"), Error);
  CHECK_THROWS_AS(Q(1) / Q(0), std::domain_error);
  // numbers beyond 64 bits stay exact
  Q big = Q::parse("123456789012345678901234567890/7");
  CHECK((big * Q(7)).to_string() == "123456789012345678901234567890");
}

TEST_CASE("rational sums round-trip exactly") {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const Q a(rng.integer(-1000000, 1000000), rng.integer(1, 1000000));
    const Q c(rng.integer(-1000000, 1000000), rng.integer(1, 1000000));
    REQUIRE((a + c) - c == a);
  }
}

TEST_CASE("complex formatting round-trips") {
  for (Complex z : {Complex(1.5, 0), Complex(-2, -0.25), Complex(1e-300, 3e20), Complex(0.1, -0.0)}) {
    const auto s = FieldTraits<Complex>::format(z);
    const Complex back = parse_complex(s);
    CHECK(back.real() == z.real());
    CHECK(back.imag() == (z.imag() == 0 ? 0.0 : z.imag()));
  }
  CHECK(FieldTraits<Complex>::format({1.5, 0}) == "1.5+0i");
  CHECK(FieldTraits<Complex>::format({-2, -0.25}) == "-2-0.25i");
  CHECK(FieldTraits<Complex>::near({1, 0}, {1 + 1e-12, 0}));
  CHECK_FALSE(FieldTraits<Complex>::near({1, 0}, {1 + 1e-6, 0}));
  CHECK(FieldTraits<Complex>::near({1e6, 0}, {1e6 + 1e-4, 0}));
}

TEST_CASE("finite sequences are sorted, unique and zero-free") {
  auto u = Seq::finite({{3, Q(1)}, {-2, Q(0)}, {0, Q(5)}});
  REQUIRE(u.support().size() == 2);
  CHECK(u.support()[0].first == 0);
  CHECK(u.support()[1].first == 3);
  CHECK(u(-2).is_zero());
  CHECK(u(100).is_zero());
  CHECK_THROWS_AS(Seq::finite({{1, Q(1)}, {1, Q(2)}}), Error);
  CHECK_THROWS_AS(VectorSequence<Q>::finite({{0, Vector<Q>{Q(1)}}}, 2), Error);
}

TEST_CASE("shift") {
  auto d0 = Seq::delta(0, Q(1));
  auto s = shift(d0, 1);
  CHECK(s(-1) == Q(1));
  CHECK(s(0).is_zero());
  Rng rng(1);
  auto u = rng.rule_sequence();
  CHECK(same_on(shift(u, 0), u, -10, 10));
  CHECK(same_on(shift(shift(u, 3), -3), u, -10, 10));
}

TEST_CASE("reflect") {
  auto r = reflect(Seq::delta(2, Q(1)));
  CHECK(r(-2) == Q(1));
  CHECK(r(2).is_zero());
  Rng rng(2);
  auto u = rng.rule_sequence();
  CHECK(same_on(reflect(reflect(u)), u, -10, 10));
  // D phi* = phi* D^-1
  CHECK(same_on(reflect(shift(u, 1)), shift(reflect(u), -1), -10, 10));
}

TEST_CASE("parity projections") {
  auto e = project_even(kOnes);
  for (Index k = -6; k <= 6; ++k) CHECK(e(k) == (k % 2 == 0 ? Q(1) : Q(0)));
  Rng rng(3);
  auto u = rng.rule_sequence();
  CHECK(is_zero_on(project_even(project_odd(u)), -10, 10));
  CHECK(same_on(project_even(shift(u, 1)), shift(project_odd(u), 1), -10, 10));
}

TEST_CASE("even and odd parts") {
  auto ep = even_part(Seq::delta(1, Q(1)));
  CHECK(ep(1) == Q(1, 2));
  CHECK(ep(-1) == Q(1, 2));
  CHECK(ep(0).is_zero());
  auto sym = Seq::rule([](Index k) { return Q(k * k); });
  CHECK(is_zero_on(odd_part(sym), -10, 10));
  Rng rng(4);
  auto u = rng.rule_sequence();
  CHECK(same_on(even_part(u) + odd_part(u), u, -10, 10));
}

TEST_CASE("sign alternation") {
  auto l = alternate_signs(kOnes);
  CHECK(l(0) == Q(1));
  CHECK(l(1) == Q(-1));
  CHECK(l(-1) == Q(-1));
  Rng rng(5);
  auto u = rng.rule_sequence();
  CHECK(same_on(alternate_signs(alternate_signs(u)), u, -10, 10));
  CHECK(same_on(alternate_signs(shift(u, 1)), scale(Q(-1), shift(alternate_signs(u), 1)), -10, 10));
}

TEST_CASE("operator identities on random finite sequences") {
  Rng rng(6);
  int non_identity_witness = 0;
  for (int t = 0; t < 100; ++t) {
    auto u = rng.finite_sequence(-15, 15, 8);
    const Index lo = -20, hi = 20;
    auto E = [](const Seq& x) { return project_even(x); };
    auto O = [](const Seq& x) { return project_odd(x); };
    auto Eb = [](const Seq& x) { return even_part(x); };
    auto Ob = [](const Seq& x) { return odd_part(x); };
    auto D = [](const Seq& x) { return shift(x, 1); };
    REQUIRE(same_on(E(D(u)), D(O(u)), lo, hi));
    REQUIRE(same_on(O(D(u)), D(E(u)), lo, hi));
    REQUIRE(same_on(E(u) + O(u), u, lo, hi));
    REQUIRE(is_zero_on(E(O(u)), lo, hi));
    REQUIRE(is_zero_on(O(E(u)), lo, hi));
    REQUIRE(same_on(E(E(u)), E(u), lo, hi));
    REQUIRE(same_on(O(O(u)), O(u), lo, hi));
    REQUIRE(same_on(Eb(reflect(u)), Eb(u), lo, hi));
    REQUIRE(same_on(reflect(Eb(u)), Eb(u), lo, hi));
    REQUIRE(same_on(Ob(reflect(u)), scale(Q(-1), Ob(u)), lo, hi));
    REQUIRE(same_on(reflect(Ob(u)), scale(Q(-1), Ob(u)), lo, hi));
    REQUIRE(same_on(Eb(Eb(u)), Eb(u), lo, hi));
    REQUIRE(same_on(Ob(Ob(u)), Ob(u), lo, hi));
    REQUIRE(is_zero_on(Eb(Ob(u)), lo, hi));
    // pairwise commutation
    REQUIRE(same_on(E(O(u)), O(E(u)), lo, hi));
    REQUIRE(same_on(E(Eb(u)), Eb(E(u)), lo, hi));
    REQUIRE(same_on(E(Ob(u)), Ob(E(u)), lo, hi));
    REQUIRE(same_on(O(Eb(u)), Eb(O(u)), lo, hi));
    REQUIRE(same_on(O(Ob(u)), Ob(O(u)), lo, hi));
    REQUIRE(same_on(Eb(Ob(u)), Ob(Eb(u)), lo, hi));
    if (!same_on(Eb(D(u)), D(Ob(u)), lo, hi)) ++non_identity_witness;
  }
  // the mixed relation Eb D = D Ob is not an identity
  CHECK(non_identity_witness > 0);
}

TEST_CASE("vector sequences act componentwise") {
  using VS = VectorSequence<Q>;
  auto v = VS::finite({{0, Vector<Q>{Q(1), Q(2)}}, {2, Vector<Q>{Q(0), Q(3)}}}, 2);
  auto r = reflect(shift(v, 1));
  CHECK(r(1) == Vector<Q>{Q(1), Q(2)});
  CHECK(r(-1) == Vector<Q>{Q(0), Q(3)});
  CHECK(r.dim() == 2);
}
