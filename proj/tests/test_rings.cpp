#include <gtest/gtest.h>

#include <random>

#include "difftaylor/polynomial.hpp"
#include "difftaylor/rings.hpp"

namespace difftaylor {
namespace {

using QPoly = Polynomial<Rational>;

mpq_class small_rational(std::mt19937_64& gen) {
  std::uniform_int_distribution<long> num(-9, 9);
  std::uniform_int_distribution<long> den(1, 6);
  mpq_class q(num(gen), den(gen));
  q.canonicalize();
  return q;
}

QPoly::value_type small_poly(const QPoly& ring, std::mt19937_64& gen) {
  auto out = ring.zero();
  for (unsigned a = 0; a <= 2; ++a) {
    for (unsigned b = 0; a + b <= 2; ++b) {
      if (gen() % 2 == 0) out = ring.add(out, ring.monomial({a, b}, small_rational(gen)));
    }
  }
  return out;
}

template <class R, class Gen>
void expect_ring_laws(const R& r, Gen&& draw, int rounds) {
  for (int n = 0; n < rounds; ++n) {
    const auto a = draw();
    const auto b = draw();
    const auto c = draw();
    ASSERT_TRUE(r.equal(r.add(a, b), r.add(b, a)));
    ASSERT_TRUE(r.equal(r.mul(a, b), r.mul(b, a)));
    ASSERT_TRUE(r.equal(r.add(r.add(a, b), c), r.add(a, r.add(b, c))));
    ASSERT_TRUE(r.equal(r.mul(r.mul(a, b), c), r.mul(a, r.mul(b, c))));
    ASSERT_TRUE(r.equal(r.mul(a, r.add(b, c)), r.add(r.mul(a, b), r.mul(a, c))));
    ASSERT_TRUE(r.equal(r.add(a, r.neg(a)), r.zero()));
    ASSERT_TRUE(r.equal(r.mul(a, r.one()), a));
    ASSERT_TRUE(r.equal(r.sub(a, b), r.add(a, r.neg(b))));
  }
}

TEST(Rational, FieldLaws) {
  std::mt19937_64 gen(1);
  expect_ring_laws(Rational{}, [&] { return small_rational(gen); }, 300);
}

TEST(Rational, ParseAndFormat) {
  const Rational q;
  EXPECT_EQ(q.parse("3/4"), mpq_class(3, 4));
  EXPECT_EQ(q.parse("-6/8"), mpq_class(-3, 4));
  EXPECT_EQ(q.format(mpq_class(-3, 4)), "-3/4");
  EXPECT_EQ(q.format(mpq_class(5)), "5");
  EXPECT_THROW(q.parse("1/0"), std::invalid_argument);
  EXPECT_THROW(q.parse("abc"), std::invalid_argument);
  EXPECT_EQ(*q.try_invert(mpq_class(2, 3)), mpq_class(3, 2));
  EXPECT_FALSE(q.try_invert(0).has_value());
}

TEST(PrimeField, FieldLawsAndInverses) {
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 1000003ULL, 4611686018427387847ULL}) {
    const PrimeField f(p);
    std::mt19937_64 gen(p);
    expect_ring_laws(f, [&] { return gen() % p; }, 200);
    for (int n = 0; n < 50; ++n) {
      const auto a = gen() % p;
      if (a == 0) {
        EXPECT_FALSE(f.try_invert(a).has_value());
        continue;
      }
      ASSERT_EQ(f.mul(a, *f.try_invert(a)), 1U);
    }
  }
}

TEST(PrimeField, IntegersAndFractions) {
  const PrimeField f(5);
  EXPECT_EQ(f.from_integer(-1), 4U);
  EXPECT_EQ(f.from_integer(12), 2U);
  EXPECT_EQ(f.parse("1/2"), 3U);
  EXPECT_EQ(f.parse("-3"), 2U);
  EXPECT_THROW(f.parse("1/5"), std::invalid_argument);
  EXPECT_THROW(f.from_rational(mpq_class(1, 10)), MathDomainError);
  for (long n = -40; n <= 40; ++n) ASSERT_EQ(f.from_integer(n), integer_by_doubling(f, BigInt(n)));
  EXPECT_THROW(PrimeField(4), std::invalid_argument);
  EXPECT_THROW(PrimeField(1), std::invalid_argument);
}

TEST(Primality, SmallNumbersAgainstTrialDivision) {
  for (std::uint64_t n = 0; n < 2000; ++n) {
    bool prime = n >= 2;
    for (std::uint64_t d = 2; d * d <= n && prime; ++d) prime = n % d != 0;
    ASSERT_EQ(is_prime(n), prime) << n;
  }
}

TEST(Polynomial, RingLaws) {
  const QPoly ring(Rational{}, {"u", "v"});
  std::mt19937_64 gen(3);
  expect_ring_laws(ring, [&] { return small_poly(ring, gen); }, 150);
}

TEST(Polynomial, ParseFormatRoundTrip) {
  const QPoly ring(Rational{}, {"u", "v"});
  const auto f = ring.parse("3/2*u^2*v - v + 7");
  EXPECT_TRUE(ring.equal(f, ring.add(ring.monomial({2, 1}, mpq_class(3, 2)),
                                     ring.add(ring.monomial({0, 1}, -1), ring.constant(7)))));
  EXPECT_TRUE(ring.equal(ring.parse("u^2 + 2*u + 1"), ring.parse("1 + u*2 + u^2")));
  std::mt19937_64 gen(5);
  for (int n = 0; n < 200; ++n) {
    const auto g = small_poly(ring, gen);
    ASSERT_TRUE(ring.equal(ring.parse(ring.format(g)), g)) << ring.format(g);
  }
  EXPECT_THROW(ring.parse("w"), std::invalid_argument);
  EXPECT_THROW(ring.parse("u +"), std::invalid_argument);
  EXPECT_THROW(QPoly(Rational{}, {"u", "u"}), std::invalid_argument);
}

TEST(DifferentialRing, IteratedDerivatives) {
  const QPoly ring(Rational{}, {"u"});
  const auto d = make_differential_polynomial_ring(ring, {{ring.one()}});
  const auto u2 = ring.parse("u^2");
  EXPECT_TRUE(ring.equal(d.derive_iter(u2, {1}), ring.parse("2*u")));
  EXPECT_TRUE(ring.equal(d.derive_iter(u2, {2}), d.derive(d.derive(u2, 0), 0)));
  EXPECT_TRUE(ring.equal(d.derive_iter(u2, {2}), ring.constant(2)));
  EXPECT_TRUE(ring.equal(d.derive_iter(u2, {0}), u2));
  EXPECT_THROW(d.derive_iter(u2, {1, 0}), std::invalid_argument);
}

TEST(DifferentialRing, ConstantElements) {
  const QPoly ring(Rational{}, {"u"});
  const auto d = make_differential_polynomial_ring(ring, {{ring.one()}});
  EXPECT_TRUE(d.is_constant(ring.constant(3)));
  EXPECT_FALSE(d.is_constant(ring.generator(0)));
  const auto f5 = DifferentialRing<PrimeField>::constant(PrimeField(5), 2);
  for (std::uint64_t a = 0; a < 5; ++a) EXPECT_TRUE(f5.is_constant(a));
}

TEST(DifferentialRing, LeibnizRuleOnRandomPolynomials) {
  const QPoly ring(Rational{}, {"u", "v"});
  const auto d = make_differential_polynomial_ring(
      ring, {{ring.parse("u*v"), ring.parse("v^2 + 1")}, {ring.zero(), ring.zero()}});
  std::mt19937_64 gen(7);
  for (int n = 0; n < 200; ++n) {
    const auto a = small_poly(ring, gen);
    const auto b = small_poly(ring, gen);
    ASSERT_TRUE(ring.equal(d.derive(ring.mul(a, b), 0),
                           ring.add(ring.mul(d.derive(a, 0), b), ring.mul(a, d.derive(b, 0)))));
    ASSERT_TRUE(ring.equal(d.derive(ring.add(a, b), 0), ring.add(d.derive(a, 0), d.derive(b, 0))));
  }
}

TEST(DifferentialRing, RejectsNonCommutingFamilies) {
  const QPoly ring(Rational{}, {"u"});
  EXPECT_THROW(make_differential_polynomial_ring(ring, {{ring.generator(0)}, {ring.one()}}),
               std::invalid_argument);
  EXPECT_NO_THROW(make_differential_polynomial_ring(ring, {{ring.generator(0)}, {ring.parse("2*u")}}));
}

TEST(DifferentialRing, HomomorphismChecks) {
  const QPoly ring(Rational{}, {"u"});
  const auto d = make_differential_polynomial_ring(ring, {{ring.one()}});
  const auto flat = DifferentialRing<QPoly>::constant(ring, 1);
  auto id = [](const QPoly::value_type& x) { return x; };
  const std::vector<QPoly::value_type> samples{ring.generator(0), ring.parse("u^2 - 3")};
  EXPECT_TRUE(is_ring_hom(ring, ring, id, std::span(samples)));
  EXPECT_TRUE(is_differential_hom(RingHom<QPoly, QPoly>{d, d, id}, std::span(samples)));
  EXPECT_FALSE(is_differential_hom(RingHom<QPoly, QPoly>{d, flat, id}, std::span(samples)));
  auto doubling = [&](const QPoly::value_type& x) { return ring.add(x, x); };
  EXPECT_FALSE(is_ring_hom(ring, ring, doubling, std::span(samples)));
}

}  // namespace
}  // namespace difftaylor
