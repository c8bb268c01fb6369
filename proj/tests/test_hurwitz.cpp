#include <gtest/gtest.h>

#include "difftaylor/errors.hpp"
#include "difftaylor/hurwitz.hpp"
#include "difftaylor/polynomial.hpp"
#include "oracles.hpp"

namespace difftaylor {
namespace {

using QH = HurwitzRing<Rational>;
using QPoly = Polynomial<Rational>;

template <class R>
Series<typename R::value_type> dense(const HurwitzRing<R>& h, std::vector<typename R::value_type> c) {
  c.resize(h.size(), h.base().zero());
  return h.from_coefficients(std::move(c), h.trunc());
}

template <class R>
Series<typename R::value_type> random_dense(const HurwitzRing<R>& h, std::mt19937_64& gen) {
  std::vector<typename R::value_type> c;
  for (std::size_t k = 0; k < h.size(); ++k) c.push_back(h.base().from_integer(static_cast<long>(gen() % 11) - 5));
  return h.from_coefficients(std::move(c), h.trunc());
}

TEST(Hurwitz, Addition) {
  const QH h(Rational{}, 1, 4);
  const auto t = h.variable(0);
  EXPECT_TRUE(h.equal(h.add(h.add(h.one(), t), t), dense(h, {1, 2})));
  EXPECT_TRUE(h.equal(h.add(t, h.zero()), t));
  const HurwitzRing<PrimeField> f2(PrimeField(2), 1, 4);
  EXPECT_TRUE(f2.is_zero(f2.add(f2.variable(0), f2.variable(0))));
}

TEST(Hurwitz, BinomialProduct) {
  const QH h(Rational{}, 1, 5);
  const auto t = h.variable(0);
  EXPECT_TRUE(h.equal(h.mul(h.add(h.one(), t), t), dense(h, {0, 1, 2})));
  EXPECT_TRUE(h.equal(h.mul(h.mul(t, t), t), dense(h, {0, 0, 0, 6})));
  const HurwitzRing<PrimeField> f2(PrimeField(2), 1, 4);
  EXPECT_TRUE(f2.is_zero(f2.mul(f2.variable(0), f2.variable(0))));
}

TEST(Hurwitz, PowersOfTHaveFactorialCoefficients) {
  const QH h(Rational{}, 1, 9);
  auto power = h.one();
  BigInt factorial = 1;
  for (unsigned k = 1; k <= 9; ++k) {
    power = h.mul(power, h.variable(0));
    factorial *= k;
    std::vector<mpq_class> c(k + 1, 0);
    c[k] = mpq_class(factorial);
    ASSERT_TRUE(h.equal(power, dense(h, c))) << k;
  }
}

TEST(Hurwitz, ProductMatchesDirectConvolution) {
  std::mt19937_64 gen(17);
  for (std::size_t m = 1; m <= 3; ++m) {
    for (unsigned n : {0U, 1U, 4U, 6U}) {
      const QH h(Rational{}, m, n);
      for (int rep = 0; rep < 10; ++rep) {
        const auto a = random_dense(h, gen);
        const auto b = random_dense(h, gen);
        const auto expected = oracle::hurwitz_product(h.base(), m, n, oracle::to_sparse(h, a), oracle::to_sparse(h, b));
        oracle::expect_same(h, h.mul(a, b), expected, n);
      }
    }
  }
  const HurwitzRing<PrimeField> f5(PrimeField(5), 2, 6);
  for (int rep = 0; rep < 20; ++rep) {
    const auto a = random_dense(f5, gen);
    const auto b = random_dense(f5, gen);
    oracle::expect_same(f5, f5.mul(a, b),
                        oracle::hurwitz_product(f5.base(), 2, 6, oracle::to_sparse(f5, a), oracle::to_sparse(f5, b)), 6);
  }
}

TEST(Hurwitz, ProductKeepsTheSmallerValidOrder) {
  const QH h(Rational{}, 1, 6);
  const auto a = h.with_valid(h.add(h.one(), h.variable(0)), 3);
  const auto b = h.variable(0);
  EXPECT_EQ(h.mul(a, b).valid, 3U);
  EXPECT_EQ(h.add(a, b).valid, 3U);
  EXPECT_THROW(h.with_valid(a, 5), std::invalid_argument);
}

TEST(Hurwitz, NilpotentVariablesInPositiveCharacteristic) {
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL}) {
    const HurwitzRing<PrimeField> h(PrimeField(p), 1, static_cast<unsigned>(p) + 2);
    auto power = h.one();
    for (std::uint64_t k = 1; k < p; ++k) power = h.mul(power, h.variable(0));
    EXPECT_FALSE(h.is_zero(power)) << p;
    EXPECT_TRUE(h.is_zero(h.mul(power, h.variable(0)))) << p;
  }
}

TEST(Hurwitz, ShiftDerivation) {
  const QH h(Rational{}, 1, 2);
  const auto a = dense(h, {5, 7, 9});
  const auto d = h.shift_derive(a, 0);
  EXPECT_EQ(d.valid, 1U);
  EXPECT_EQ(h.coeff(d, {0}), 7);
  EXPECT_EQ(h.coeff(d, {1}), 9);
  EXPECT_TRUE(h.is_zero(h.shift_derive(h.embed(mpq_class(4)), 0)));

  const QH h2(Rational{}, 2, 3);
  const auto lone = h2.with_coeff(h2.zero(), {1, 1}, mpq_class(3));
  const auto d1 = h2.shift_derive(lone, 0);
  EXPECT_TRUE(h2.equal(d1, h2.with_valid(h2.with_coeff(h2.zero(), {0, 1}, mpq_class(3)), 2)));
}

TEST(Hurwitz, ShiftIsADerivation) {
  std::mt19937_64 gen(23);
  const QH h(Rational{}, 2, 5);
  for (int rep = 0; rep < 30; ++rep) {
    const auto a = random_dense(h, gen);
    const auto b = random_dense(h, gen);
    for (std::size_t i = 0; i < 2; ++i) {
      const auto lhs = h.shift_derive(h.mul(a, b), i);
      const auto rhs = h.add(h.mul(h.shift_derive(a, i), b), h.mul(a, h.shift_derive(b, i)));
      ASSERT_TRUE(h.equal_upto(lhs, rhs, 4));
    }
  }
}

TEST(Hurwitz, CoefficientwiseDerivation) {
  const QPoly k(Rational{}, {"u"});
  const auto dk = make_differential_polynomial_ring(k, {{k.one()}});
  const HurwitzRing<QPoly> h(k, 1, 3);
  const auto a = dense(h, {k.parse("u"), k.parse("u^2")});
  EXPECT_TRUE(h.equal(h.coeff_derive(a, dk.derivations()[0]), dense(h, {k.one(), k.parse("2*u")})));
  EXPECT_TRUE(h.is_zero(h.coeff_derive(a, Derivation<QPoly::value_type>{})));

  const auto twisted = twisted_structure(h, dk.derivations());
  EXPECT_TRUE(h.equal(twisted.derive(h.embed(k.parse("u")), 0), h.with_valid(h.one(), 2)));

  std::mt19937_64 gen(29);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<QPoly::value_type> c;
    for (std::size_t j = 0; j < h.size(); ++j) {
      c.push_back(k.add(k.monomial({static_cast<unsigned>(gen() % 3)}, static_cast<long>(gen() % 7) - 3),
                        k.constant(static_cast<long>(gen() % 5))));
    }
    const auto s = h.from_coefficients(c, h.trunc());
    const auto delta_then_d = h.shift_derive(h.coeff_derive(s, dk.derivations()[0]), 0);
    const auto d_then_delta = h.coeff_derive(h.shift_derive(s, 0), dk.derivations()[0]);
    ASSERT_TRUE(h.equal_upto(delta_then_d, d_then_delta, h.trunc() - 1));
  }
}

TEST(Hurwitz, EvaluationAndEmbedding) {
  const QH h(Rational{}, 1, 3);
  EXPECT_EQ(h.ev(dense(h, {1, 3, 1})), 1);
  EXPECT_EQ(h.ev(h.zero()), 0);
  EXPECT_EQ(h.ev(h.embed(mpq_class(7, 2))), mpq_class(7, 2));
  EXPECT_TRUE(h.equal(h.embed(mpq_class(1)), h.one()));
}

TEST(Hurwitz, Inversion) {
  const QH h(Rational{}, 1, 6);
  EXPECT_TRUE(h.equal(h.invert(h.one()), h.one()));
  const auto a = h.add(h.one(), h.variable(0));
  EXPECT_TRUE(h.equal(h.mul(a, h.invert(a)), h.one()));
  EXPECT_THROW(h.invert(h.variable(0)), MathDomainError);

  const HurwitzRing<PrimeField> f3(PrimeField(3), 1, 6);
  const auto b = f3.add(f3.one(), f3.variable(0));
  EXPECT_TRUE(f3.equal(f3.mul(b, f3.invert(b)), f3.one()));

  std::mt19937_64 gen(31);
  const HurwitzRing<PrimeField> f5(PrimeField(5), 2, 5);
  for (int rep = 0; rep < 30; ++rep) {
    auto c = random_dense(f5, gen);
    c = f5.with_coeff(c, {0, 0}, 1 + gen() % 4);
    ASSERT_TRUE(f5.equal(f5.mul(c, f5.invert(c)), f5.one()));
  }
}

TEST(Hurwitz, InversionKeepsValidOrder) {
  const QH h(Rational{}, 1, 6);
  const auto a = h.with_valid(h.add(h.one(), h.variable(0)), 3);
  const auto inv = h.invert(a);
  EXPECT_EQ(inv.valid, 3U);
  EXPECT_TRUE(h.equal(h.mul(a, inv), h.one()));
}

TEST(Hurwitz, DividedPowers) {
  const QH h(Rational{}, 1, 6);
  const auto ones = dense(h, std::vector<mpq_class>(7, 1));
  const auto divided = hw_to_divided(h, ones);
  for (unsigned n = 0; n <= 6; ++n) {
    EXPECT_EQ(h.coeff(divided, {n}), mpq_class(1) / mpq_class(oracle::fact({n})));
  }
  EXPECT_TRUE(h.equal(hw_from_divided(h, divided), ones));
  EXPECT_TRUE(h.equal(hw_to_divided(h, h.embed(mpq_class(5))), h.embed(mpq_class(5))));

  const HurwitzRing<PrimeField> f2(PrimeField(2), 1, 3);
  EXPECT_THROW(hw_to_divided(f2, f2.one()), MathDomainError);
}

TEST(Hurwitz, DividedPowersTurnHurwitzIntoCauchyProducts) {
  std::mt19937_64 gen(37);
  const QH h(Rational{}, 2, 5);
  const PowerSeriesRing<Rational> ps(Rational{}, 2, 5);
  for (int rep = 0; rep < 20; ++rep) {
    const auto a = random_dense(h, gen);
    const auto b = random_dense(h, gen);
    ASSERT_TRUE(ps.equal(hw_to_divided(h, h.mul(a, b)), ps.mul(hw_to_divided(h, a), hw_to_divided(h, b))));
  }
}

TEST(Hurwitz, ShapeChecks) {
  const QH h(Rational{}, 1, 3);
  const QH other(Rational{}, 2, 3);
  EXPECT_THROW(h.add(h.one(), other.one()), std::invalid_argument);
  EXPECT_THROW(h.coeff(h.one(), {4}), std::out_of_range);
  EXPECT_THROW(h.shift_derive(h.one(), 1), std::out_of_range);
}

}  // namespace
}  // namespace difftaylor
