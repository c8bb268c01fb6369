#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "difftaylor/rings.hpp"

namespace difftaylor {

// Dense truncated series in m variables: one coefficient per multi-index of
// total degree <= trunc, stored in graded-lex order. Coefficients of total
// degree above `valid` are placeholders and carry no information.
template <class V>
struct Series {
  std::size_t m = 1;
  unsigned trunc = 0;
  unsigned valid = 0;
  std::vector<V> coeffs;

  friend bool operator==(const Series&, const Series&) = default;
};

// kHurwitz multiplies with binomial weights and shifts without scaling;
// kOrdinary is the usual Cauchy product with the formal partial derivatives.
enum class SeriesConvention { kHurwitz, kOrdinary };

template <CommutativeRing R, SeriesConvention Convention>
class TruncatedSeriesRing {
 public:
  using base_type = R;
  using coeff_type = typename R::value_type;
  using value_type = Series<coeff_type>;
  static constexpr SeriesConvention convention = Convention;

  TruncatedSeriesRing(const R& base, std::size_t m, unsigned trunc)
      : base_(base), tables_(build_tables(base, m, trunc)) {}

  const R& base() const noexcept { return base_; }
  std::size_t m() const noexcept { return tables_->indices.m(); }
  unsigned trunc() const noexcept { return tables_->indices.max_degree(); }
  const GradedIndexSet& indices() const noexcept { return tables_->indices; }
  std::size_t size() const noexcept { return tables_->indices.size(); }

  // ---- construction -------------------------------------------------------

  value_type zero() const { return filled(base_.zero()); }
  value_type one() const { return embed(base_.one()); }

  // The constant series k (valid to full order).
  value_type embed(const coeff_type& k) const {
    value_type out = zero();
    out.coeffs[0] = k;
    return out;
  }

  // The indeterminate t_i: a lone coefficient 1 at the unit multi-index.
  value_type variable(std::size_t i) const {
    if (trunc() == 0) throw std::out_of_range("t_i is not representable at truncation 0");
    value_type out = zero();
    out.coeffs[indices().rank(MultiIndex::unit(m(), i))] = base_.one();
    return out;
  }

  // Builds a series from a full coefficient table in graded-lex order.
  value_type from_coefficients(std::vector<coeff_type> coeffs, unsigned valid) const {
    if (coeffs.size() != size()) {
      throw std::invalid_argument("series needs " + std::to_string(size()) +
                                  " coefficients, got " + std::to_string(coeffs.size()));
    }
    if (valid > trunc()) throw std::invalid_argument("valid order exceeds truncation");
    return value_type{m(), trunc(), valid, std::move(coeffs)};
  }

  const coeff_type& coeff(const value_type& a, const MultiIndex& alpha) const {
    check(a);
    return a.coeffs[indices().rank(alpha)];
  }

  value_type with_coeff(value_type a, const MultiIndex& alpha, coeff_type c) const {
    check(a);
    a.coeffs[indices().rank(alpha)] = std::move(c);
    return a;
  }

  // The constant term; a ring homomorphism onto the coefficients.
  const coeff_type& ev(const value_type& a) const {
    check(a);
    return a.coeffs[0];
  }

  unsigned valid_order(const value_type& a) const { return a.valid; }

  value_type with_valid(value_type a, unsigned valid) const {
    check(a);
    if (valid > a.valid) throw std::invalid_argument("cannot raise the valid order of a series");
    a.valid = valid;
    return a;
  }

  // ---- ring operations ----------------------------------------------------

  value_type add(const value_type& a, const value_type& b) const {
    check(a, b);
    value_type out{m(), trunc(), std::min(a.valid, b.valid), {}};
    out.coeffs.reserve(size());
    for (std::size_t k = 0; k < size(); ++k) out.coeffs.push_back(base_.add(a.coeffs[k], b.coeffs[k]));
    return out;
  }

  value_type sub(const value_type& a, const value_type& b) const {
    check(a, b);
    value_type out{m(), trunc(), std::min(a.valid, b.valid), {}};
    out.coeffs.reserve(size());
    for (std::size_t k = 0; k < size(); ++k) out.coeffs.push_back(base_.sub(a.coeffs[k], b.coeffs[k]));
    return out;
  }

  value_type neg(const value_type& a) const {
    check(a);
    value_type out{m(), trunc(), a.valid, {}};
    out.coeffs.reserve(size());
    for (const auto& c : a.coeffs) out.coeffs.push_back(base_.neg(c));
    return out;
  }

  // Coefficient at alpha is sum over beta + gamma = alpha of
  // w(alpha, beta) a_beta b_gamma, with w the binomial coefficient for
  // Hurwitz series and 1 for ordinary series.
  value_type mul(const value_type& a, const value_type& b) const {
    check(a, b);
    const auto& t = *tables_;
    value_type out{m(), trunc(), std::min(a.valid, b.valid), {}};
    out.coeffs.reserve(size());
    for (std::size_t k = 0; k < size(); ++k) {
      coeff_type acc = base_.zero();
      for (std::size_t e = t.offsets[k]; e < t.offsets[k + 1]; ++e) {
        const auto& term = t.terms[e];
        if (base_.is_zero(a.coeffs[term.left]) || base_.is_zero(b.coeffs[term.right])) continue;
        coeff_type prod = base_.mul(a.coeffs[term.left], b.coeffs[term.right]);
        if (!term.unit_weight) prod = base_.mul(t.weights[e], prod);
        acc = base_.add(acc, prod);
      }
      out.coeffs.push_back(std::move(acc));
    }
    return out;
  }

  value_type scale(const coeff_type& c, const value_type& a) const {
    check(a);
    value_type out{m(), trunc(), a.valid, {}};
    out.coeffs.reserve(size());
    for (const auto& x : a.coeffs) out.coeffs.push_back(base_.mul(c, x));
    return out;
  }

  // Equality up to the smaller of the two valid orders.
  bool equal(const value_type& a, const value_type& b) const {
    return equal_upto(a, b, std::min(a.valid, b.valid));
  }

  bool equal_upto(const value_type& a, const value_type& b, unsigned order) const {
    check(a, b);
    const std::size_t n = indices().count_upto(order);
    for (std::size_t k = 0; k < n; ++k) {
      if (!base_.equal(a.coeffs[k], b.coeffs[k])) return false;
    }
    return true;
  }

  // Largest v <= min(valid) with agreement through total degree v, or -1 when
  // the constant terms already differ.
  int agreement_order(const value_type& a, const value_type& b) const {
    check(a, b);
    const unsigned limit = std::min(a.valid, b.valid);
    for (std::size_t k = 0; k < indices().count_upto(limit); ++k) {
      if (!base_.equal(a.coeffs[k], b.coeffs[k])) {
        return static_cast<int>(indices()[k].total_degree()) - 1;
      }
    }
    return static_cast<int>(limit);
  }

  bool is_zero(const value_type& a) const { return equal(a, with_valid(zero(), a.valid)); }

  value_type from_integer(const BigInt& n) const { return embed(base_.from_integer(n)); }

  value_type from_rational(const mpq_class& q) const
    requires RationalEmbedding<R>
  {
    return embed(base_.from_rational(q));
  }

  BigInt characteristic() const { return base_.characteristic(); }
  bool is_field() const { return false; }
  bool is_rational_algebra() const { return base_.is_rational_algebra(); }

  std::string name() const {
    return std::string(Convention == SeriesConvention::kHurwitz ? "Hurwitz" : "PowerSeries") +
           "(" + base_.name() + "; m=" + std::to_string(m()) + ", N=" + std::to_string(trunc()) +
           ")";
  }

  // ---- units ----------------------------------------------------------------

  // Solves a * b = 1 one coefficient at a time in graded-lex order; each step
  // only needs coefficients of b of strictly lower rank.
  value_type invert(const value_type& a) const {
    check(a);
    if constexpr (!InvertibleRing<R>) {
      throw MathDomainError("series inversion needs a coefficient field; " + base_.name() +
                            " has no inverse operation");
    } else {
      if (!base_.is_field()) {
        throw MathDomainError("series inversion needs a coefficient field; " + base_.name() +
                              " is not a field");
      }
      const auto inv0 = base_.try_invert(a.coeffs[0]);
      if (!inv0) throw MathDomainError("series with zero constant term is not a unit");
      const auto& t = *tables_;
      value_type out{m(), trunc(), a.valid, std::vector<coeff_type>(size(), base_.zero())};
      out.coeffs[0] = *inv0;
      for (std::size_t k = 1; k < size(); ++k) {
        coeff_type acc = base_.zero();
        for (std::size_t e = t.offsets[k]; e < t.offsets[k + 1]; ++e) {
          const auto& term = t.terms[e];
          if (term.right == k) continue;
          coeff_type prod = base_.mul(a.coeffs[term.left], out.coeffs[term.right]);
          if (!term.unit_weight) prod = base_.mul(t.weights[e], prod);
          acc = base_.add(acc, prod);
        }
        out.coeffs[k] = base_.neg(base_.mul(*inv0, acc));
      }
      return out;
    }
  }

  std::optional<value_type> try_invert(const value_type& a) const
    requires InvertibleRing<R>
  {
    check(a);
    if (!base_.is_field() || !base_.try_invert(a.coeffs[0])) return std::nullopt;
    return invert(a);
  }

  // ---- derivations ----------------------------------------------------------

  // The shift derivation in direction i: a_{alpha + e_i} moves to alpha,
  // scaled by (alpha_i + 1) for ordinary series. Costs one order of validity.
  value_type shift_derive(const value_type& a, std::size_t i) const {
    check(a);
    if (i >= m()) throw std::out_of_range("derivation index " + std::to_string(i) + " out of range");
    if (a.valid == 0) throw MathDomainError("derivation exhausts truncation");
    value_type out{m(), trunc(), a.valid - 1, {}};
    out.coeffs.reserve(size());
    for (std::size_t k = 0; k < size(); ++k) {
      const std::size_t up = indices().raise(k, i);
      if (up == GradedIndexSet::npos) {
        out.coeffs.push_back(base_.zero());
      } else if constexpr (Convention == SeriesConvention::kHurwitz) {
        out.coeffs.push_back(a.coeffs[up]);
      } else {
        out.coeffs.push_back(
            base_.mul(base_.from_integer(BigInt(indices()[k][i] + 1)), a.coeffs[up]));
      }
    }
    return out;
  }

  // Applies a coefficient derivation to every coefficient; validity unchanged.
  value_type coeff_derive(const value_type& a, const Derivation<coeff_type>& d) const {
    check(a);
    if (!d) return with_valid(zero(), a.valid);
    value_type out{m(), trunc(), a.valid, {}};
    out.coeffs.reserve(size());
    for (const auto& c : a.coeffs) out.coeffs.push_back(d(c));
    return out;
  }

  friend bool operator==(const TruncatedSeriesRing& x, const TruncatedSeriesRing& y) {
    return x.base_ == y.base_ && x.m() == y.m() && x.trunc() == y.trunc();
  }

  void check(const value_type& a) const {
    if (a.m != m() || a.trunc != trunc() || a.coeffs.size() != size()) {
      throw std::invalid_argument("series of shape (m=" + std::to_string(a.m) + ", N=" +
                                  std::to_string(a.trunc) + ") used with " + name());
    }
  }

 private:
  struct Term {
    std::uint32_t left;
    std::uint32_t right;
    bool unit_weight;
  };
  struct Tables {
    GradedIndexSet indices;
    std::vector<std::size_t> offsets;  // terms of output k live in [offsets[k], offsets[k+1])
    std::vector<Term> terms;
    std::vector<coeff_type> weights;
  };

  void check(const value_type& a, const value_type& b) const {
    check(a);
    check(b);
  }

  value_type filled(const coeff_type& c) const {
    return value_type{m(), trunc(), trunc(), std::vector<coeff_type>(size(), c)};
  }

  // For every output index alpha, every split alpha = beta + gamma together
  // with its weight mapped into the coefficient ring. Splits whose weight
  // vanishes (binomials divisible by the characteristic) are dropped.
  static std::shared_ptr<const Tables> build_tables(const R& base, std::size_t m, unsigned trunc) {
    if (m == 0) throw std::invalid_argument("series need at least one variable");
    auto t = std::make_shared<Tables>(Tables{GradedIndexSet(m, trunc), {}, {}, {}});
    const auto& idx = t->indices;
    t->offsets.push_back(0);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const MultiIndex& alpha = idx[k];
      for (std::size_t i = 0; i < idx.count_upto(alpha.total_degree()); ++i) {
        const MultiIndex& beta = idx[i];
        if (!le(beta, alpha)) continue;
        const auto j = static_cast<std::uint32_t>(idx.rank(difftaylor::sub(alpha, beta)));
        if constexpr (Convention == SeriesConvention::kHurwitz) {
          coeff_type w = base.from_integer(binomial(alpha, beta));
          if (base.is_zero(w)) continue;
          const bool unit = base.equal(w, base.one());
          t->terms.push_back({static_cast<std::uint32_t>(i), j, unit});
          t->weights.push_back(std::move(w));
        } else {
          t->terms.push_back({static_cast<std::uint32_t>(i), j, true});
          t->weights.push_back(base.one());
        }
      }
      t->offsets.push_back(t->terms.size());
    }
    return t;
  }

  R base_;
  std::shared_ptr<const Tables> tables_;
};

template <CommutativeRing R>
using HurwitzRing = TruncatedSeriesRing<R, SeriesConvention::kHurwitz>;

template <CommutativeRing R>
using PowerSeriesRing = TruncatedSeriesRing<R, SeriesConvention::kOrdinary>;

// Which derivations a series ring carries: the shift derivations d, the
// coefficientwise lift of a family delta on the coefficients, or their sum.
template <class V>
struct SeriesDifferentialStructure {
  std::optional<DerivationFamily<V>> delta;
  bool include_shift = true;
};

template <CommutativeRing R, SeriesConvention C>
DifferentialRing<TruncatedSeriesRing<R, C>> differential_structure(
    const TruncatedSeriesRing<R, C>& ring,
    const SeriesDifferentialStructure<typename R::value_type>& structure) {
  using S = typename TruncatedSeriesRing<R, C>::value_type;
  if (structure.delta && structure.delta->size() != ring.m()) {
    throw std::invalid_argument("coefficient derivation family has " +
                                std::to_string(structure.delta->size()) +
                                " members, series have m = " + std::to_string(ring.m()));
  }
  DerivationFamily<S> family;
  for (std::size_t i = 0; i < ring.m(); ++i) {
    Derivation<typename R::value_type> d;
    if (structure.delta) d = (*structure.delta)[i];
    const bool shift = structure.include_shift;
    if (!d && !shift) {
      family.emplace_back();
    } else {
      family.emplace_back([ring, d, shift, i](const S& a) {
        if (!shift) return ring.coeff_derive(a, d);
        S out = ring.shift_derive(a, i);
        return d ? ring.add(ring.coeff_derive(a, d), out) : out;
      });
    }
  }
  return DifferentialRing<TruncatedSeriesRing<R, C>>(ring, std::move(family));
}

// (H(K), d_K) or (K[[t]], d/dt).
template <CommutativeRing R, SeriesConvention C>
DifferentialRing<TruncatedSeriesRing<R, C>> shift_structure(const TruncatedSeriesRing<R, C>& ring) {
  return differential_structure(ring, SeriesDifferentialStructure<typename R::value_type>{});
}

// (H(K), delta + d_K) or (K[[t]], delta + d/dt).
template <CommutativeRing R, SeriesConvention C>
DifferentialRing<TruncatedSeriesRing<R, C>> twisted_structure(
    const TruncatedSeriesRing<R, C>& ring, const DerivationFamily<typename R::value_type>& delta) {
  return differential_structure(ring,
                                SeriesDifferentialStructure<typename R::value_type>{delta, true});
}

// Divides the coefficient at alpha by alpha!, carrying Hurwitz series to
// ordinary power series. Defined only over Q-algebras.
template <RationalEmbedding R>
Series<typename R::value_type> hw_to_divided(const HurwitzRing<R>& ring,
                                             const Series<typename R::value_type>& a) {
  ring.check(a);
  const auto& base = ring.base();
  if (!base.is_rational_algebra()) {
    throw MathDomainError("divided powers need a Q-algebra; " + base.name() + " is not one");
  }
  Series<typename R::value_type> out = a;
  for (std::size_t k = 0; k < ring.size(); ++k) {
    const mpq_class scale(BigInt(1), factorial(ring.indices()[k]));
    out.coeffs[k] = base.mul(base.from_rational(scale), a.coeffs[k]);
  }
  return out;
}

// Inverse of hw_to_divided: multiplies the coefficient at alpha by alpha!.
template <RationalEmbedding R>
Series<typename R::value_type> hw_from_divided(const HurwitzRing<R>& ring,
                                               const Series<typename R::value_type>& a) {
  ring.check(a);
  const auto& base = ring.base();
  if (!base.is_rational_algebra()) {
    throw MathDomainError("divided powers need a Q-algebra; " + base.name() + " is not one");
  }
  Series<typename R::value_type> out = a;
  for (std::size_t k = 0; k < ring.size(); ++k) {
    out.coeffs[k] = base.mul(base.from_integer(factorial(ring.indices()[k])), a.coeffs[k]);
  }
  return out;
}

}  // namespace difftaylor
