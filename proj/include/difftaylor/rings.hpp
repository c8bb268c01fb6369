#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "difftaylor/errors.hpp"
#include "difftaylor/multiindex.hpp"

namespace difftaylor {

// A ring descriptor is a small immutable value that carries whatever the
// element operations need (a modulus, generator names, a truncation order).
// Elements are plain values of R::value_type and never remember their ring;
// keeping descriptors and elements paired correctly is the caller's job.
template <class R>
concept CommutativeRing =
    std::copy_constructible<R> && requires(const R& r, const typename R::value_type& a,
                                           const typename R::value_type& b, const BigInt& n) {
      { r.zero() } -> std::same_as<typename R::value_type>;
      { r.one() } -> std::same_as<typename R::value_type>;
      { r.add(a, b) } -> std::same_as<typename R::value_type>;
      { r.sub(a, b) } -> std::same_as<typename R::value_type>;
      { r.neg(a) } -> std::same_as<typename R::value_type>;
      { r.mul(a, b) } -> std::same_as<typename R::value_type>;
      { r.equal(a, b) } -> std::same_as<bool>;
      { r.is_zero(a) } -> std::same_as<bool>;
      { r.from_integer(n) } -> std::same_as<typename R::value_type>;
      { r.characteristic() } -> std::same_as<BigInt>;
      { r.is_field() } -> std::same_as<bool>;
      { r.is_rational_algebra() } -> std::same_as<bool>;
      { r.name() } -> std::convertible_to<std::string>;
    };

// Rings whose units can be computed. try_invert returns nullopt for non-units.
template <class R>
concept InvertibleRing = CommutativeRing<R> && requires(const R& r,
                                                        const typename R::value_type& a) {
  { r.try_invert(a) } -> std::same_as<std::optional<typename R::value_type>>;
};

// Rings that can embed rationals. from_rational throws MathDomainError when
// the ring is not a Q-algebra.
template <class R>
concept RationalEmbedding = CommutativeRing<R> && requires(const R& r, const mpq_class& q) {
  { r.from_rational(q) } -> std::same_as<typename R::value_type>;
};

// Rings whose elements have a canonical text form.
template <class R>
concept TextualRing = CommutativeRing<R> && requires(const R& r, const typename R::value_type& a,
                                                     std::string_view text) {
  { r.format(a) } -> std::same_as<std::string>;
  { r.parse(text) } -> std::same_as<typename R::value_type>;
};

// Q with arbitrary-precision numerator and denominator.
class Rational {
 public:
  using value_type = mpq_class;

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  bool equal(const value_type& a, const value_type& b) const { return a == b; }
  bool is_zero(const value_type& a) const { return sgn(a) == 0; }
  value_type from_integer(const BigInt& n) const { return value_type(n); }
  value_type from_rational(const mpq_class& q) const { return q; }
  std::optional<value_type> try_invert(const value_type& a) const;

  BigInt characteristic() const { return 0; }
  bool is_field() const { return true; }
  bool is_rational_algebra() const { return true; }
  std::string name() const { return "Q"; }

  std::string format(const value_type& a) const { return a.get_str(); }
  value_type parse(std::string_view text) const;

  friend bool operator==(const Rational&, const Rational&) = default;
};

// Z/pZ for a prime p < 2^62. Elements are canonical residues in [0, p).
class PrimeField {
 public:
  using value_type = std::uint64_t;

  explicit PrimeField(std::uint64_t p);

  std::uint64_t modulus() const noexcept { return p_; }

  value_type zero() const { return 0; }
  value_type one() const { return 1 % p_; }
  value_type add(value_type a, value_type b) const {
    value_type s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + p_ - b; }
  value_type neg(value_type a) const { return a == 0 ? 0 : p_ - a; }
  value_type mul(value_type a, value_type b) const {
    return static_cast<value_type>((static_cast<unsigned __int128>(a) * b) % p_);
  }
  bool equal(value_type a, value_type b) const { return a == b; }
  bool is_zero(value_type a) const { return a == 0; }
  value_type from_integer(const BigInt& n) const;
  value_type from_rational(const mpq_class& q) const;
  std::optional<value_type> try_invert(value_type a) const;
  value_type pow(value_type a, std::uint64_t e) const;

  BigInt characteristic() const { return BigInt(static_cast<unsigned long>(p_)); }
  bool is_field() const { return true; }
  bool is_rational_algebra() const { return false; }
  std::string name() const { return "F" + std::to_string(p_); }

  std::string format(value_type a) const { return std::to_string(a); }
  value_type parse(std::string_view text) const;

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  std::uint64_t p_;
};

bool is_prime(std::uint64_t n);

// A single derivation on the elements of a ring. An empty function stands for
// the zero derivation, so constant structures cost nothing to apply.
template <class V>
using Derivation = std::function<V(const V&)>;

template <class V>
using DerivationFamily = std::vector<Derivation<V>>;

template <CommutativeRing R>
typename R::value_type apply_derivation(const R& ring, const Derivation<typename R::value_type>& d,
                                        const typename R::value_type& a) {
  return d ? d(a) : ring.zero();
}

template <CommutativeRing R>
DerivationFamily<typename R::value_type> zero_family(const R&, std::size_t m) {
  return DerivationFamily<typename R::value_type>(m);
}

template <CommutativeRing R>
DerivationFamily<typename R::value_type> negate_family(
    const R& ring, const DerivationFamily<typename R::value_type>& family) {
  using V = typename R::value_type;
  DerivationFamily<V> out;
  out.reserve(family.size());
  for (const auto& d : family) {
    if (!d) {
      out.emplace_back();
    } else {
      out.emplace_back([ring, d](const V& a) { return ring.neg(d(a)); });
    }
  }
  return out;
}

// Pointwise sum (d_1 + e_1, ..., d_m + e_m) of two families of equal length.
template <CommutativeRing R>
DerivationFamily<typename R::value_type> add_families(
    const R& ring, const DerivationFamily<typename R::value_type>& first,
    const DerivationFamily<typename R::value_type>& second) {
  using V = typename R::value_type;
  if (first.size() != second.size()) {
    throw std::invalid_argument("add_families: families have different lengths");
  }
  DerivationFamily<V> out;
  out.reserve(first.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    const auto& d = first[i];
    const auto& e = second[i];
    if (!d) {
      out.push_back(e);
    } else if (!e) {
      out.push_back(d);
    } else {
      out.emplace_back([ring, d, e](const V& a) { return ring.add(d(a), e(a)); });
    }
  }
  return out;
}

// A ring together with m derivations that are assumed (and property-tested) to
// commute. Derivation indices are 0-based.
template <CommutativeRing R>
class DifferentialRing {
 public:
  using ring_type = R;
  using value_type = typename R::value_type;
  using derivation_type = Derivation<value_type>;

  DifferentialRing(R ring, DerivationFamily<value_type> derivations)
      : ring_(std::move(ring)), derivations_(std::move(derivations)) {
    if (derivations_.empty()) {
      throw std::invalid_argument("a differential ring needs at least one derivation");
    }
  }

  // The ring with the m-tuple of zero derivations.
  static DifferentialRing constant(R ring, std::size_t m) {
    return DifferentialRing(std::move(ring), DerivationFamily<value_type>(m));
  }

  const R& ring() const noexcept { return ring_; }
  std::size_t m() const noexcept { return derivations_.size(); }
  const DerivationFamily<value_type>& derivations() const noexcept { return derivations_; }

  // True when every derivation is the zero map by construction.
  bool is_trivial() const noexcept {
    for (const auto& d : derivations_) {
      if (d) return false;
    }
    return true;
  }

  value_type derive(const value_type& a, std::size_t i) const {
    if (i >= m()) {
      throw std::out_of_range("derivation index " + std::to_string(i) + " out of range");
    }
    return apply_derivation(ring_, derivations_[i], a);
  }

  value_type derive_iter(const value_type& a, const MultiIndex& alpha) const {
    if (alpha.size() != m()) {
      throw std::invalid_argument("derive_iter: multi-index length " +
                                  std::to_string(alpha.size()) + " does not match m = " +
                                  std::to_string(m()));
    }
    value_type result = a;
    for (std::size_t i = 0; i < m(); ++i) {
      for (unsigned k = 0; k < alpha[i]; ++k) result = derive(result, i);
    }
    return result;
  }

  bool is_constant(const value_type& a) const {
    for (std::size_t i = 0; i < m(); ++i) {
      if (!ring_.is_zero(derive(a, i))) return false;
    }
    return true;
  }

 private:
  R ring_;
  DerivationFamily<value_type> derivations_;
};

// A map between the carriers of two differential rings, claimed to be a ring
// homomorphism. Nothing about it is trusted until checked on samples.
template <CommutativeRing D, CommutativeRing C>
struct RingHom {
  DifferentialRing<D> domain;
  DifferentialRing<C> codomain;
  std::function<typename C::value_type(const typename D::value_type&)> apply;
};

// Checks f(0) = 0, f(1) = 1, and additivity and multiplicativity on every
// pair drawn from the samples.
template <CommutativeRing D, CommutativeRing C, class Map>
bool is_ring_hom(const D& domain, const C& codomain, const Map& f,
                 std::span<const typename D::value_type> samples) {
  if (!codomain.equal(f(domain.zero()), codomain.zero())) return false;
  if (!codomain.equal(f(domain.one()), codomain.one())) return false;
  for (const auto& a : samples) {
    const auto fa = f(a);
    for (const auto& b : samples) {
      const auto fb = f(b);
      if (!codomain.equal(f(domain.add(a, b)), codomain.add(fa, fb))) return false;
      if (!codomain.equal(f(domain.mul(a, b)), codomain.mul(fa, fb))) return false;
    }
  }
  return true;
}

// Checks phi(delta_i a) = partial_i(phi(a)) for every sample and every i.
template <CommutativeRing D, CommutativeRing C>
bool is_differential_hom(const RingHom<D, C>& f, std::span<const typename D::value_type> samples) {
  if (f.domain.m() != f.codomain.m()) {
    throw std::invalid_argument("is_differential_hom: domain has " +
                                std::to_string(f.domain.m()) + " derivations, codomain has " +
                                std::to_string(f.codomain.m()));
  }
  for (const auto& a : samples) {
    const auto fa = f.apply(a);
    for (std::size_t i = 0; i < f.domain.m(); ++i) {
      if (!f.codomain.ring().equal(f.apply(f.domain.derive(a, i)), f.codomain.derive(fa, i))) {
        return false;
      }
    }
  }
  return true;
}

// Maps n into the ring as n * 1 by repeated doubling; used to cross-check
// from_integer implementations.
template <CommutativeRing R>
typename R::value_type integer_by_doubling(const R& ring, BigInt n) {
  const bool negative = n < 0;
  if (negative) n = -n;
  auto result = ring.zero();
  auto power = ring.one();
  while (n > 0) {
    if (mpz_odd_p(n.get_mpz_t())) result = ring.add(result, power);
    power = ring.add(power, power);
    n >>= 1;
  }
  return negative ? ring.neg(result) : result;
}

}  // namespace difftaylor
