#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "difftaylor/diffpoly.hpp"
#include "difftaylor/hurwitz.hpp"
#include "difftaylor/polynomial.hpp"
#include "difftaylor/rings.hpp"

namespace difftaylor {

// Seeded random source for generated test instances. Draws are reduced by
// modulo instead of going through <random> distributions so that a seed
// produces the same instance with every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }
  long range(long lo, long hi) { return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1))); }
  bool chance(unsigned num, unsigned den) { return below(den) < num; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a(std::string_view text);

// "Q" or "F<p>" for a prime p.
struct FieldSpec {
  std::string name;
  std::uint64_t p = 0;  // 0 for Q
};

FieldSpec parse_field(const std::string& name);

// Calls fn with the field object named by spec.
template <class Fn>
auto with_field(const FieldSpec& spec, Fn&& fn) {
  if (spec.p == 0) return fn(Rational{});
  return fn(PrimeField(spec.p));
}

template <CommutativeRing F>
typename F::value_type random_scalar(const F& field, Rng& rng) {
  if constexpr (std::is_same_v<F, Rational>) {
    mpq_class q(rng.range(-5, 5), rng.range(1, 4));
    q.canonicalize();
    return q;
  } else {
    return field.from_integer(BigInt(static_cast<unsigned long>(rng.below(1000))));
  }
}

template <CommutativeRing F>
typename F::value_type random_nonzero_scalar(const F& field, Rng& rng) {
  for (;;) {
    auto c = random_scalar(field, rng);
    if (!field.is_zero(c)) return c;
  }
}

// Each monomial of total degree <= degree appears with probability 1/2.
template <CommutativeRing F>
typename Polynomial<F>::value_type random_poly(const Polynomial<F>& ring, Rng& rng, unsigned degree) {
  if (ring.num_generators() == 0) return ring.constant(random_scalar(ring.base(), rng));
  auto out = ring.zero();
  for (const auto& e : enumerate_upto(ring.num_generators(), degree)) {
    if (rng.chance(1, 2)) ring.add_in_place(out, ring.monomial(e, random_scalar(ring.base(), rng)));
  }
  return out;
}

// A polynomial in generator j alone.
template <CommutativeRing F>
typename Polynomial<F>::value_type random_univariate(const Polynomial<F>& ring, Rng& rng, std::size_t j,
                                                     unsigned degree) {
  auto out = ring.zero();
  for (unsigned k = 0; k <= degree; ++k) {
    if (!rng.chance(1, 2)) continue;
    std::vector<unsigned> e(ring.num_generators(), 0);
    e[j] = k;
    ring.add_in_place(out, ring.monomial(MultiIndex(e), random_scalar(ring.base(), rng)));
  }
  return out;
}

template <CommutativeRing F>
using Images = std::vector<std::vector<typename Polynomial<F>::value_type>>;

template <CommutativeRing F>
Images<F> zero_images(const Polynomial<F>& ring, std::size_t m) {
  return Images<F>(m, std::vector<typename Polynomial<F>::value_type>(ring.num_generators(), ring.zero()));
}

// Images delta_i(generator j) of a random commuting family on a polynomial
// ring with at least two generators. Shapes: the zero family; p(u) d/du and
// q(v) d/dv in separate directions; scalar multiples c_i D of one random
// derivation D.
template <CommutativeRing F>
Images<F> random_family(const Polynomial<F>& ring, Rng& rng, std::size_t m, unsigned degree) {
  auto images = zero_images(ring, m);
  const auto shape = rng.below(4);
  if (shape == 0) return images;
  if (shape == 1 && m <= ring.num_generators()) {
    for (std::size_t i = 0; i < m; ++i) images[i][i] = random_univariate(ring, rng, i, degree);
    return images;
  }
  std::vector<typename Polynomial<F>::value_type> d;
  for (std::size_t j = 0; j < ring.num_generators(); ++j) d.push_back(random_poly(ring, rng, degree));
  for (std::size_t i = 0; i < m; ++i) {
    const auto c = i == 0 ? ring.base().one() : random_scalar(ring.base(), rng);
    for (std::size_t j = 0; j < d.size(); ++j) images[i][j] = ring.scale(c, d[j]);
  }
  return images;
}

template <CommutativeRing F>
nlohmann::ordered_json describe_family(const Polynomial<F>& ring, const Images<F>& images) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& row : images) {
    nlohmann::ordered_json d = nlohmann::ordered_json::object();
    for (std::size_t j = 0; j < row.size(); ++j) d[ring.generators()[j]] = ring.format(row[j]);
    out.push_back(std::move(d));
  }
  return out;
}

// Dense series whose coefficients are drawn by gen(), each nonzero with
// probability 2/3, valid to the full truncation.
template <CommutativeRing R, SeriesConvention C, class Gen>
Series<typename R::value_type> random_series(const TruncatedSeriesRing<R, C>& ring, Rng& rng, Gen&& gen) {
  std::vector<typename R::value_type> coeffs;
  coeffs.reserve(ring.size());
  for (std::size_t k = 0; k < ring.size(); ++k) {
    coeffs.push_back(rng.chance(2, 3) ? gen() : ring.base().zero());
  }
  return ring.from_coefficients(std::move(coeffs), ring.trunc());
}

// Up to three terms, each a product of at most `degree` symbols of order <= 1.
template <CommutativeRing F>
typename DiffPolyRing<Polynomial<F>>::value_type random_diffpoly(const DiffPolyRing<Polynomial<F>>& ring,
                                                                 Rng& rng, unsigned degree) {
  const auto& k = ring.coefficients();
  auto out = ring.zero();
  const auto terms = 1 + rng.below(3);
  for (std::size_t t = 0; t < terms; ++t) {
    Monomial mono;
    const auto factors = rng.below(degree + 1);
    for (std::size_t f = 0; f < factors; ++f) {
      const std::size_t var = rng.below(ring.num_vars());
      MultiIndex order(ring.m());
      if (rng.chance(1, 2)) order = MultiIndex::unit(ring.m(), rng.below(ring.m()));
      mono = multiply_monomials(mono, Monomial{{{Symbol{var, order}, 1U}}});
    }
    auto c = random_poly(k, rng, 1);
    if (k.is_zero(c)) c = k.one();
    out = ring.add(out, ring.term(mono, c));
  }
  return out;
}

// Random images for every symbol of order <= order.
template <CommutativeRing F>
SymbolTable<typename Polynomial<F>::value_type> random_table(const DiffPolyRing<Polynomial<F>>& ring, Rng& rng,
                                                             unsigned order, unsigned degree) {
  SymbolTable<typename Polynomial<F>::value_type> table;
  for (std::size_t v = 0; v < ring.num_vars(); ++v) {
    for (const auto& alpha : enumerate_upto(ring.m(), order)) {
      table.values.emplace(Symbol{v, alpha}, random_poly(ring.coefficients(), rng, degree));
    }
  }
  return table;
}

template <CommutativeRing F>
nlohmann::ordered_json describe_table(const DiffPolyRing<Polynomial<F>>& ring,
                                      const SymbolTable<typename Polynomial<F>::value_type>& table) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& [sym, value] : table.values) {
    out.push_back(nlohmann::ordered_json::array(
        {ring.vars()[sym.var], sym.order.to_vector(), ring.coefficients().format(value)}));
  }
  return out;
}

}  // namespace difftaylor
