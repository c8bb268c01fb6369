#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "difftaylor/hurwitz.hpp"
#include "difftaylor/rings.hpp"

namespace difftaylor {

// The data a Taylor morphism is applied to: a source differential ring
// (A, partial), a target differential ring (K, delta), a ring homomorphism
// phi: A -> K (not necessarily differential), and a truncation order.
//
// The four constructors below all expand an element a of A through the jet
// phi(partial^beta a), |beta| <= N, and differ in how they twist it by delta
// and in which series convention they report.
//
// On the two twisted formulas: the twisted Taylor coefficient at alpha is
//   (1/alpha!) sum_{beta <= alpha} (-1)^|alpha-beta| C(alpha,beta) delta^(alpha-beta) phi(partial^beta a)
// and the twisted Hurwitz coefficient is
//   sum_{gamma <= alpha} (-1)^|gamma| C(alpha,gamma) delta^gamma phi(partial^(alpha-gamma) a).
// Substituting gamma = alpha - beta and using C(alpha,beta) = C(alpha,alpha-beta)
// turns the inner sum of one into the other, so the twisted Taylor series is
// exactly the divided-power image of the twisted Hurwitz series. Both are
// implemented from their own formula and the bridge is checked, not assumed.
template <CommutativeRing A, CommutativeRing K>
class MorphismSpec {
 public:
  using source_value = typename A::value_type;
  using target_value = typename K::value_type;
  using Map = std::function<target_value(const source_value&)>;

  MorphismSpec(DifferentialRing<A> source, DifferentialRing<K> target, Map phi, unsigned trunc)
      : source_(std::move(source)),
        target_(std::move(target)),
        phi_(std::move(phi)),
        hurwitz_(target_.ring(), target_.m(), trunc),
        power_series_(target_.ring(), target_.m(), trunc) {
    if (source_.m() != target_.m()) {
      throw std::invalid_argument("source has " + std::to_string(source_.m()) +
                                  " derivations but target has " + std::to_string(target_.m()));
    }
    if (!phi_) throw std::invalid_argument("morphism spec needs a map phi");
  }

  const DifferentialRing<A>& source() const noexcept { return source_; }
  const DifferentialRing<K>& target() const noexcept { return target_; }
  const Map& phi() const noexcept { return phi_; }
  unsigned trunc() const noexcept { return hurwitz_.trunc(); }
  std::size_t m() const noexcept { return target_.m(); }

  // Output rings: Hurwitz series for the Hurwitz constructors, ordinary
  // power series for the Taylor constructors.
  const HurwitzRing<K>& hurwitz_ring() const noexcept { return hurwitz_; }
  const PowerSeriesRing<K>& power_series_ring() const noexcept { return power_series_; }

  // Throws std::invalid_argument unless phi passes the ring-homomorphism
  // laws on every pair of samples.
  void validate(std::span<const source_value> samples) const {
    if (!is_ring_hom(source_.ring(), target_.ring(), phi_, samples)) {
      throw std::invalid_argument("phi is not a ring homomorphism on the given samples");
    }
  }

 private:
  DifferentialRing<A> source_;
  DifferentialRing<K> target_;
  Map phi_;
  HurwitzRing<K> hurwitz_;
  PowerSeriesRing<K> power_series_;
};

namespace detail {

// delta^gamma(value) for every gamma of total degree <= depth, indexed by
// graded-lex rank. Each entry is one derivation away from an earlier one.
template <class V, class Derive>
std::vector<V> iterated_derivatives(const GradedIndexSet& idx, unsigned depth, V value,
                                    const Derive& derive) {
  const std::size_t n = idx.count_upto(depth);
  std::vector<V> out;
  out.reserve(n);
  out.push_back(std::move(value));
  for (std::size_t k = 1; k < n; ++k) {
    std::size_t i = 0;
    while (idx[k][i] == 0) ++i;
    out.push_back(derive(out[idx.lower(k, i)], i));
  }
  return out;
}

// Sources that carry their own precision (truncated series) cap how far they
// can be differentiated.
template <CommutativeRing A, CommutativeRing K>
unsigned expansion_depth(const MorphismSpec<A, K>& spec, const typename A::value_type& a) {
  if constexpr (requires { spec.source().ring().valid_order(a); }) {
    return std::min(spec.trunc(), static_cast<unsigned>(spec.source().ring().valid_order(a)));
  } else {
    return spec.trunc();
  }
}

// phi(partial^beta a) for |beta| <= depth.
template <CommutativeRing A, CommutativeRing K>
std::vector<typename K::value_type> source_jet(const MorphismSpec<A, K>& spec,
                                               const typename A::value_type& a, unsigned depth) {
  const auto& src = spec.source();
  const auto derived = iterated_derivatives(
      spec.hurwitz_ring().indices(), depth, a,
      [&](const typename A::value_type& x, std::size_t i) { return src.derive(x, i); });
  std::vector<typename K::value_type> out;
  out.reserve(derived.size());
  for (const auto& x : derived) out.push_back(spec.phi()(x));
  return out;
}

// table[beta][gamma] = delta^gamma(jet[beta]) for |beta| + |gamma| <= depth.
template <CommutativeRing K>
std::vector<std::vector<typename K::value_type>> coefficient_derivatives(
    const DifferentialRing<K>& target, const GradedIndexSet& idx, unsigned depth,
    const std::vector<typename K::value_type>& jet) {
  std::vector<std::vector<typename K::value_type>> table;
  table.reserve(jet.size());
  for (std::size_t b = 0; b < jet.size(); ++b) {
    const unsigned room = depth - idx[b].total_degree();
    if (target.is_trivial()) {
      std::vector<typename K::value_type> col(idx.count_upto(room), target.ring().zero());
      col[0] = jet[b];
      table.push_back(std::move(col));
    } else {
      table.push_back(iterated_derivatives(
          idx, room, jet[b],
          [&](const typename K::value_type& x, std::size_t i) { return target.derive(x, i); }));
    }
  }
  return table;
}

template <CommutativeRing K>
typename K::value_type signed_binomial(const K& ring, const MultiIndex& top,
                                       const MultiIndex& bottom, unsigned sign_exponent) {
  BigInt c = binomial(top, bottom);
  if (sign_exponent % 2 == 1) c = -c;
  return ring.from_integer(c);
}

template <class V>
Series<V> empty_series(std::size_t m, unsigned trunc, unsigned valid, std::size_t size, const V& zero) {
  return Series<V>{m, trunc, valid, std::vector<V>(size, zero)};
}

}  // namespace detail

// a -> sum_alpha phi(partial^alpha a) / alpha! t^alpha, as an ordinary power
// series. Needs a constant Q-algebra K.
template <CommutativeRing A, RationalEmbedding K>
Series<typename K::value_type> classical_taylor(const MorphismSpec<A, K>& spec,
                                                const typename A::value_type& a) {
  const auto& k = spec.target().ring();
  if (!k.is_rational_algebra()) {
    throw MathDomainError("classical Taylor morphism needs a Q-algebra; " + k.name() +
                          " is not one");
  }
  if (!spec.target().is_trivial()) {
    throw MathDomainError("classical Taylor morphism needs constant coefficients (zero derivations)");
  }
  const auto& ring = spec.power_series_ring();
  const unsigned depth = detail::expansion_depth(spec, a);
  const auto jet = detail::source_jet(spec, a, depth);
  auto out = detail::empty_series(ring.m(), ring.trunc(), depth, ring.size(), k.zero());
  for (std::size_t r = 0; r < jet.size(); ++r) {
    const mpq_class inv(BigInt(1), factorial(ring.indices()[r]));
    out.coeffs[r] = k.mul(k.from_rational(inv), jet[r]);
  }
  return out;
}

// a -> sum_alpha phi(partial^alpha a) t^alpha in H(K). Needs constant K; any
// characteristic.
template <CommutativeRing A, CommutativeRing K>
Series<typename K::value_type> hurwitz_morphism(const MorphismSpec<A, K>& spec,
                                                const typename A::value_type& a) {
  if (!spec.target().is_trivial()) {
    throw MathDomainError("Hurwitz morphism needs constant coefficients (zero derivations)");
  }
  const auto& k = spec.target().ring();
  const auto& ring = spec.hurwitz_ring();
  const unsigned depth = detail::expansion_depth(spec, a);
  auto jet = detail::source_jet(spec, a, depth);
  auto out = detail::empty_series(ring.m(), ring.trunc(), depth, ring.size(), k.zero());
  for (std::size_t r = 0; r < jet.size(); ++r) out.coeffs[r] = std::move(jet[r]);
  return out;
}

// Twisted Taylor morphism into (K[[t]], delta + d/dt), ordinary convention.
// Needs K to be a Q-algebra; delta arbitrary.
template <CommutativeRing A, RationalEmbedding K>
Series<typename K::value_type> twisted_taylor(const MorphismSpec<A, K>& spec,
                                              const typename A::value_type& a) {
  const auto& k = spec.target().ring();
  if (!k.is_rational_algebra()) {
    throw MathDomainError("twisted Taylor morphism needs a Q-algebra; " + k.name() +
                          " is not one");
  }
  const auto& ring = spec.power_series_ring();
  const auto& idx = ring.indices();
  const unsigned depth = detail::expansion_depth(spec, a);
  const auto jet = detail::source_jet(spec, a, depth);
  const auto table = detail::coefficient_derivatives(spec.target(), idx, depth, jet);

  auto out = detail::empty_series(ring.m(), ring.trunc(), depth, ring.size(), k.zero());
  for (std::size_t r = 0; r < jet.size(); ++r) {
    const MultiIndex& alpha = idx[r];
    auto acc = k.zero();
    for (std::size_t b = 0; b <= r; ++b) {
      const MultiIndex& beta = idx[b];
      if (!le(beta, alpha)) continue;
      const MultiIndex rest = sub(alpha, beta);
      const auto& term = table[b][idx.rank(rest)];
      if (k.is_zero(term)) continue;
      acc = k.add(acc, k.mul(detail::signed_binomial(k, alpha, beta, rest.total_degree()), term));
    }
    const mpq_class inv(BigInt(1), factorial(alpha));
    out.coeffs[r] = k.mul(k.from_rational(inv), acc);
  }
  return out;
}

// Twisted Hurwitz morphism into (H(K), delta + d_K). No restriction on K.
template <CommutativeRing A, CommutativeRing K>
Series<typename K::value_type> twisted_hurwitz(const MorphismSpec<A, K>& spec,
                                               const typename A::value_type& a) {
  const auto& k = spec.target().ring();
  const auto& ring = spec.hurwitz_ring();
  const auto& idx = ring.indices();
  const unsigned depth = detail::expansion_depth(spec, a);
  const auto jet = detail::source_jet(spec, a, depth);
  const auto table = detail::coefficient_derivatives(spec.target(), idx, depth, jet);

  auto out = detail::empty_series(ring.m(), ring.trunc(), depth, ring.size(), k.zero());
  for (std::size_t r = 0; r < jet.size(); ++r) {
    const MultiIndex& alpha = idx[r];
    auto acc = k.zero();
    for (std::size_t g = 0; g <= r; ++g) {
      const MultiIndex& gamma = idx[g];
      if (!le(gamma, alpha)) continue;
      const auto& term = table[idx.rank(sub(alpha, gamma))][g];
      if (k.is_zero(term)) continue;
      acc = k.add(acc, k.mul(detail::signed_binomial(k, alpha, gamma, gamma.total_degree()), term));
    }
    out.coeffs[r] = std::move(acc);
  }
  return out;
}

// The Hurwitz expansion of the constant-term map out of (H(K), partial + d_K),
// in closed form: b_alpha = sum_{gamma <= alpha} C(alpha,gamma) partial^gamma(a_{alpha-gamma}).
// Validity is preserved.
template <CommutativeRing K>
Series<typename K::value_type> ev_twist(const HurwitzRing<K>& ring,
                                        const Series<typename K::value_type>& a,
                                        const DerivationFamily<typename K::value_type>& partial) {
  ring.check(a);
  if (partial.size() != ring.m()) {
    throw std::invalid_argument("ev_twist: derivation family has " +
                                std::to_string(partial.size()) + " members, m = " +
                                std::to_string(ring.m()));
  }
  const auto& k = ring.base();
  const auto& idx = ring.indices();
  const DifferentialRing<K> coefficients(k, partial);
  const auto table = detail::coefficient_derivatives(coefficients, idx, ring.trunc(), a.coeffs);

  auto out = detail::empty_series(ring.m(), ring.trunc(), a.valid, ring.size(), k.zero());
  for (std::size_t r = 0; r < ring.size(); ++r) {
    const MultiIndex& alpha = idx[r];
    auto acc = k.zero();
    for (std::size_t g = 0; g <= r; ++g) {
      const MultiIndex& gamma = idx[g];
      if (!le(gamma, alpha)) continue;
      const auto& term = table[idx.rank(sub(alpha, gamma))][g];
      if (k.is_zero(term)) continue;
      acc = k.add(acc, k.mul(k.from_integer(binomial(alpha, gamma)), term));
    }
    out.coeffs[r] = std::move(acc);
  }
  return out;
}

// Compositional inverse of ev_twist with the same family.
template <CommutativeRing K>
Series<typename K::value_type> ev_untwist(const HurwitzRing<K>& ring,
                                          const Series<typename K::value_type>& a,
                                          const DerivationFamily<typename K::value_type>& delta) {
  return ev_twist(ring, a, negate_family(ring.base(), delta));
}

enum class MorphismKind { kClassical, kHurwitz, kTwistedTaylor, kTwistedHurwitz };

inline std::string_view morphism_name(MorphismKind kind) {
  switch (kind) {
    case MorphismKind::kClassical: return "classical";
    case MorphismKind::kHurwitz: return "hurwitz";
    case MorphismKind::kTwistedTaylor: return "twisted_taylor";
    case MorphismKind::kTwistedHurwitz: return "twisted_hurwitz";
  }
  return "";
}

inline std::optional<MorphismKind> morphism_from_name(std::string_view name) {
  for (auto kind : {MorphismKind::kClassical, MorphismKind::kHurwitz, MorphismKind::kTwistedTaylor,
                    MorphismKind::kTwistedHurwitz}) {
    if (morphism_name(kind) == name) return kind;
  }
  return std::nullopt;
}

// Classical and twisted Taylor report ordinary power series; the Hurwitz
// constructors report Hurwitz series.
inline bool outputs_power_series(MorphismKind kind) {
  return kind == MorphismKind::kClassical || kind == MorphismKind::kTwistedTaylor;
}

template <CommutativeRing A, RationalEmbedding K>
Series<typename K::value_type> expand(MorphismKind kind, const MorphismSpec<A, K>& spec,
                                      const typename A::value_type& a) {
  switch (kind) {
    case MorphismKind::kClassical: return classical_taylor(spec, a);
    case MorphismKind::kHurwitz: return hurwitz_morphism(spec, a);
    case MorphismKind::kTwistedTaylor: return twisted_taylor(spec, a);
    case MorphismKind::kTwistedHurwitz: return twisted_hurwitz(spec, a);
  }
  throw std::invalid_argument("unknown morphism kind");
}

}  // namespace difftaylor
