#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "difftaylor/rings.hpp"

namespace difftaylor {

// The formal derivative delta^order x_var.
struct Symbol {
  std::size_t var = 0;
  MultiIndex order;

  friend bool operator==(const Symbol&, const Symbol&) = default;
};

// Graded-lex on the derivative order, then the variable index.
struct SymbolLess {
  bool operator()(const Symbol& a, const Symbol& b) const {
    if (grlex_less(a.order, b.order)) return true;
    if (grlex_less(b.order, a.order)) return false;
    return a.var < b.var;
  }
};

// A product of symbols with positive powers, kept sorted by SymbolLess.
struct Monomial {
  std::vector<std::pair<Symbol, unsigned>> factors;

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend bool operator<(const Monomial& a, const Monomial& b) {
    const SymbolLess less;
    const std::size_t n = std::min(a.factors.size(), b.factors.size());
    for (std::size_t k = 0; k < n; ++k) {
      const auto& [sa, pa] = a.factors[k];
      const auto& [sb, pb] = b.factors[k];
      if (less(sa, sb)) return true;
      if (less(sb, sa)) return false;
      if (pa != pb) return pa < pb;
    }
    return a.factors.size() < b.factors.size();
  }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& f : factors) d += f.second;
    return d;
  }
};

Monomial multiply_monomials(const Monomial& a, const Monomial& b);

template <class C>
struct DiffPolyValue {
  std::map<Monomial, C> terms;

  friend bool operator==(const DiffPolyValue&, const DiffPolyValue&) = default;
};

// Values of a homomorphism K{x} -> K on the symbols it touches. Lookups of
// absent symbols throw MissingSymbolError unless default_zero is set.
template <class C>
struct SymbolTable {
  std::map<Symbol, C, SymbolLess> values;
  bool default_zero = false;
};

// K{x_1..x_k} over a differential ring (K, delta): polynomials in the
// symbols delta^alpha x_i, with derivations extending delta and acting on
// symbols by delta_i(delta^alpha x_j) = delta^(alpha + e_i) x_j.
template <CommutativeRing R>
class DiffPolyRing {
 public:
  using base_type = R;
  using coeff_type = typename R::value_type;
  using value_type = DiffPolyValue<coeff_type>;

  DiffPolyRing(DifferentialRing<R> base, std::vector<std::string> vars)
      : base_(std::move(base)), vars_(std::move(vars)) {
    if (vars_.empty()) throw std::invalid_argument("a differential polynomial ring needs a variable");
    std::set<std::string> seen(vars_.begin(), vars_.end());
    if (seen.size() != vars_.size()) throw std::invalid_argument("duplicate variable names");
  }

  const DifferentialRing<R>& base() const noexcept { return base_; }
  const R& coefficients() const noexcept { return base_.ring(); }
  std::size_t m() const noexcept { return base_.m(); }
  const std::vector<std::string>& vars() const noexcept { return vars_; }
  std::size_t num_vars() const noexcept { return vars_.size(); }

  std::size_t var_index(const std::string& name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i] == name) return i;
    }
    throw std::invalid_argument("unknown variable \"" + name + "\"");
  }

  value_type zero() const { return {}; }
  value_type one() const { return constant(coefficients().one()); }

  // The structure map K -> K{x}.
  value_type constant(const coeff_type& c) const {
    value_type out;
    if (!coefficients().is_zero(c)) out.terms.emplace(Monomial{}, c);
    return out;
  }

  value_type symbol(std::size_t var, const MultiIndex& order) const {
    check_symbol(Symbol{var, order});
    value_type out;
    out.terms.emplace(Monomial{{{Symbol{var, order}, 1U}}}, coefficients().one());
    return out;
  }

  value_type variable(std::size_t var) const { return symbol(var, MultiIndex(m())); }

  value_type term(const Monomial& mono, const coeff_type& c) const {
    for (const auto& [s, p] : mono.factors) {
      check_symbol(s);
      if (p == 0) throw std::invalid_argument("monomial factors need positive powers");
    }
    Monomial normal;
    for (const auto& f : mono.factors) normal = multiply_monomials(normal, Monomial{{f}});
    value_type out;
    if (!coefficients().is_zero(c)) out.terms.emplace(std::move(normal), c);
    return out;
  }

  value_type add(const value_type& a, const value_type& b) const {
    value_type out = a;
    add_in_place(out, b);
    return out;
  }

  void add_in_place(value_type& acc, const value_type& b) const {
    for (const auto& [mono, c] : b.terms) accumulate(acc, mono, c);
  }

  value_type sub(const value_type& a, const value_type& b) const { return add(a, neg(b)); }

  value_type neg(const value_type& a) const {
    value_type out;
    for (const auto& [mono, c] : a.terms) {
      out.terms.emplace_hint(out.terms.end(), mono, coefficients().neg(c));
    }
    return out;
  }

  value_type mul(const value_type& a, const value_type& b) const {
    value_type out;
    for (const auto& [ma, ca] : a.terms) {
      for (const auto& [mb, cb] : b.terms) {
        accumulate(out, multiply_monomials(ma, mb), coefficients().mul(ca, cb));
      }
    }
    return out;
  }

  bool equal(const value_type& a, const value_type& b) const { return a == b; }
  bool is_zero(const value_type& a) const { return a.terms.empty(); }
  value_type from_integer(const BigInt& n) const { return constant(coefficients().from_integer(n)); }

  value_type from_rational(const mpq_class& q) const
    requires RationalEmbedding<R>
  {
    return constant(coefficients().from_rational(q));
  }

  BigInt characteristic() const { return coefficients().characteristic(); }
  bool is_field() const { return false; }
  bool is_rational_algebra() const { return coefficients().is_rational_algebra(); }

  std::string name() const {
    std::string out = coefficients().name() + "{";
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (i > 0) out += ",";
      out += vars_[i];
    }
    return out + "}";
  }

  // The i-th derivation: Leibniz over each monomial, the base derivation on
  // the coefficients, and order raising on the symbols.
  value_type derive(const value_type& f, std::size_t i) const {
    if (i >= m()) throw std::out_of_range("derivation index " + std::to_string(i) + " out of range");
    const auto& K = coefficients();
    value_type out;
    for (const auto& [mono, c] : f.terms) {
      if (base_.derivations()[i]) accumulate(out, mono, base_.derive(c, i));
      for (std::size_t k = 0; k < mono.factors.size(); ++k) {
        const auto& [sym, power] = mono.factors[k];
        Monomial rest;
        rest.factors.reserve(mono.factors.size());
        for (std::size_t l = 0; l < mono.factors.size(); ++l) {
          if (l != k) {
            rest.factors.push_back(mono.factors[l]);
          } else if (power > 1) {
            rest.factors.emplace_back(sym, power - 1);
          }
        }
        Symbol raised{sym.var, sym.order};
        raised.order[i] += 1;
        Monomial next = multiply_monomials(rest, Monomial{{{raised, 1U}}});
        accumulate(out, next, K.mul(K.from_integer(BigInt(power)), c));
      }
    }
    return out;
  }

  // Highest derivative order |alpha| among the symbols of f.
  unsigned order(const value_type& f) const {
    unsigned best = 0;
    for (const auto& [mono, c] : f.terms) {
      for (const auto& [sym, p] : mono.factors) best = std::max(best, sym.order.total_degree());
    }
    return best;
  }

  std::set<Symbol, SymbolLess> symbols(const value_type& f) const {
    std::set<Symbol, SymbolLess> out;
    for (const auto& [mono, c] : f.terms) {
      for (const auto& [sym, p] : mono.factors) out.insert(sym);
    }
    return out;
  }

  std::string format_symbol(const Symbol& s) const {
    std::string out = vars_.at(s.var);
    if (s.order.is_zero()) return out;
    out += "[";
    for (std::size_t i = 0; i < s.order.size(); ++i) {
      if (i > 0) out += ",";
      out += std::to_string(s.order[i]);
    }
    return out + "]";
  }

  std::string format(const value_type& f) const
    requires TextualRing<R>
  {
    if (f.terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [mono, c] : f.terms) {
      if (!first) out += " + ";
      first = false;
      std::string coeff = coefficients().format(c);
      if (coeff.find(' ') != std::string::npos) coeff = "(" + coeff + ")";
      std::string body;
      for (const auto& [sym, p] : mono.factors) {
        if (!body.empty()) body += "*";
        body += format_symbol(sym);
        if (p > 1) body += "^" + std::to_string(p);
      }
      if (body.empty()) {
        out += coeff;
      } else if (coeff == "1") {
        out += body;
      } else {
        out += coeff + "*" + body;
      }
    }
    return out;
  }

  friend bool operator==(const DiffPolyRing& a, const DiffPolyRing& b) {
    return a.coefficients() == b.coefficients() && a.vars_ == b.vars_ && a.m() == b.m();
  }

 private:
  void check_symbol(const Symbol& s) const {
    if (s.var >= vars_.size()) {
      throw std::out_of_range("variable index " + std::to_string(s.var) + " out of range");
    }
    if (s.order.size() != m()) {
      throw std::invalid_argument("symbol order " + s.order.to_string() + " has length " +
                                  std::to_string(s.order.size()) + ", expected " +
                                  std::to_string(m()));
    }
  }

  void accumulate(value_type& out, const Monomial& mono, const coeff_type& c) const {
    const auto& K = coefficients();
    if (K.is_zero(c)) return;
    auto it = out.terms.find(mono);
    if (it == out.terms.end()) {
      out.terms.emplace(mono, c);
      return;
    }
    it->second = K.add(it->second, c);
    if (K.is_zero(it->second)) out.terms.erase(it);
  }

  DifferentialRing<R> base_;
  std::vector<std::string> vars_;
};

// Evaluates f under the K-algebra homomorphism K{x} -> K fixed by the table.
// Coefficients map identically; the result need not respect derivations.
template <CommutativeRing R>
typename R::value_type dp_eval_hom(const DiffPolyRing<R>& ring,
                                   const typename DiffPolyRing<R>::value_type& f,
                                   const SymbolTable<typename R::value_type>& table) {
  const auto& K = ring.coefficients();
  auto result = K.zero();
  for (const auto& [mono, c] : f.terms) {
    auto value = c;
    for (const auto& [sym, power] : mono.factors) {
      const auto it = table.values.find(sym);
      if (it == table.values.end()) {
        if (table.default_zero) {
          value = K.zero();
          break;
        }
        throw MissingSymbolError(ring.format_symbol(sym));
      }
      for (unsigned p = 0; p < power; ++p) value = K.mul(value, it->second);
    }
    result = K.add(result, value);
  }
  return result;
}

// Evaluates f at a point of a differential K-algebra (L, partial) with
// structure map eta: each symbol delta^alpha x_i becomes partial^alpha(point[i]).
template <CommutativeRing R, CommutativeRing L, class StructureMap>
typename L::value_type dp_eval(const DiffPolyRing<R>& ring,
                               const typename DiffPolyRing<R>::value_type& f,
                               const DifferentialRing<L>& target, const StructureMap& eta,
                               std::span<const typename L::value_type> point) {
  if constexpr (std::is_constructible_v<bool, const StructureMap&>) {
    if (!eta) throw std::invalid_argument("dp_eval needs a structure map K -> L");
  }
  if (point.size() != ring.num_vars()) {
    throw std::invalid_argument("dp_eval: point has " + std::to_string(point.size()) +
                                " entries for " + std::to_string(ring.num_vars()) + " variables");
  }
  if (target.m() != ring.m()) throw std::invalid_argument("dp_eval: derivation count mismatch");
  const auto& lr = target.ring();
  std::map<Symbol, typename L::value_type, SymbolLess> memo;
  auto value_of = [&](const Symbol& s) -> const typename L::value_type& {
    auto it = memo.find(s);
    if (it == memo.end()) it = memo.emplace(s, target.derive_iter(point[s.var], s.order)).first;
    return it->second;
  };
  auto result = lr.zero();
  for (const auto& [mono, c] : f.terms) {
    auto value = eta(c);
    for (const auto& [sym, power] : mono.factors) {
      for (unsigned p = 0; p < power; ++p) value = lr.mul(value, value_of(sym));
    }
    result = lr.add(result, value);
  }
  return result;
}

// The inclusion K{x_a..} -> K{x_a.., y..} that matches variables by name.
template <CommutativeRing R>
typename DiffPolyRing<R>::value_type include_variables(const DiffPolyRing<R>& from,
                                                       const DiffPolyRing<R>& to,
                                                       const typename DiffPolyRing<R>::value_type& f) {
  std::vector<std::size_t> target_index;
  for (const auto& v : from.vars()) target_index.push_back(to.var_index(v));
  typename DiffPolyRing<R>::value_type out;
  for (const auto& [mono, c] : f.terms) {
    Monomial mapped;
    for (const auto& [sym, p] : mono.factors) {
      mapped = multiply_monomials(mapped, Monomial{{{Symbol{target_index[sym.var], sym.order}, p}}});
    }
    out = to.add(out, to.term(mapped, c));
  }
  return out;
}

// The ring of differential polynomials together with its derivations.
template <CommutativeRing R>
DifferentialRing<DiffPolyRing<R>> differential(const DiffPolyRing<R>& ring) {
  using V = typename DiffPolyRing<R>::value_type;
  DerivationFamily<V> family;
  for (std::size_t i = 0; i < ring.m(); ++i) {
    family.emplace_back([ring, i](const V& f) { return ring.derive(f, i); });
  }
  return DifferentialRing<DiffPolyRing<R>>(ring, std::move(family));
}

}  // namespace difftaylor
