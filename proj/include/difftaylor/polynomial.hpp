#pragma once

#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "difftaylor/rings.hpp"

namespace difftaylor {

// Sparse polynomial in named generators: exponent vector -> nonzero coefficient,
// highest graded-lex monomial first.
template <class C>
struct PolyValue {
  std::map<MultiIndex, C, GrlexGreater> terms;

  friend bool operator==(const PolyValue&, const PolyValue&) = default;
};

// R[g_1, ..., g_k]. With no generators this is R itself, which lets a single
// coefficient type serve both the plain and the polynomial cases.
template <CommutativeRing R>
class Polynomial {
 public:
  using base_type = R;
  using coeff_type = typename R::value_type;
  using value_type = PolyValue<coeff_type>;

  explicit Polynomial(R base, std::vector<std::string> generators = {})
      : base_(std::move(base)), generators_(std::move(generators)) {
    std::set<std::string> seen;
    for (const auto& g : generators_) {
      if (g.empty() || !(std::isalpha(static_cast<unsigned char>(g[0])) || g[0] == '_')) {
        throw std::invalid_argument("invalid generator name \"" + g + "\"");
      }
      for (char c : g) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) {
          throw std::invalid_argument("invalid generator name \"" + g + "\"");
        }
      }
      if (!seen.insert(g).second) throw std::invalid_argument("duplicate generator \"" + g + "\"");
    }
  }

  const R& base() const noexcept { return base_; }
  const std::vector<std::string>& generators() const noexcept { return generators_; }
  std::size_t num_generators() const noexcept { return generators_.size(); }

  std::size_t generator_index(std::string_view name) const {
    for (std::size_t j = 0; j < generators_.size(); ++j) {
      if (generators_[j] == name) return j;
    }
    throw std::invalid_argument("unknown generator \"" + std::string(name) + "\"");
  }

  value_type zero() const { return {}; }
  value_type one() const { return constant(base_.one()); }

  value_type constant(const coeff_type& c) const {
    value_type out;
    if (!base_.is_zero(c)) out.terms.emplace(MultiIndex(generators_.size()), c);
    return out;
  }

  value_type monomial(const MultiIndex& exponent, const coeff_type& c) const {
    check_exponent(exponent);
    value_type out;
    if (!base_.is_zero(c)) out.terms.emplace(exponent, c);
    return out;
  }

  value_type generator(std::size_t j) const {
    return monomial(MultiIndex::unit(generators_.size(), j), base_.one());
  }

  value_type add(const value_type& a, const value_type& b) const {
    value_type out = a;
    for (const auto& [e, c] : b.terms) accumulate(out, e, c);
    return out;
  }

  void add_in_place(value_type& acc, const value_type& b) const {
    for (const auto& [e, c] : b.terms) accumulate(acc, e, c);
  }

  value_type sub(const value_type& a, const value_type& b) const { return add(a, neg(b)); }

  value_type neg(const value_type& a) const {
    value_type out;
    for (const auto& [e, c] : a.terms) out.terms.emplace_hint(out.terms.end(), e, base_.neg(c));
    return out;
  }

  value_type mul(const value_type& a, const value_type& b) const {
    value_type out;
    for (const auto& [ea, ca] : a.terms) {
      for (const auto& [eb, cb] : b.terms) accumulate(out, difftaylor::add(ea, eb), base_.mul(ca, cb));
    }
    return out;
  }

  value_type scale(const coeff_type& c, const value_type& a) const {
    value_type out;
    if (base_.is_zero(c)) return out;
    for (const auto& [e, ca] : a.terms) {
      auto prod = base_.mul(c, ca);
      if (!base_.is_zero(prod)) out.terms.emplace_hint(out.terms.end(), e, std::move(prod));
    }
    return out;
  }

  bool equal(const value_type& a, const value_type& b) const { return a == b; }
  bool is_zero(const value_type& a) const { return a.terms.empty(); }

  value_type from_integer(const BigInt& n) const { return constant(base_.from_integer(n)); }

  value_type from_rational(const mpq_class& q) const
    requires RationalEmbedding<R>
  {
    return constant(base_.from_rational(q));
  }

  // Only nonzero constants can be units when the base is a field.
  std::optional<value_type> try_invert(const value_type& a) const
    requires InvertibleRing<R>
  {
    if (a.terms.size() != 1 || !a.terms.begin()->first.is_zero()) return std::nullopt;
    auto inv = base_.try_invert(a.terms.begin()->second);
    if (!inv) return std::nullopt;
    return constant(*inv);
  }

  // The constant coefficient, if a is constant.
  std::optional<coeff_type> as_constant(const value_type& a) const {
    if (a.terms.empty()) return base_.zero();
    if (a.terms.size() == 1 && a.terms.begin()->first.is_zero()) return a.terms.begin()->second;
    return std::nullopt;
  }

  BigInt characteristic() const { return base_.characteristic(); }
  bool is_field() const { return generators_.empty() && base_.is_field(); }
  bool is_rational_algebra() const { return base_.is_rational_algebra(); }

  std::string name() const {
    if (generators_.empty()) return base_.name();
    std::string out = base_.name() + "[";
    for (std::size_t j = 0; j < generators_.size(); ++j) {
      if (j > 0) out += ",";
      out += generators_[j];
    }
    return out + "]";
  }

  unsigned degree(const value_type& a) const {
    return a.terms.empty() ? 0 : a.terms.begin()->first.total_degree();
  }

  // Canonical text: terms from the highest graded-lex monomial down, e.g.
  // "u^2 - 3/2*u*v + 1". Unit coefficients are omitted on non-constant terms.
  std::string format(const value_type& a) const
    requires TextualRing<R>
  {
    if (a.terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : a.terms) {
      std::string coeff = base_.format(c);
      bool negative = !coeff.empty() && coeff[0] == '-';
      if (negative) coeff.erase(0, 1);
      if (first) {
        if (negative) out += "-";
      } else {
        out += negative ? " - " : " + ";
      }
      first = false;
      std::string mono;
      for (std::size_t j = 0; j < e.size(); ++j) {
        if (e[j] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += generators_[j];
        if (e[j] > 1) mono += "^" + std::to_string(e[j]);
      }
      if (mono.empty()) {
        out += coeff;
      } else if (coeff == "1") {
        out += mono;
      } else {
        out += coeff + "*" + mono;
      }
    }
    return out;
  }

  // Accepts sums of terms c*g^k*h..., where c is "a" or "a/b" and may be
  // omitted; whitespace is ignored.
  value_type parse(std::string_view text) const
    requires TextualRing<R>
  {
    Parser p{*this, text, 0};
    return p.parse_sum();
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void check_exponent(const MultiIndex& e) const {
    if (e.size() != generators_.size()) {
      throw std::invalid_argument("exponent " + e.to_string() + " does not match " +
                                  std::to_string(generators_.size()) + " generators");
    }
  }

  void accumulate(value_type& out, const MultiIndex& e, const coeff_type& c) const {
    if (base_.is_zero(c)) return;
    auto it = out.terms.find(e);
    if (it == out.terms.end()) {
      out.terms.emplace(e, c);
      return;
    }
    it->second = base_.add(it->second, c);
    if (base_.is_zero(it->second)) out.terms.erase(it);
  }

  struct Parser {
    const Polynomial& ring;
    std::string_view text;
    std::size_t pos;

    void skip() {
      while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool peek(char c) {
      skip();
      return pos < text.size() && text[pos] == c;
    }
    [[noreturn]] void fail(const std::string& what) const {
      throw std::invalid_argument("cannot parse \"" + std::string(text) + "\" as element of " +
                                  ring.name() + ": " + what + " at offset " +
                                  std::to_string(pos));
    }

    value_type parse_sum() {
      value_type total = ring.zero();
      bool negate = false;
      if (peek('-')) {
        negate = true;
        ++pos;
      } else if (peek('+')) {
        ++pos;
      }
      while (true) {
        value_type term = parse_term();
        total = negate ? ring.sub(total, term) : ring.add(total, term);
        if (peek('+')) {
          negate = false;
          ++pos;
        } else if (peek('-')) {
          negate = true;
          ++pos;
        } else {
          break;
        }
      }
      skip();
      if (pos != text.size()) fail("unexpected character");
      return total;
    }

    value_type parse_term() {
      value_type term = parse_factor();
      while (peek('*')) {
        ++pos;
        term = ring.mul(term, parse_factor());
      }
      return term;
    }

    value_type parse_factor() {
      skip();
      if (pos >= text.size()) fail("expected a factor");
      const char c = text[pos];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos < text.size() && text[pos] == '/') {
          ++pos;
          std::size_t den = pos;
          while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
          if (den == pos) fail("expected a denominator");
        }
        return ring.constant(ring.base().parse(text.substr(start, pos - start)));
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
          ++pos;
        }
        const std::string name(text.substr(start, pos - start));
        std::size_t j = 0;
        for (; j < ring.generators().size(); ++j) {
          if (ring.generators()[j] == name) break;
        }
        if (j == ring.generators().size()) fail("unknown generator \"" + name + "\"");
        unsigned power = 1;
        if (peek('^')) {
          ++pos;
          skip();
          std::size_t start_exp = pos;
          while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
          if (start_exp == pos) fail("expected an exponent");
          power = static_cast<unsigned>(std::stoul(std::string(text.substr(start_exp, pos - start_exp))));
        }
        MultiIndex e(ring.generators().size());
        e[j] = power;
        return ring.monomial(e, ring.base().one());
      }
      fail("unexpected character");
    }
  };

  R base_;
  std::vector<std::string> generators_;
};

// The derivation of R[g_1..g_k] determined by its values on the generators
// and by a derivation on the coefficients (zero when empty). Returns the empty
// (zero) derivation when all of those vanish.
template <CommutativeRing R>
Derivation<PolyValue<typename R::value_type>> polynomial_derivation(
    const Polynomial<R>& ring, std::vector<PolyValue<typename R::value_type>> images,
    Derivation<typename R::value_type> on_coefficients = {}) {
  using P = PolyValue<typename R::value_type>;
  if (images.size() != ring.num_generators()) {
    throw std::invalid_argument("derivation needs one image per generator of " + ring.name());
  }
  bool all_zero = !on_coefficients;
  for (const auto& img : images) all_zero = all_zero && img.terms.empty();
  if (all_zero) return {};

  return [ring, images = std::move(images), on_coefficients](const P& f) {
    const auto& base = ring.base();
    P out;
    for (const auto& [e, c] : f.terms) {
      if (on_coefficients) ring.add_in_place(out, ring.monomial(e, on_coefficients(c)));
      for (std::size_t j = 0; j < e.size(); ++j) {
        if (e[j] == 0 || images[j].terms.empty()) continue;
        MultiIndex lowered = e;
        lowered[j] -= 1;
        const auto factor = base.mul(c, base.from_integer(BigInt(e[j])));
        ring.add_in_place(out, ring.mul(ring.monomial(lowered, factor), images[j]));
      }
    }
    return out;
  };
}

// A polynomial differential ring whose i-th derivation sends generator j to
// images[i][j]. Commutation of the family is verified on the generators.
template <CommutativeRing R>
DifferentialRing<Polynomial<R>> make_differential_polynomial_ring(
    const Polynomial<R>& ring,
    const std::vector<std::vector<PolyValue<typename R::value_type>>>& images,
    const DerivationFamily<typename R::value_type>& on_coefficients = {}) {
  if (images.empty()) throw std::invalid_argument("need at least one derivation");
  if (!on_coefficients.empty() && on_coefficients.size() != images.size()) {
    throw std::invalid_argument("coefficient derivations must match the derivation count");
  }
  DerivationFamily<PolyValue<typename R::value_type>> family;
  for (std::size_t i = 0; i < images.size(); ++i) {
    family.push_back(polynomial_derivation(
        ring, images[i], on_coefficients.empty() ? Derivation<typename R::value_type>{}
                                                 : on_coefficients[i]));
  }
  DifferentialRing<Polynomial<R>> out(ring, std::move(family));
  for (std::size_t i = 0; i < out.m(); ++i) {
    for (std::size_t k = i + 1; k < out.m(); ++k) {
      for (std::size_t j = 0; j < ring.num_generators(); ++j) {
        const auto g = ring.generator(j);
        if (!ring.equal(out.derive(out.derive(g, k), i), out.derive(out.derive(g, i), k))) {
          throw std::invalid_argument("derivations " + std::to_string(i) + " and " +
                                      std::to_string(k) + " do not commute on generator " +
                                      ring.generators()[j]);
        }
      }
    }
  }
  return out;
}

}  // namespace difftaylor
