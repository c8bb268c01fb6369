#include "difftaylor/rings.hpp"

#include <cctype>

namespace difftaylor {

namespace {

std::string trimmed(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  return std::string(text.substr(begin, end - begin));
}

bool is_integer_literal(std::string_view s) {
  std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

// Parses "a" or "a/b" with integer a, b and b != 0.
mpq_class parse_fraction(std::string_view raw) {
  const std::string text = trimmed(raw);
  const auto slash = text.find('/');
  const std::string num = text.substr(0, slash);
  const std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-' || den[0] == '+') {
    throw std::invalid_argument("not a rational number: \"" + std::string(raw) + "\"");
  }
  BigInt n(num[0] == '+' ? num.substr(1) : num);
  BigInt d(den);
  if (d == 0) throw std::invalid_argument("zero denominator in \"" + std::string(raw) + "\"");
  mpq_class q(n, d);
  q.canonicalize();
  return q;
}

}  // namespace

std::optional<Rational::value_type> Rational::try_invert(const value_type& a) const {
  if (sgn(a) == 0) return std::nullopt;
  return value_type(1 / a);
}

Rational::value_type Rational::parse(std::string_view text) const { return parse_fraction(text); }

bool is_prime(std::uint64_t n) {
  const BigInt z(static_cast<unsigned long>(n));
  return mpz_probab_prime_p(z.get_mpz_t(), 25) != 0;
}

PrimeField::PrimeField(std::uint64_t p) : p_(p) {
  if (p >= (std::uint64_t{1} << 62)) {
    throw std::invalid_argument("prime field modulus " + std::to_string(p) + " is too large");
  }
  if (!is_prime(p)) {
    throw std::invalid_argument("prime field modulus " + std::to_string(p) + " is not prime");
  }
}

PrimeField::value_type PrimeField::from_integer(const BigInt& n) const {
  BigInt r;
  mpz_fdiv_r_ui(r.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(p_));
  return r.get_ui();
}

PrimeField::value_type PrimeField::from_rational(const mpq_class&) const {
  throw MathDomainError(name() + " is not a Q-algebra");
}

PrimeField::value_type PrimeField::pow(value_type a, std::uint64_t e) const {
  value_type result = one();
  while (e > 0) {
    if (e & 1U) result = mul(result, a);
    a = mul(a, a);
    e >>= 1U;
  }
  return result;
}

std::optional<PrimeField::value_type> PrimeField::try_invert(value_type a) const {
  if (a % p_ == 0) return std::nullopt;
  return pow(a, p_ - 2);
}

PrimeField::value_type PrimeField::parse(std::string_view text) const {
  const mpq_class q = parse_fraction(text);
  const value_type num = from_integer(q.get_num());
  const auto den = try_invert(from_integer(q.get_den()));
  if (!den) {
    throw std::invalid_argument("denominator of \"" + std::string(text) + "\" vanishes in " +
                                name());
  }
  return mul(num, *den);
}

}  // namespace difftaylor
