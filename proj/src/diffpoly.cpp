#include "difftaylor/diffpoly.hpp"

namespace difftaylor {

Monomial multiply_monomials(const Monomial& a, const Monomial& b) {
  const SymbolLess less;
  Monomial out;
  out.factors.reserve(a.factors.size() + b.factors.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.factors.size() && j < b.factors.size()) {
    const auto& fa = a.factors[i];
    const auto& fb = b.factors[j];
    if (less(fa.first, fb.first)) {
      out.factors.push_back(fa);
      ++i;
    } else if (less(fb.first, fa.first)) {
      out.factors.push_back(fb);
      ++j;
    } else {
      out.factors.emplace_back(fa.first, fa.second + fb.second);
      ++i;
      ++j;
    }
  }
  out.factors.insert(out.factors.end(), a.factors.begin() + static_cast<std::ptrdiff_t>(i), a.factors.end());
  out.factors.insert(out.factors.end(), b.factors.begin() + static_cast<std::ptrdiff_t>(j), b.factors.end());
  return out;
}

}  // namespace difftaylor
