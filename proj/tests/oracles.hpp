#pragma once

// Slow, direct reimplementations used as test oracles. They share no code
// with the library beyond the ring element types.

#include <map>
#include <random>
#include <vector>

#include "difftaylor/hurwitz.hpp"
#include "difftaylor/multiindex.hpp"

namespace difftaylor::oracle {

using Index = std::vector<unsigned>;

inline BigInt choose(unsigned n, unsigned k) {
  if (k > n) return 0;
  BigInt out = 1;
  for (unsigned j = 1; j <= k; ++j) out = out * (n - k + j) / j;
  return out;
}

inline BigInt choose(const Index& a, const Index& b) {
  BigInt out = 1;
  for (std::size_t i = 0; i < a.size(); ++i) out *= choose(a[i], b[i]);
  return out;
}

inline BigInt fact(const Index& a) {
  BigInt out = 1;
  for (unsigned e : a) {
    for (unsigned j = 2; j <= e; ++j) out *= j;
  }
  return out;
}

inline unsigned degree(const Index& a) {
  unsigned d = 0;
  for (unsigned e : a) d += e;
  return d;
}

// Every index of length m with total degree <= n, in no particular order.
inline std::vector<Index> box(std::size_t m, unsigned n) {
  std::vector<Index> out;
  Index cur(m, 0);
  for (;;) {
    if (degree(cur) <= n) out.push_back(cur);
    std::size_t i = 0;
    while (i < m && cur[i] == n) cur[i++] = 0;
    if (i == m) return out;
    ++cur[i];
  }
}

// Every beta with beta <= alpha componentwise.
inline std::vector<Index> below(const Index& alpha) {
  std::vector<Index> out;
  Index cur(alpha.size(), 0);
  for (;;) {
    out.push_back(cur);
    std::size_t i = 0;
    while (i < alpha.size() && cur[i] == alpha[i]) cur[i++] = 0;
    if (i == alpha.size()) return out;
    ++cur[i];
  }
}

inline Index minus(const Index& a, const Index& b) {
  Index out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

template <class V>
using SparseSeries = std::map<Index, V>;

template <class R, SeriesConvention C>
SparseSeries<typename R::value_type> to_sparse(const TruncatedSeriesRing<R, C>& ring,
                                               const Series<typename R::value_type>& a) {
  SparseSeries<typename R::value_type> out;
  for (const auto& alpha : box(ring.m(), a.valid)) out[alpha] = ring.coeff(a, MultiIndex(alpha));
  return out;
}

// (ab)_alpha = sum_beta binom(alpha, beta) a_beta b_(alpha - beta).
template <class R>
SparseSeries<typename R::value_type> hurwitz_product(const R& k, std::size_t m, unsigned n,
                                                     const SparseSeries<typename R::value_type>& a,
                                                     const SparseSeries<typename R::value_type>& b) {
  SparseSeries<typename R::value_type> out;
  for (const auto& alpha : box(m, n)) {
    auto acc = k.zero();
    for (const auto& beta : below(alpha)) {
      acc = k.add(acc, k.mul(k.from_integer(choose(alpha, beta)),
                             k.mul(a.at(beta), b.at(minus(alpha, beta)))));
    }
    out[alpha] = acc;
  }
  return out;
}

template <class R, SeriesConvention C>
void expect_same(const TruncatedSeriesRing<R, C>& ring, const Series<typename R::value_type>& actual,
                 const SparseSeries<typename R::value_type>& expected, unsigned order) {
  for (const auto& alpha : box(ring.m(), order)) {
    if (!ring.base().equal(ring.coeff(actual, MultiIndex(alpha)), expected.at(alpha))) {
      throw std::runtime_error("coefficient mismatch at " + MultiIndex(alpha).to_string() + ": got " +
                               ring.base().format(ring.coeff(actual, MultiIndex(alpha))) + ", expected " +
                               ring.base().format(expected.at(alpha)));
    }
  }
}

}  // namespace difftaylor::oracle
