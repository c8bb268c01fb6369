#pragma once

#include <cstddef>
#include <initializer_list>
#include <memory>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>
#include <gmpxx.h>

namespace difftaylor {

using BigInt = mpz_class;

// A tuple of nonnegative integers of fixed length m. The length is part of the
// value: mixing indices of different lengths is an error, never a coercion.
class MultiIndex {
 public:
  using storage_type = boost::container::small_vector<unsigned, 4>;

  MultiIndex() = default;
  explicit MultiIndex(std::size_t length) : entries_(length, 0U) {}
  MultiIndex(std::initializer_list<unsigned> entries) : entries_(entries) {}
  explicit MultiIndex(const std::vector<unsigned>& entries)
      : entries_(entries.begin(), entries.end()) {}

  // The multi-index with a 1 in position i and 0 elsewhere.
  static MultiIndex unit(std::size_t length, std::size_t i);

  std::size_t size() const noexcept { return entries_.size(); }
  unsigned operator[](std::size_t i) const { return entries_[i]; }
  unsigned& operator[](std::size_t i) { return entries_[i]; }

  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  unsigned total_degree() const noexcept {
    unsigned d = 0;
    for (unsigned e : entries_) d += e;
    return d;
  }
  bool is_zero() const noexcept { return total_degree() == 0; }

  std::vector<unsigned> to_vector() const { return {entries_.begin(), entries_.end()}; }
  std::string to_string() const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  storage_type entries_;
};

// Componentwise partial order.
bool le(const MultiIndex& a, const MultiIndex& b);
MultiIndex add(const MultiIndex& a, const MultiIndex& b);
// Requires b <= a.
MultiIndex sub(const MultiIndex& a, const MultiIndex& b);

unsigned total_degree(const MultiIndex& a) noexcept;
BigInt factorial(const MultiIndex& a);
// Product of the componentwise binomial coefficients. Requires b <= a.
BigInt binomial(const MultiIndex& a, const MultiIndex& b);

// Graded-lexicographic order: lower total degree first; within one grade the
// index with the larger first entry comes first, ties broken on later
// entries. For m = 2 this lists (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...
namespace detail {
[[noreturn]] void throw_length_mismatch(const char* op, const MultiIndex& a, const MultiIndex& b);
}

inline bool grlex_less(const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != b.size()) detail::throw_length_mismatch("grlex_less", a, b);
  unsigned da = 0;
  unsigned db = 0;
  int first = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    da += a[i];
    db += b[i];
    if (first == 0 && a[i] != b[i]) first = a[i] > b[i] ? 1 : -1;
  }
  if (da != db) return da < db;
  return first == 1;
}

struct GrlexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const { return grlex_less(a, b); }
};
struct GrlexGreater {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const { return grlex_less(b, a); }
};

// Every multi-index of length m with |a| <= max_degree, in graded-lex order.
std::vector<MultiIndex> enumerate_upto(std::size_t m, unsigned max_degree);

// The multi-indices of length m and total degree <= N, with O(1) rank lookup
// and precomputed shift tables. This is the index domain of every dense
// truncated series.
class GradedIndexSet {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  GradedIndexSet(std::size_t m, unsigned max_degree);

  std::size_t m() const noexcept { return m_; }
  unsigned max_degree() const noexcept { return max_degree_; }
  std::size_t size() const noexcept { return indices_.size(); }

  const MultiIndex& operator[](std::size_t rank) const { return indices_[rank]; }
  const std::vector<MultiIndex>& indices() const noexcept { return indices_; }

  // Rank of a in graded-lex order; throws if |a| exceeds the maximal degree.
  std::size_t rank(const MultiIndex& a) const;
  bool contains(const MultiIndex& a) const noexcept;

  // rank(indices[k] + unit(i)), or npos when that leaves the set.
  std::size_t raise(std::size_t k, std::size_t i) const { return raise_[k * m_ + i]; }
  // rank(indices[k] - unit(i)), or npos when entry i is zero.
  std::size_t lower(std::size_t k, std::size_t i) const { return lower_[k * m_ + i]; }

  // Number of indices with total degree <= d, i.e. binom(d + m, m).
  std::size_t count_upto(unsigned d) const;

 private:
  std::size_t encode(const MultiIndex& a) const noexcept;

  std::size_t m_;
  unsigned max_degree_;
  std::vector<MultiIndex> indices_;
  std::vector<std::size_t> lookup_;
  std::vector<std::size_t> raise_;
  std::vector<std::size_t> lower_;
  std::vector<std::size_t> grade_end_;
};

// Test hooks that deliberately corrupt shared combinatorial tables so that
// mutation tests can confirm the checks notice. Never enabled in normal runs.
namespace fault {

enum class Kind { kNone, kBinomialTable };

void inject(Kind kind) noexcept;
Kind active() noexcept;

// Enables a fault for the lifetime of the guard.
class ScopedFault {
 public:
  explicit ScopedFault(Kind kind) : previous_(active()) { inject(kind); }
  ~ScopedFault() { inject(previous_); }
  ScopedFault(const ScopedFault&) = delete;
  ScopedFault& operator=(const ScopedFault&) = delete;

 private:
  Kind previous_;
};

}  // namespace fault

}  // namespace difftaylor
