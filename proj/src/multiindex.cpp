#include "difftaylor/multiindex.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <stdexcept>

namespace difftaylor {

namespace {

void require_same_length(const MultiIndex& a, const MultiIndex& b, const char* op) {
  if (a.size() != b.size()) detail::throw_length_mismatch(op, a, b);
}

std::atomic<fault::Kind> g_fault{fault::Kind::kNone};

}  // namespace

void detail::throw_length_mismatch(const char* op, const MultiIndex& a, const MultiIndex& b) {
  throw std::invalid_argument(std::string(op) + ": multi-index length mismatch (" +
                              std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
}

MultiIndex MultiIndex::unit(std::size_t length, std::size_t i) {
  if (i >= length) {
    throw std::out_of_range("unit multi-index position " + std::to_string(i) +
                            " out of range for length " + std::to_string(length));
  }
  MultiIndex result(length);
  result[i] = 1;
  return result;
}

std::string MultiIndex::to_string() const {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i > 0) out << ',';
    out << entries_[i];
  }
  if (entries_.size() == 1) out << ',';
  out << ')';
  return out.str();
}

bool le(const MultiIndex& a, const MultiIndex& b) {
  require_same_length(a, b, "le");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
  }
  return true;
}

MultiIndex add(const MultiIndex& a, const MultiIndex& b) {
  require_same_length(a, b, "add");
  MultiIndex result(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) result[i] = a[i] + b[i];
  return result;
}

MultiIndex sub(const MultiIndex& a, const MultiIndex& b) {
  require_same_length(a, b, "sub");
  if (!le(b, a)) {
    throw std::invalid_argument("sub: " + b.to_string() + " is not <= " + a.to_string());
  }
  MultiIndex result(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) result[i] = a[i] - b[i];
  return result;
}

unsigned total_degree(const MultiIndex& a) noexcept { return a.total_degree(); }

BigInt factorial(const MultiIndex& a) {
  BigInt result = 1;
  for (unsigned entry : a) {
    BigInt f;
    mpz_fac_ui(f.get_mpz_t(), entry);
    result *= f;
  }
  return result;
}

BigInt binomial(const MultiIndex& a, const MultiIndex& b) {
  require_same_length(a, b, "binomial");
  if (!le(b, a)) {
    throw std::invalid_argument("binomial: " + b.to_string() + " is not <= " + a.to_string());
  }
  BigInt result = 1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    BigInt c;
    mpz_bin_uiui(c.get_mpz_t(), a[i], b[i]);
    result *= c;
  }
  if (g_fault.load(std::memory_order_relaxed) == fault::Kind::kBinomialTable && !b.is_zero() &&
      !(b == a)) {
    result += 1;
  }
  return result;
}

namespace {

// Appends all multi-indices of the given length and exact degree, first entry
// descending, recursing on the tail.
void append_grade(std::size_t length, unsigned degree, MultiIndex& prefix, std::size_t pos,
                  std::vector<MultiIndex>& out) {
  if (pos + 1 == length) {
    prefix[pos] = degree;
    out.push_back(prefix);
    return;
  }
  for (unsigned first = degree + 1; first-- > 0;) {
    prefix[pos] = first;
    append_grade(length, degree - first, prefix, pos + 1, out);
  }
  prefix[pos] = 0;
}

}  // namespace

std::vector<MultiIndex> enumerate_upto(std::size_t m, unsigned max_degree) {
  if (m == 0) throw std::invalid_argument("enumerate_upto: m must be at least 1");
  std::vector<MultiIndex> out;
  MultiIndex scratch(m);
  for (unsigned d = 0; d <= max_degree; ++d) append_grade(m, d, scratch, 0, out);
  return out;
}

GradedIndexSet::GradedIndexSet(std::size_t m, unsigned max_degree)
    : m_(m), max_degree_(max_degree), indices_(enumerate_upto(m, max_degree)) {
  std::size_t box = 1;
  for (std::size_t i = 0; i < m_; ++i) box *= (max_degree_ + 1);
  lookup_.assign(box, npos);
  for (std::size_t k = 0; k < indices_.size(); ++k) lookup_[encode(indices_[k])] = k;

  raise_.assign(indices_.size() * m_, npos);
  lower_.assign(indices_.size() * m_, npos);
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    for (std::size_t i = 0; i < m_; ++i) {
      MultiIndex up = indices_[k];
      up[i] += 1;
      if (up.total_degree() <= max_degree_) raise_[k * m_ + i] = lookup_[encode(up)];
      if (indices_[k][i] > 0) {
        MultiIndex down = indices_[k];
        down[i] -= 1;
        lower_[k * m_ + i] = lookup_[encode(down)];
      }
    }
  }

  grade_end_.assign(max_degree_ + 1, 0);
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    grade_end_[indices_[k].total_degree()] = k + 1;
  }
}

std::size_t GradedIndexSet::encode(const MultiIndex& a) const noexcept {
  std::size_t code = 0;
  for (std::size_t i = 0; i < m_; ++i) code = code * (max_degree_ + 1) + a[i];
  return code;
}

bool GradedIndexSet::contains(const MultiIndex& a) const noexcept {
  return a.size() == m_ && a.total_degree() <= max_degree_;
}

std::size_t GradedIndexSet::rank(const MultiIndex& a) const {
  if (a.size() != m_) {
    throw std::invalid_argument("multi-index " + a.to_string() + " has length " +
                                std::to_string(a.size()) + ", expected " + std::to_string(m_));
  }
  if (a.total_degree() > max_degree_) {
    throw std::out_of_range("multi-index " + a.to_string() + " exceeds truncation degree " +
                            std::to_string(max_degree_));
  }
  return lookup_[encode(a)];
}

std::size_t GradedIndexSet::count_upto(unsigned d) const {
  if (d >= max_degree_) return indices_.size();
  return grade_end_[d];
}

namespace fault {

void inject(Kind kind) noexcept { g_fault.store(kind, std::memory_order_relaxed); }
Kind active() noexcept { return g_fault.load(std::memory_order_relaxed); }

}  // namespace fault

}  // namespace difftaylor
