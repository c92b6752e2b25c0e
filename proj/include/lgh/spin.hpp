#pragma once

// The Spin central extension of S_n realised inside the Clifford algebra
// Cl_n with generators e_i, e_i^2 = -1, e_i e_j = -e_j e_i.
//
// The generalized transposition of (i j) is the unnormalised vector
// v_ij = e_i - e_j.  With this sign convention v_ij^2 = -2, orthogonal
// v's anticommute and v_ij v_jk v_ij = 2 v_ik, so the group relations hold up
// to positive powers of 2 and the central element z is the scalar -1.
//
// Products are read as a right action: the permutation of a*b applies a's
// permutation first.  It is tracked alongside the multivector, and can be
// recovered independently from the twisted conjugation w^dagger e_k w.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lgh {

class SpinElement {
 public:
  using Mask = std::uint32_t;
  using Term = std::pair<Mask, std::int64_t>;

  static SpinElement identity(int n) {
    SpinElement e(n);
    e.terms_.push_back({0, 1});
    return e;
  }

  /// v_ij = e_i - e_j, lying over the transposition (i j).
  static SpinElement transposition(int n, int i, int j) {
    if (i == j || i < 0 || j < 0 || i >= n || j >= n) {
      throw std::invalid_argument("transposition needs distinct indices in [0, n)");
    }
    SpinElement e(n);
    e.terms_.push_back({Mask{1} << i, 1});
    e.terms_.push_back({Mask{1} << j, -1});
    std::sort(e.terms_.begin(), e.terms_.end());
    std::swap(e.perm_[i], e.perm_[j]);
    e.length_ = 1;
    return e;
  }

  int rank() const { return static_cast<int>(perm_.size()); }
  int word_length() const { return length_; }
  const std::vector<Term>& terms() const { return terms_; }
  /// Image of each label under the underlying permutation.
  const std::vector<int>& permutation() const { return perm_; }

  bool is_scalar() const { return terms_.size() == 1 && terms_.front().first == 0; }
  std::int64_t coefficient(Mask blade) const {
    const auto it = std::lower_bound(terms_.begin(), terms_.end(), Term{blade, INT64_MIN});
    return (it != terms_.end() && it->first == blade) ? it->second : 0;
  }

  /// Reversal anti-automorphism: reverses every word, so it lies over the inverse permutation.
  SpinElement reversed() const {
    SpinElement out(rank());
    out.length_ = length_;
    out.terms_ = terms_;
    for (auto& [blade, c] : out.terms_) {
      const int k = std::popcount(blade);
      if ((k * (k - 1) / 2) % 2 != 0) c = -c;
    }
    for (int i = 0; i < rank(); ++i) out.perm_[perm_[i]] = i;
    return out;
  }

  SpinElement scaled(std::int64_t factor) const {
    SpinElement out = *this;
    for (auto& t : out.terms_) t.second = checked_mul(t.second, factor);
    if (factor == 0) out.terms_.clear();
    return out;
  }

  friend SpinElement operator*(const SpinElement& a, const SpinElement& b) {
    if (a.rank() != b.rank()) throw std::invalid_argument("RankMismatch: spin elements of different rank");
    const int n = a.rank();
    SpinElement out(n);
    out.length_ = a.length_ + b.length_;
    for (int k = 0; k < n; ++k) out.perm_[k] = b.perm_[a.perm_[k]];
    std::vector<std::int64_t> acc(std::size_t{1} << n, 0);
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        std::int64_t c = checked_mul(ca, cb);
        if (blade_sign(ma, mb) < 0) c = -c;
        acc[ma ^ mb] = checked_add(acc[ma ^ mb], c);
      }
    }
    for (std::size_t m = 0; m < acc.size(); ++m) {
      if (acc[m] != 0) out.terms_.push_back({static_cast<Mask>(m), acc[m]});
    }
    return out;
  }

  friend bool operator==(const SpinElement& a, const SpinElement& b) {
    return a.terms_ == b.terms_ && a.perm_ == b.perm_;
  }

  /// Sign of e_A e_B relative to e_{A xor B}: one factor -1 per out-of-order
  /// pair (a in A, b in B, a > b) and per shared index (e_i^2 = -1).
  static int blade_sign(Mask a, Mask b) {
    int swaps = 0;
    for (Mask rest = a >> 1; rest != 0; rest >>= 1) swaps += std::popcount(rest & b);
    swaps += std::popcount(a & b);
    return (swaps % 2 == 0) ? 1 : -1;
  }

 private:
  explicit SpinElement(int n) : perm_(n) {
    if (n < 1 || n > 30) throw std::invalid_argument("spin element rank must lie in [1, 30]");
    std::iota(perm_.begin(), perm_.end(), 0);
  }

  static std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("spin element coefficient overflow");
    return r;
  }
  static std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r = 0;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("spin element coefficient overflow");
    return r;
  }

  std::vector<Term> terms_;  // sorted by blade, no zero coefficients
  std::vector<int> perm_;
  int length_ = 0;
};

inline SpinElement spin_product(const SpinElement& a, const SpinElement& b) { return a * b; }

/// Permutation read off the multivector alone: w^dagger e_k w is a multiple of e_{l}, l = image of k.
inline std::vector<int> acting_permutation(const SpinElement& w) {
  const int n = w.rank();
  std::vector<int> image(n, -1);
  const SpinElement dagger = w.reversed();
  for (int k = 0; k < n; ++k) {
    // e_k as a one-term element; build it as (e_k - e_j) + e_j is awkward, so multiply blades directly.
    std::vector<std::int64_t> acc(std::size_t{1} << n, 0);
    for (const auto& [ma, ca] : dagger.terms()) {
      const SpinElement::Mask left = ma ^ (SpinElement::Mask{1} << k);
      const std::int64_t left_c = SpinElement::blade_sign(ma, SpinElement::Mask{1} << k) * ca;
      for (const auto& [mb, cb] : w.terms()) {
        acc[left ^ mb] += SpinElement::blade_sign(left, mb) * left_c * cb;
      }
    }
    int found = -1;
    for (std::size_t m = 0; m < acc.size(); ++m) {
      if (acc[m] == 0) continue;
      if (std::popcount(m) != 1 || found != -1) return {};  // not a signed permutation action
      found = std::countr_zero(m);
    }
    if (found < 0) return {};
    image[k] = found;
  }
  return image;
}

/// Lehmer-code rank of a permutation of {0..n-1}.
inline std::uint64_t permutation_rank(std::span<const int> perm) {
  const int n = static_cast<int>(perm.size());
  std::uint64_t rank = 0;
  for (int i = 0; i < n; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < n; ++j) smaller += perm[j] < perm[i] ? 1 : 0;
    rank = rank * static_cast<std::uint64_t>(n - i) + smaller;
  }
  return rank;
}

/// Adjacent transpositions s_1..s_k (value s means (s s+1)) produced by
/// insertion-sorting sigma^{-1}; sigma = t_{s_1} o ... o t_{s_k}.
inline std::vector<int> insertion_sort_word(std::span<const int> sigma) {
  const int n = static_cast<int>(sigma.size());
  std::vector<int> inv(n);
  for (int r = 0; r < n; ++r) inv[sigma[r]] = r;
  std::vector<int> word;
  for (int i = 1; i < n; ++i) {
    for (int j = i; j > 0 && inv[j - 1] > inv[j]; --j) {
      std::swap(inv[j - 1], inv[j]);
      word.push_back(j - 1);
    }
  }
  return word;
}

/// rho(sigma): product of the adjacent generalized transpositions of the
/// insertion-sort word, taken in reverse so that its permutation is sigma.
inline SpinElement canonical_section(std::span<const int> sigma) {
  const int n = static_cast<int>(sigma.size());
  const std::vector<int> word = insertion_sort_word(sigma);
  SpinElement out = SpinElement::identity(n);
  for (auto it = word.rbegin(); it != word.rend(); ++it) out = out * SpinElement::transposition(n, *it, *it + 1);
  return out;
}

}  // namespace lgh
