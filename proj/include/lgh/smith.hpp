#pragma once

// Rank and invariant factors of integer matrices.
//
// Boundary matrices of grid complexes are sparse with +-1 entries, so most of
// the work is unit-pivot elimination (Markowitz choice of the pivot with the
// least fill).  Whatever survives has no unit entry and goes through a dense
// Smith normal form over arbitrary-precision integers.

#include "lgh/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <vector>

namespace lgh {

class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows) {}

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }

  void add(std::size_t r, std::size_t c, const BigInt& v) {
    if (v == 0) return;
    auto& row = rows_.at(r);
    auto [it, inserted] = row.try_emplace(c, v);
    if (!inserted) {
      it->second += v;
      if (it->second == 0) row.erase(it);
    }
  }
  BigInt at(std::size_t r, std::size_t c) const {
    const auto it = rows_.at(r).find(c);
    return it == rows_.at(r).end() ? BigInt(0) : it->second;
  }
  const std::map<std::size_t, BigInt>& row(std::size_t r) const { return rows_.at(r); }

  std::size_t nonzeros() const {
    std::size_t s = 0;
    for (const auto& r : rows_) s += r.size();
    return s;
  }
  bool is_zero() const { return nonzeros() == 0; }

  /// this * other
  SparseMatrix multiply(const SparseMatrix& other) const {
    SparseMatrix out(rows(), other.cols());
    for (std::size_t r = 0; r < rows(); ++r) {
      for (const auto& [k, v] : rows_[r]) {
        for (const auto& [c, w] : other.row(k)) out.add(r, c, v * w);
      }
    }
    return out;
  }

  SparseMatrix reduced_mod2() const {
    SparseMatrix out(rows(), cols());
    for (std::size_t r = 0; r < rows(); ++r) {
      for (const auto& [c, v] : rows_[r]) {
        if (v % 2 != 0) out.add(r, c, 1);
      }
    }
    return out;
  }

 private:
  std::size_t cols_ = 0;
  std::vector<std::map<std::size_t, BigInt>> rows_;
};

struct SmithResult {
  std::size_t rank = 0;
  /// Invariant factors greater than 1, each dividing the next.
  std::vector<BigInt> torsion;
};

namespace detail {

inline BigInt abs_big(const BigInt& v) { return v < 0 ? BigInt(-v) : v; }

/// Diagonal of a Smith form of a dense matrix without unit entries.
inline std::vector<BigInt> dense_smith_diagonal(std::vector<std::vector<BigInt>> a) {
  const std::size_t m = a.size();
  const std::size_t n = m == 0 ? 0 : a[0].size();
  std::vector<BigInt> diag;
  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    for (;;) {
      // smallest nonzero entry of the trailing block becomes the pivot
      std::size_t pi = m, pj = n;
      for (std::size_t i = t; i < m; ++i) {
        for (std::size_t j = t; j < n; ++j) {
          if (a[i][j] != 0 && (pi == m || abs_big(a[i][j]) < abs_big(a[pi][pj]))) {
            pi = i;
            pj = j;
          }
        }
      }
      if (pi == m) return diag;
      std::swap(a[t], a[pi]);
      for (auto& row : a) std::swap(row[t], row[pj]);
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (a[i][t] == 0) continue;
        const BigInt f = a[i][t] / a[t][t];
        for (std::size_t j = t; j < n; ++j) a[i][j] -= f * a[t][j];
        clean = clean && a[i][t] == 0;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (a[t][j] == 0) continue;
        const BigInt f = a[t][j] / a[t][t];
        for (std::size_t i = t; i < m; ++i) a[i][j] -= f * a[i][t];
        clean = clean && a[t][j] == 0;
      }
      if (!clean) continue;
      // pivot must divide the rest of the block
      std::size_t bad = m;
      for (std::size_t i = t + 1; i < m && bad == m; ++i) {
        for (std::size_t j = t + 1; j < n; ++j) {
          if (a[i][j] % a[t][t] != 0) {
            bad = i;
            break;
          }
        }
      }
      if (bad == m) break;
      for (std::size_t j = t; j < n; ++j) a[t][j] += a[bad][j];
    }
    diag.push_back(abs_big(a[t][t]));
  }
  return diag;
}

}  // namespace detail

/// Rank and torsion invariant factors of an integer matrix.
inline SmithResult smith_form(const SparseMatrix& input) {
  const std::size_t m = input.rows(), n = input.cols();
  std::vector<std::map<std::size_t, BigInt>> rows(m);
  std::vector<std::set<std::size_t>> col_rows(n);
  for (std::size_t r = 0; r < m; ++r) {
    rows[r] = input.row(r);
    for (const auto& [c, v] : rows[r]) col_rows[c].insert(r);
  }
  SmithResult result;
  std::vector<bool> row_alive(m, true);
  for (;;) {
    std::size_t best_r = m, best_c = n;
    std::size_t best_cost = std::numeric_limits<std::size_t>::max();
    for (std::size_t r = 0; r < m; ++r) {
      if (!row_alive[r]) continue;
      for (const auto& [c, v] : rows[r]) {
        if (v != 1 && v != -1) continue;
        const std::size_t cost = (rows[r].size() - 1) * (col_rows[c].size() - 1);
        if (cost < best_cost) {
          best_cost = cost;
          best_r = r;
          best_c = c;
        }
      }
      if (best_cost == 0) break;
    }
    if (best_r == m) break;
    const BigInt pivot = rows[best_r].at(best_c);  // +-1, its own inverse
    const std::vector<std::size_t> others(col_rows[best_c].begin(), col_rows[best_c].end());
    for (std::size_t r2 : others) {
      if (r2 == best_r) continue;
      const BigInt factor = rows[r2].at(best_c) * pivot;
      for (const auto& [c, v] : rows[best_r]) {
        auto [it, inserted] = rows[r2].try_emplace(c, 0);
        it->second -= factor * v;
        if (it->second == 0) {
          rows[r2].erase(it);
          col_rows[c].erase(r2);
        } else if (inserted) {
          col_rows[c].insert(r2);
        }
      }
    }
    for (const auto& [c, v] : rows[best_r]) col_rows[c].erase(best_r);
    rows[best_r].clear();
    row_alive[best_r] = false;
    ++result.rank;
  }

  std::vector<std::size_t> live_rows, live_cols;
  for (std::size_t r = 0; r < m; ++r) {
    if (row_alive[r] && !rows[r].empty()) live_rows.push_back(r);
  }
  for (std::size_t c = 0; c < n; ++c) {
    if (!col_rows[c].empty()) live_cols.push_back(c);
  }
  if (!live_rows.empty()) {
    std::vector<std::vector<BigInt>> dense(live_rows.size(), std::vector<BigInt>(live_cols.size(), 0));
    for (std::size_t i = 0; i < live_rows.size(); ++i) {
      for (const auto& [c, v] : rows[live_rows[i]]) {
        const auto j = std::lower_bound(live_cols.begin(), live_cols.end(), c) - live_cols.begin();
        dense[i][j] = v;
      }
    }
    std::vector<BigInt> diag = detail::dense_smith_diagonal(std::move(dense));
    // normalise to a divisibility chain
    for (std::size_t i = 0; i < diag.size(); ++i) {
      for (std::size_t j = i + 1; j < diag.size(); ++j) {
        const BigInt g = boost::multiprecision::gcd(diag[i], diag[j]);
        const BigInt l = diag[i] / g * diag[j];
        diag[i] = g;
        diag[j] = l;
      }
    }
    for (const BigInt& d : diag) {
      ++result.rank;
      if (d > 1) result.torsion.push_back(d);
    }
  }
  return result;
}

/// Rank over F_2.
inline std::size_t rank_mod2(const SparseMatrix& input) {
  const std::size_t m = input.rows(), n = input.cols();
  const std::size_t words = (n + 63) / 64;
  std::vector<std::vector<std::uint64_t>> bits(m, std::vector<std::uint64_t>(words, 0));
  for (std::size_t r = 0; r < m; ++r) {
    for (const auto& [c, v] : input.row(r)) {
      if (v % 2 != 0) bits[r][c / 64] |= std::uint64_t{1} << (c % 64);
    }
  }
  std::size_t rank = 0;
  for (std::size_t c = 0; c < n && rank < m; ++c) {
    const std::uint64_t mask = std::uint64_t{1} << (c % 64);
    std::size_t pivot = rank;
    while (pivot < m && !(bits[pivot][c / 64] & mask)) ++pivot;
    if (pivot == m) continue;
    std::swap(bits[rank], bits[pivot]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r != rank && (bits[r][c / 64] & mask)) {
        for (std::size_t w = 0; w < words; ++w) bits[r][w] ^= bits[rank][w];
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace lgh
