#pragma once

// Generators of the grid complex and their (Maslov, Alexander, Spin^c)
// trigrading, computed from pair counts of point sets lifted to the
// pn x pn square.

#include "lgh/grid.hpp"
#include "lgh/rational.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <iterator>
#include <map>
#include <numeric>
#include <span>
#include <vector>

namespace lgh {

inline constexpr int kMaxGridSize = 12;

/// A point with both coordinates stored doubled, so the half-integer centres
/// of marked squares stay exact integers.
struct GridPoint {
  std::int64_t twice_x = 0;
  std::int64_t twice_y = 0;

  static GridPoint lattice(std::int64_t x, std::int64_t y) { return {2 * x, 2 * y}; }
  static GridPoint square_centre(std::int64_t column, std::int64_t row) { return {2 * column + 1, 2 * row + 1}; }
  friend bool operator==(const GridPoint&, const GridPoint&) = default;
  friend auto operator<=>(const GridPoint&, const GridPoint&) = default;
};

/// One intersection point per row and per column circle: the component on
/// row r sits at planar lattice point (columns[r], r).
class Generator {
 public:
  Generator() = default;
  explicit Generator(std::span<const int> columns) : size_(static_cast<std::uint8_t>(columns.size())) {
    std::copy(columns.begin(), columns.end(), col_.begin());
  }

  int size() const { return size_; }
  int operator[](int row) const { return col_[row]; }
  void set(int row, int column) { col_[row] = static_cast<std::int16_t>(column); }

  std::vector<int> columns() const { return {col_.begin(), col_.begin() + size_}; }
  /// sigma(r): index of the column circle through the component on row r.
  std::vector<int> permutation(int n) const {
    std::vector<int> out(size_);
    for (int r = 0; r < size_; ++r) out[r] = col_[r] % n;
    return out;
  }
  std::vector<int> p_coordinates(int n) const {
    std::vector<int> out(size_);
    for (int r = 0; r < size_; ++r) out[r] = col_[r] / n;
    return out;
  }
  /// Injective encoding for grids with pn^n < 2^64.
  std::uint64_t key(int columns) const {
    std::uint64_t k = 0;
    for (int r = size_ - 1; r >= 0; --r) k = k * static_cast<std::uint64_t>(columns) + col_[r];
    return k;
  }

  friend bool operator==(const Generator& a, const Generator& b) {
    return a.size_ == b.size_ && std::equal(a.col_.begin(), a.col_.begin() + a.size_, b.col_.begin());
  }
  friend bool operator<(const Generator& a, const Generator& b) {
    return std::lexicographical_compare(a.col_.begin(), a.col_.begin() + a.size_, b.col_.begin(),
                                        b.col_.begin() + b.size_);
  }

 private:
  std::array<std::int16_t, kMaxGridSize> col_{};
  std::uint8_t size_ = 0;
};

inline bool belongs_to(const Generator& x, const GridParams& g) {
  if (x.size() != g.n) return false;
  std::vector<bool> seen(g.n, false);
  for (int r = 0; r < g.n; ++r) {
    if (x[r] < 0 || x[r] >= g.columns() || seen[x[r] % g.n]) return false;
    seen[x[r] % g.n] = true;
  }
  return true;
}

/// Lifts n points of the n x pn rectangle to the pn x pn square:
/// (c, b) -> (c + nqk mod pn, b + nk), k = 0..p-1, ordered point-major.
inline std::vector<GridPoint> lift_cpq(std::span<const GridPoint> points, const GridParams& g) {
  const std::int64_t width2 = 2 * static_cast<std::int64_t>(g.columns());
  const std::int64_t height2 = 2 * static_cast<std::int64_t>(g.n);
  std::vector<GridPoint> out;
  out.reserve(points.size() * g.p);
  for (const GridPoint& pt : points) {
    if (pt.twice_x < 0 || pt.twice_x >= width2 || pt.twice_y < 0 || pt.twice_y >= height2) {
      throw GridError(GridErrorKind::OutOfRange, "point outside the fundamental n x pn rectangle");
    }
    for (int k = 0; k < g.p; ++k) {
      out.push_back({mod(pt.twice_x + 2LL * g.n * g.q * k, width2), pt.twice_y + 2LL * g.n * k});
    }
  }
  return out;
}

/// Number of pairs (a, b) in A x B with a strictly below-left of b.
inline std::int64_t pair_count(std::span<const GridPoint> a, std::span<const GridPoint> b) {
  std::int64_t count = 0;
  for (const GridPoint& u : a) {
    for (const GridPoint& v : b) {
      if (u.twice_x < v.twice_x && u.twice_y < v.twice_y) ++count;
    }
  }
  return count;
}

/// Correction term d(p, q, i) by the Euclidean recursion, base d(1,0,0) = 0:
///   d(p, q, i) = (pq - (2i + 1 - p - q)^2) / (4pq) - d(q, p mod q, i mod q).
/// The subtracted tail matters only once q > 1; it is what makes the Maslov
/// gradings of 1-dimensional grids reproduce {d(p, q, s)} exactly.
inline Rational d_invariant(std::int64_t p, std::int64_t q, std::int64_t i) {
  if (p < 1 || q < 0 || q >= p) throw GridError(GridErrorKind::OutOfRange, "d-invariant needs 0 <= q < p");
  if (gcd(p, q) != 1) throw GridError(GridErrorKind::NonCoprime, "d-invariant needs gcd(p, q) = 1");
  if (i < 0 || i >= p) throw GridError(GridErrorKind::OutOfRange, "InvalidSpinc: index must lie in [0, p)");
  Rational total = 0;
  int sign = 1;
  while (p != 1) {
    const std::int64_t t = 2 * i + 1 - p - q;
    total += sign * Rational(p * q - t * t, 4 * p * q);
    sign = -sign;
    const std::int64_t r = p % q;
    i = i % q;
    p = q;
    q = r;
  }
  return total;
}

/// d(p, q, i) for every i, computed once; read-only afterwards.
class CorrectionTerms {
 public:
  CorrectionTerms(int p, int q) : p_(p) {
    values_.reserve(p);
    for (int i = 0; i < p; ++i) values_.push_back(d_invariant(p, q, i));
  }
  const Rational& operator()(std::int64_t i) const { return values_[mod(i, p_)]; }

 private:
  int p_;
  std::vector<Rational> values_;
};

struct Trigrading {
  Rational maslov;
  Rational alexander;
  int spinc = 0;
  friend bool operator==(const Trigrading&, const Trigrading&) = default;
};

/// Streams the n! p^n generators: permutations in lexicographic order, then
/// p-coordinates as an odometer with the top row turning fastest.
class GeneratorRange {
 public:
  explicit GeneratorRange(const GridParams& g) : params_(g) {}

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = Generator;
    using difference_type = std::ptrdiff_t;
    using pointer = const Generator*;
    using reference = const Generator&;

    iterator() = default;
    explicit iterator(const GridParams& g) : n_(g.n), p_(g.p), perm_(g.n), digits_(g.n, 0), done_(false) {
      std::iota(perm_.begin(), perm_.end(), 0);
      refresh();
    }
    reference operator*() const { return current_; }
    pointer operator->() const { return &current_; }
    iterator& operator++() {
      int r = n_ - 1;
      while (r >= 0 && digits_[r] == p_ - 1) digits_[r--] = 0;
      if (r >= 0) {
        ++digits_[r];
      } else if (!std::next_permutation(perm_.begin(), perm_.end())) {
        done_ = true;
        return *this;
      }
      refresh();
      return *this;
    }
    void operator++(int) { ++*this; }
    friend bool operator==(const iterator& a, const iterator& b) { return a.done_ == b.done_; }

   private:
    void refresh() {
      std::array<int, kMaxGridSize> cols{};
      for (int r = 0; r < n_; ++r) cols[r] = perm_[r] + n_ * digits_[r];
      current_ = Generator(std::span<const int>(cols.data(), n_));
    }
    int n_ = 0, p_ = 0;
    std::vector<int> perm_, digits_;
    Generator current_;
    bool done_ = true;
  };

  iterator begin() const { return iterator(params_); }
  iterator end() const { return iterator(); }

  /// n! p^n
  std::uint64_t size() const {
    std::uint64_t total = 1;
    for (int i = 2; i <= params_.n; ++i) total *= i;
    for (int i = 0; i < params_.n; ++i) total *= params_.p;
    return total;
  }

 private:
  GridParams params_;
};

inline GeneratorRange enumerate_generators(const GridDiagram& grid) { return GeneratorRange(grid.params()); }

/// Precomputes the lifted markings and constant terms of one grid; grading
/// evaluation is then a few pair counts per generator.
class GradingEngine {
 public:
  explicit GradingEngine(const GridDiagram& grid)
      : grid_(grid), o_lift_(lift_markings(grid, grid.os())), x_lift_(lift_markings(grid, grid.xs())) {
    const int p = grid.p();
    const int q = grid.q();
    maslov_offset_ = d_invariant(p, q, mod(q - 1, p)) + 1;
    alexander_offset_ = Rational(1 - grid.n(), 2);
    o_o_ = pair_count(o_lift_, o_lift_);
    x_x_ = pair_count(x_lift_, x_lift_);
    o_p_coordinate_sum_ = 0;
    for (int c : grid.os()) o_p_coordinate_sum_ += c / grid.n();
  }

  const GridDiagram& grid() const { return grid_; }

  std::vector<GridPoint> lift(const Generator& x) const {
    std::vector<GridPoint> pts(grid_.n());
    for (int r = 0; r < grid_.n(); ++r) pts[r] = GridPoint::lattice(x[r], r);
    return lift_cpq(pts, grid_.params());
  }

  Rational maslov(const Generator& x) const { return maslov_from_lift(lift(x)); }
  Rational alexander(const Generator& x) const { return alexander_from_lift(lift(x)); }

  int spinc(const Generator& x) const {
    std::int64_t sum = grid_.q() - 1 - o_p_coordinate_sum_;
    for (int r = 0; r < grid_.n(); ++r) sum += x[r] / grid_.n();
    return static_cast<int>(mod(sum, grid_.p()));
  }

  Trigrading grade(const Generator& x) const {
    const auto lifted = lift(x);
    return Trigrading{maslov_from_lift(lifted), alexander_from_lift(lifted), spinc(x)};
  }

  /// p*(M - offset) and 2p*(A - offset) as integers; used for exactness checks.
  std::int64_t maslov_pair_sum(const Generator& x) const {
    const auto l = lift(x);
    return pair_count(l, l) - pair_count(l, o_lift_) - pair_count(o_lift_, l) + o_o_;
  }
  std::int64_t alexander_pair_sum(const Generator& x) const {
    const auto l = lift(x);
    return o_o_ - x_x_ + 2 * pair_count(x_lift_, l) - 2 * pair_count(o_lift_, l);
  }

 private:
  static std::vector<GridPoint> lift_markings(const GridDiagram& grid, const std::vector<int>& cols) {
    std::vector<GridPoint> pts(grid.n());
    for (int r = 0; r < grid.n(); ++r) pts[r] = GridPoint::square_centre(cols[r], r);
    return lift_cpq(pts, grid.params());
  }

  Rational maslov_from_lift(const std::vector<GridPoint>& l) const {
    const std::int64_t s = pair_count(l, l) - pair_count(l, o_lift_) - pair_count(o_lift_, l) + o_o_;
    return Rational(s, grid_.p()) + maslov_offset_;
  }
  Rational alexander_from_lift(const std::vector<GridPoint>& l) const {
    const std::int64_t s = o_o_ - x_x_ + 2 * pair_count(x_lift_, l) - 2 * pair_count(o_lift_, l);
    return Rational(s, 2 * grid_.p()) + alexander_offset_;
  }

  GridDiagram grid_;
  std::vector<GridPoint> o_lift_;
  std::vector<GridPoint> x_lift_;
  Rational maslov_offset_;
  Rational alexander_offset_;
  std::int64_t o_o_ = 0;
  std::int64_t x_x_ = 0;
  std::int64_t o_p_coordinate_sum_ = 0;
};

inline Rational maslov(const GridDiagram& grid, const Generator& x) { return GradingEngine(grid).maslov(x); }
inline Rational alexander(const GridDiagram& grid, const Generator& x) { return GradingEngine(grid).alexander(x); }
inline int spinc(const GridDiagram& grid, const Generator& x) { return GradingEngine(grid).spinc(x); }

}  // namespace lgh
