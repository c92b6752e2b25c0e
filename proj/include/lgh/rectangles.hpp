#pragma once

// Oriented rectangles between generators.
//
// The twisted torus is covered p-to-1 by the straight pn x pn torus obtained
// by stacking p copies of the planar grid, copy k shifted right by kqn (this
// is exactly the lift used for the gradings).  Every rectangle on the twisted
// torus lifts to a rectangle of width and height in [1, pn) in the cover, so
// all wrap and twist cases reduce to cyclic interval tests there.

#include "lgh/gradings.hpp"
#include "lgh/grid.hpp"

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

namespace lgh {

/// Point of the vertical cover: column mod pn, unbounded row.  Projects to
/// (column - qn*floor(row/n) mod pn, row mod n).
struct CylinderPoint {
  int column = 0;
  int row = 0;

  CylinderPoint project(const GridParams& g) const {
    const auto level = floor_div(row, g.n);
    return {static_cast<int>(mod(column - static_cast<std::int64_t>(g.q) * g.n * level, g.columns())),
            static_cast<int>(mod(row, g.n))};
  }
  friend bool operator==(const CylinderPoint&, const CylinderPoint&) = default;
};

struct Rectangle {
  Generator from;
  Generator to;
  CylinderPoint lower_left;
  int width = 0;
  int height = 0;
  std::array<std::int16_t, kMaxGridSize> o_counts{};
  std::array<std::int16_t, kMaxGridSize> x_counts{};
  /// Embedded with no component of `from` or `to` in its interior.
  bool empty = false;
  /// Column circles of the `from` and `to` components on the bottom edge.
  int from_beta = 0;
  int to_beta = 0;
  /// Row r entry: p-coordinate of `from` minus that of `to`.
  std::array<std::int16_t, kMaxGridSize> p_displacement{};

  int o_total() const {
    int s = 0;
    for (int i = 0; i < from.size(); ++i) s += o_counts[i];
    return s;
  }
  int x_total() const {
    int s = 0;
    for (int i = 0; i < from.size(); ++i) s += x_counts[i];
    return s;
  }
  bool marking_free() const { return o_total() == 0 && x_total() == 0; }

  CylinderPoint upper_right() const { return {lower_left.column + width, lower_left.row + height}; }
};

/// Enumerates rectangles of one grid; lifted marking positions are computed once.
class RectangleEnumerator {
 public:
  explicit RectangleEnumerator(const GridDiagram& grid) : params_(grid.params()) {
    const int n = params_.n, cols = params_.columns();
    for (int r = 0; r < n; ++r) {
      for (int k = 0; k < params_.p; ++k) {
        const int row = r + n * k;
        o_cells_.push_back({r, static_cast<int>(mod(grid.os()[r] + static_cast<std::int64_t>(n) * params_.q * k, cols)), row});
        x_cells_.push_back({r, static_cast<int>(mod(grid.xs()[r] + static_cast<std::int64_t>(n) * params_.q * k, cols)), row});
      }
    }
  }

  /// Markings are ignored (all counts zero); for sign checks that only depend on (n, p, q).
  explicit RectangleEnumerator(const GridParams& params) : params_(params) { validate_params(params); }

  const GridParams& params() const { return params_; }

  /// Every oriented rectangle out of x, or only the empty ones.  Order: lower-left
  /// row, then upper-right row, then lift level.
  std::vector<Rectangle> from(const Generator& x, bool empty_only) const {
    std::vector<Rectangle> out;
    visit(x, empty_only, [&](const Rectangle& r) { out.push_back(r); });
    return out;
  }

  template <class Fn>
  void visit(const Generator& x, bool empty_only, Fn&& fn) const {
    const int n = params_.n, p = params_.p, cols = params_.columns();
    const std::int64_t twist = static_cast<std::int64_t>(n) * params_.q;
    // lifted generator points in the cover
    const int lifted = n * p;
    std::vector<int> lx(lifted), ly(lifted);
    for (int r = 0; r < n; ++r) {
      for (int k = 0; k < p; ++k) {
        lx[r * p + k] = static_cast<int>(mod(x[r] + twist * k, cols));
        ly[r * p + k] = r + n * k;
      }
    }
    for (int ra = 0; ra < n; ++ra) {
      const int ac = x[ra];
      for (int rb = 0; rb < n; ++rb) {
        if (rb == ra) continue;
        for (int k = 0; k < p; ++k) {
          const int bc = lx[rb * p + k];
          const int br = ly[rb * p + k];
          const int w = static_cast<int>(mod(bc - ac, cols));
          const int h = static_cast<int>(mod(br - ra, cols));
          bool empty = true;
          for (int t = 0; t < lifted && empty; ++t) {
            const auto dc = mod(lx[t] - ac, cols), dr = mod(ly[t] - ra, cols);
            if (dc > 0 && dc < w && dr > 0 && dr < h) empty = false;
          }
          const int moved_b = static_cast<int>(mod(ac - twist * (br / n), cols));
          // On the twisted torus a rectangle free of x can still overlap itself;
          // the overlap always puts a corner of y inside, so ask that y be absent too.
          for (int k = 0; k < p && empty; ++k) {
            for (const auto& [row, col] : {std::pair{ra, bc}, std::pair{rb, moved_b}}) {
              const auto dc = mod(col + twist * k - ac, cols), dr = mod(row + n * k - ra, cols);
              if (dc > 0 && dc < w && dr > 0 && dr < h) empty = false;
            }
          }
          if (empty_only && !empty) continue;
          Rectangle rect;
          rect.from = x;
          rect.to = x;
          rect.to.set(ra, bc);
          rect.to.set(rb, moved_b);
          rect.lower_left = {ac, ra};
          rect.width = w;
          rect.height = h;
          rect.empty = empty;
          rect.from_beta = ac % n;
          rect.to_beta = bc % n;
          for (const auto& cell : o_cells_) {
            if (mod(cell.column - ac, cols) < w && mod(cell.row - ra, cols) < h) ++rect.o_counts[cell.index];
          }
          for (const auto& cell : x_cells_) {
            if (mod(cell.column - ac, cols) < w && mod(cell.row - ra, cols) < h) ++rect.x_counts[cell.index];
          }
          for (int r = 0; r < n; ++r) {
            rect.p_displacement[r] = static_cast<std::int16_t>(x[r] / n - rect.to[r] / n);
          }
          fn(rect);
        }
      }
    }
  }

  /// Cell multiplicities of the rectangle projected to the n x pn fundamental
  /// domain, indexed row * pn + column.
  std::vector<int> domain(const Rectangle& rect) const {
    std::vector<int> cells(static_cast<std::size_t>(params_.n) * params_.columns(), 0);
    add_domain(rect, cells);
    return cells;
  }

  void add_domain(const Rectangle& rect, std::vector<int>& cells) const {
    const int cols = params_.columns();
    for (int dr = 0; dr < rect.height; ++dr) {
      for (int dc = 0; dc < rect.width; ++dc) {
        const CylinderPoint cell =
            CylinderPoint{static_cast<int>(mod(rect.lower_left.column + dc, cols)), rect.lower_left.row + dr}.project(
                params_);
        ++cells[static_cast<std::size_t>(cell.row) * cols + cell.column];
      }
    }
  }

  /// Number of lattice components of y strictly inside the rectangle (counted in the cover).
  int interior_count(const Rectangle& rect, const Generator& y) const {
    const int n = params_.n, cols = params_.columns();
    int count = 0;
    for (int r = 0; r < n; ++r) {
      for (int k = 0; k < params_.p; ++k) {
        const auto c = mod(y[r] + static_cast<std::int64_t>(n) * params_.q * k, cols);
        const int row = r + n * k;
        const auto dc = mod(c - rect.lower_left.column, cols), dr = mod(row - rect.lower_left.row, cols);
        if (dc > 0 && dc < rect.width && dr > 0 && dr < rect.height) ++count;
      }
    }
    return count;
  }

 private:
  struct Cell {
    int index;
    int column;
    int row;
  };
  GridParams params_;
  std::vector<Cell> o_cells_;
  std::vector<Cell> x_cells_;
};

inline std::vector<Rectangle> rectangles_from(const GridDiagram& grid, const Generator& x, bool empty_only) {
  return RectangleEnumerator(grid).from(x, empty_only);
}

/// Rect(x, y): oriented rectangles from x to y (0 or 2 of them).
inline std::vector<Rectangle> rect_between(const GridDiagram& grid, const Generator& x, const Generator& y) {
  std::vector<Rectangle> out;
  RectangleEnumerator(grid).visit(x, false, [&](const Rectangle& r) {
    if (r.to == y) out.push_back(r);
  });
  return out;
}

}  // namespace lgh
