#pragma once

// Twisted grid diagrams for knots in L(p,q).
//
// Planar picture: rows 0..n-1 bottom-up, columns 0..pn-1 left to right.  The
// left and right edges are glued straight; the top edge is glued to the
// bottom with a shift, (s, n) ~ (s - qn mod pn, 0).  A marking in row r and
// column c fills the unit square with corners (c, r) and (c+1, r+1).  Column
// circles are the residue classes of planar columns mod n.

#include "lgh/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace lgh {

enum class GridErrorKind {
  NonCoprime,
  MarkingCollision,
  ColumnCircleViolation,
  OutOfRange,
  InterleavedCommutation,
  NoDestabilizationSite,
  Parse,
};

inline const char* to_string(GridErrorKind kind) {
  switch (kind) {
    case GridErrorKind::NonCoprime: return "NonCoprime";
    case GridErrorKind::MarkingCollision: return "MarkingCollision";
    case GridErrorKind::ColumnCircleViolation: return "ColumnCircleViolation";
    case GridErrorKind::OutOfRange: return "OutOfRange";
    case GridErrorKind::InterleavedCommutation: return "InterleavedCommutation";
    case GridErrorKind::NoDestabilizationSite: return "NoDestabilizationSite";
    case GridErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

class GridError : public std::invalid_argument {
 public:
  GridError(GridErrorKind kind, const std::string& what)
      : std::invalid_argument(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  GridErrorKind kind() const noexcept { return kind_; }

 private:
  GridErrorKind kind_;
};

struct GridParams {
  int n = 1;
  int p = 1;
  int q = 0;

  int columns() const { return p * n; }
  friend bool operator==(const GridParams&, const GridParams&) = default;
};

inline void validate_params(const GridParams& g) {
  if (g.n < 1 || g.p < 1) throw GridError(GridErrorKind::OutOfRange, "n and p must be positive");
  if (g.q < 0 || g.q >= g.p) throw GridError(GridErrorKind::OutOfRange, "q must satisfy 0 <= q < p");
  if (gcd(g.p, g.q) != 1) {
    throw GridError(GridErrorKind::NonCoprime,
                    "gcd(" + std::to_string(g.p) + "," + std::to_string(g.q) + ") != 1");
  }
}

class GridDiagram {
 public:
  static GridDiagram build(GridParams params, std::vector<int> xs, std::vector<int> os) {
    validate_params(params);
    const int n = params.n;
    const int cols = params.columns();
    if (static_cast<int>(xs.size()) != n || static_cast<int>(os.size()) != n) {
      throw GridError(GridErrorKind::OutOfRange, "expected " + std::to_string(n) + " X and O entries");
    }
    for (int r = 0; r < n; ++r) {
      if (xs[r] < 0 || xs[r] >= cols || os[r] < 0 || os[r] >= cols) {
        throw GridError(GridErrorKind::OutOfRange,
                        "marking in row " + std::to_string(r) + " outside [0," + std::to_string(cols) + ")");
      }
      if (xs[r] == os[r]) {
        throw GridError(GridErrorKind::MarkingCollision, "row " + std::to_string(r) + " has X and O in one square");
      }
    }
    auto check_circles = [&](const std::vector<int>& marks, const char* name) {
      std::vector<int> seen(n, 0);
      for (int c : marks) ++seen[c % n];
      for (int j = 0; j < n; ++j) {
        if (seen[j] != 1) {
          throw GridError(GridErrorKind::ColumnCircleViolation,
                          "column circle " + std::to_string(j) + " carries " + std::to_string(seen[j]) + " " + name +
                              " markings");
        }
      }
    };
    check_circles(xs, "X");
    check_circles(os, "O");
    return GridDiagram(params, std::move(xs), std::move(os));
  }

  const GridParams& params() const { return params_; }
  int n() const { return params_.n; }
  int p() const { return params_.p; }
  int q() const { return params_.q; }
  int columns() const { return params_.columns(); }
  const std::vector<int>& xs() const { return xs_; }
  const std::vector<int>& os() const { return os_; }

  friend bool operator==(const GridDiagram&, const GridDiagram&) = default;

 private:
  GridDiagram(GridParams params, std::vector<int> xs, std::vector<int> os)
      : params_(params), xs_(std::move(xs)), os_(std::move(os)) {}

  GridParams params_;
  std::vector<int> xs_;
  std::vector<int> os_;
};

inline GridDiagram build_grid(int n, int p, int q, std::vector<int> xs, std::vector<int> os) {
  return GridDiagram::build(GridParams{n, p, q}, std::move(xs), std::move(os));
}

/// Position of the square (column, row) along its column circle, walking
/// upward: the circle with residue j visits planar column j - k*q*n (mod pn)
/// in its k-th pass, so position = k*n + row.
inline int circle_position(const GridParams& g, int column, int row) {
  const int a = column / g.n;
  const int k = static_cast<int>(mod(-static_cast<std::int64_t>(a) * mod_inverse(g.q, g.p), g.p));
  return k * g.n + row;
}

/// Homology class in Z_p: for each column circle count how often the upward
/// arc from its O to its X crosses the top/bottom edge.
inline int homology_class(const GridDiagram& grid) {
  const GridParams& g = grid.params();
  const int n = g.n;
  const int length = g.columns();
  std::vector<int> o_pos(n), x_pos(n);
  for (int r = 0; r < n; ++r) {
    o_pos[grid.os()[r] % n] = circle_position(g, grid.os()[r], r);
    x_pos[grid.xs()[r] % n] = circle_position(g, grid.xs()[r], r);
  }
  std::int64_t crossings = 0;
  for (int j = 0; j < n; ++j) {
    const int distance = static_cast<int>(mod(x_pos[j] - o_pos[j], length));
    crossings += (o_pos[j] % n + distance) / n;
  }
  return static_cast<int>(mod(crossings, g.p));
}

/// Number of link components: follow row r's X to its column circle, then
/// that circle's O to the next row.
inline int component_count(const GridDiagram& grid) {
  const int n = grid.n();
  std::vector<int> o_row(n);
  for (int r = 0; r < n; ++r) o_row[grid.os()[r] % n] = r;
  std::vector<bool> seen(n, false);
  int components = 0;
  for (int start = 0; start < n; ++start) {
    if (seen[start]) continue;
    ++components;
    for (int r = start; !seen[r]; r = o_row[grid.xs()[r] % n]) seen[r] = true;
  }
  return components;
}

inline bool is_knot(const GridDiagram& grid) { return component_count(grid) == 1; }

// ---------------------------------------------------------------- moves

struct Translation {
  int dx = 0;
  int dy = 0;
};

enum class Axis { Row, Column };

/// Exchanges row `index` with row `index+1`, or column circle `index` with
/// `index+1`; 0 <= index <= n-2.
struct Commutation {
  Axis axis = Axis::Row;
  int index = 0;
};

enum class MarkingKind { X, O };
enum class Corner { SW, SE, NW, NE };

/// Replaces the `kind` marking of `row` by a 2x2 block: the opposite marking
/// kind goes to the corner diagonal to `empty_corner`, two `kind` markings
/// to the remaining corners.  4 corners x 2 kinds give the 8 stabilizations.
struct Stabilization {
  MarkingKind kind = MarkingKind::X;
  Corner empty_corner = Corner::SW;
  int row = 0;
};

/// Collapses the 2x2 block with lower-left square (column, row); the block
/// spans rows row, row+1 (row+1 < n) and columns column, column+1 (mod pn).
struct Destabilization {
  int row = 0;
  int column = 0;
};

using GridMove = std::variant<Translation, Commutation, Stabilization, Destabilization>;

namespace detail {

inline GridDiagram shift_up_once(const GridDiagram& g) {
  const int n = g.n();
  const int cols = g.columns();
  const int twist = g.q() * n;
  std::vector<int> xs(n), os(n);
  for (int r = 0; r + 1 < n; ++r) {
    xs[r + 1] = g.xs()[r];
    os[r + 1] = g.os()[r];
  }
  xs[0] = static_cast<int>(mod(g.xs()[n - 1] - twist, cols));
  os[0] = static_cast<int>(mod(g.os()[n - 1] - twist, cols));
  return GridDiagram::build(g.params(), std::move(xs), std::move(os));
}

inline GridDiagram translate(const GridDiagram& g, int dx, int dy) {
  const int cols = g.columns();
  const int period = g.n() * g.p();  // pn unit shifts upward compose to the identity
  GridDiagram out = g;
  for (int s = static_cast<int>(mod(dy, period)); s > 0; --s) out = shift_up_once(out);
  if (mod(dx, cols) == 0) return out;
  std::vector<int> xs = out.xs(), os = out.os();
  for (int& c : xs) c = static_cast<int>(mod(c + dx, cols));
  for (int& c : os) c = static_cast<int>(mod(c + dx, cols));
  return GridDiagram::build(out.params(), std::move(xs), std::move(os));
}

/// True when b, c avoid {a, d} and lie in one arc of the circle Z_len minus {a, d}.
inline bool same_arc(int len, int a, int d, int b, int c) {
  if (b == a || b == d || c == a || c == d) return false;
  const auto inside = [&](int t) { return mod(t - a, len) < mod(d - a, len); };
  return inside(b) == inside(c);
}

inline GridDiagram commute(const GridDiagram& g, const Commutation& m) {
  const int n = g.n();
  if (m.index < 0 || m.index > n - 2) {
    throw GridError(GridErrorKind::OutOfRange, "commutation index must lie in [0, n-2]");
  }
  std::vector<int> xs = g.xs(), os = g.os();
  if (m.axis == Axis::Row) {
    const int r = m.index;
    if (!same_arc(g.columns(), xs[r], os[r], xs[r + 1], os[r + 1])) {
      throw GridError(GridErrorKind::InterleavedCommutation, "rows " + std::to_string(r) + " and " +
                                                                 std::to_string(r + 1) + " interleave");
    }
    std::swap(xs[r], xs[r + 1]);
    std::swap(os[r], os[r + 1]);
    return GridDiagram::build(g.params(), std::move(xs), std::move(os));
  }
  const int j = m.index;
  int pos[2][2] = {};  // [circle offset][0 = X, 1 = O]
  for (int r = 0; r < n; ++r) {
    for (int kind = 0; kind < 2; ++kind) {
      const int c = kind == 0 ? xs[r] : os[r];
      const int residue = c % n;
      if (residue == j || residue == j + 1) pos[residue - j][kind] = circle_position(g.params(), c, r);
    }
  }
  if (!same_arc(g.columns(), pos[0][0], pos[0][1], pos[1][0], pos[1][1])) {
    throw GridError(GridErrorKind::InterleavedCommutation, "column circles " + std::to_string(j) + " and " +
                                                               std::to_string(j + 1) + " interleave");
  }
  for (auto* marks : {&xs, &os}) {
    for (int& c : *marks) {
      if (c % n == j) {
        c += 1;
      } else if (c % n == j + 1) {
        c -= 1;
      }
    }
  }
  return GridDiagram::build(g.params(), std::move(xs), std::move(os));
}

inline bool is_south(Corner c) { return c == Corner::SW || c == Corner::SE; }
inline bool is_west(Corner c) { return c == Corner::SW || c == Corner::NW; }

inline GridDiagram stabilize(const GridDiagram& g, const Stabilization& m) {
  const int n = g.n();
  if (m.row < 0 || m.row >= n) throw GridError(GridErrorKind::OutOfRange, "stabilization row out of range");
  const int old_col = m.kind == MarkingKind::X ? g.xs()[m.row] : g.os()[m.row];
  const int residue = old_col % n;
  // New column circle is inserted before residue `insert_at`; new row at index `new_row`.
  const int insert_at = is_west(m.empty_corner) ? residue + 1 : residue;
  const int new_row = is_south(m.empty_corner) ? m.row + 1 : m.row;
  const auto map_col = [&](int c) {
    const int a = c / n, b = c % n;
    return a * (n + 1) + b + (b >= insert_at ? 1 : 0);
  };
  const auto map_row = [&](int r) { return r >= new_row ? r + 1 : r; };

  const int m1 = n + 1;
  std::vector<int> xs(m1, -1), os(m1, -1);
  for (int r = 0; r < n; ++r) {
    xs[map_row(r)] = g.xs()[r];
    os[map_row(r)] = g.os()[r];
  }
  for (int r = 0; r < m1; ++r) {
    if (r == new_row) continue;
    xs[r] = map_col(xs[r]);
    os[r] = map_col(os[r]);
  }
  const int old_row_new = map_row(m.row);
  const int old_col_new = map_col(old_col);
  const int chunk = old_col / n;
  const int new_col = chunk * m1 + insert_at;
  // The block: (old_col_new | new_col) x (old_row_new | new_row); empty corner at (old_col_new, old_row_new).
  std::vector<int>& same = m.kind == MarkingKind::X ? xs : os;
  std::vector<int>& other = m.kind == MarkingKind::X ? os : xs;
  other[new_row] = new_col;         // opposite corner
  same[new_row] = old_col_new;      // same column as the empty corner
  same[old_row_new] = new_col;      // same row as the empty corner
  return GridDiagram::build(GridParams{m1, g.p(), g.q()}, std::move(xs), std::move(os));
}

inline GridDiagram destabilize(const GridDiagram& g, const Destabilization& m) {
  const int n = g.n();
  const int cols = g.columns();
  if (n < 2) throw GridError(GridErrorKind::NoDestabilizationSite, "a 1-dimensional grid cannot be destabilized");
  if (m.row < 0 || m.row + 1 >= n || m.column < 0 || m.column >= cols) {
    throw GridError(GridErrorKind::OutOfRange, "destabilization block out of range");
  }
  const int rows[2] = {m.row, m.row + 1};
  const int colv[2] = {m.column, static_cast<int>(mod(m.column + 1, cols))};
  // mark[dr][dc]: 0 empty, 1 X, 2 O
  int mark[2][2] = {};
  for (int dr = 0; dr < 2; ++dr) {
    for (int dc = 0; dc < 2; ++dc) {
      if (g.xs()[rows[dr]] == colv[dc]) mark[dr][dc] = 1;
      if (g.os()[rows[dr]] == colv[dc]) mark[dr][dc] = 2;
    }
  }
  for (int er = 0; er < 2; ++er) {
    for (int ec = 0; ec < 2; ++ec) {
      const int diag_kind = mark[1 - er][ec];
      if (mark[er][ec] != 0 || diag_kind == 0 || mark[er][1 - ec] != diag_kind ||
          mark[1 - er][1 - ec] == 0 || mark[1 - er][1 - ec] == diag_kind) {
        continue;
      }
      const int drop_row = rows[1 - er];
      const int drop_residue = colv[1 - ec] % n;
      const int keep_col = colv[ec];
      const auto map_col = [&](int c) {
        const int a = c / n, b = c % n;
        return a * (n - 1) + b - (b > drop_residue ? 1 : 0);
      };
      std::vector<int> xs, os;
      for (int r = 0; r < n; ++r) {
        if (r == drop_row) continue;
        int x = g.xs()[r], o = g.os()[r];
        if (r == rows[er]) {
          // The row keeping the empty corner: its block marking collapses onto the corner.
          if (diag_kind == 1) x = keep_col; else o = keep_col;
        }
        xs.push_back(map_col(x));
        os.push_back(map_col(o));
      }
      return GridDiagram::build(GridParams{n - 1, g.p(), g.q()}, std::move(xs), std::move(os));
    }
  }
  throw GridError(GridErrorKind::NoDestabilizationSite, "no destabilization pattern at row " + std::to_string(m.row) +
                                                            ", column " + std::to_string(m.column));
}

}  // namespace detail

inline GridDiagram apply_move(const GridDiagram& grid, const GridMove& move) {
  return std::visit(
      [&](const auto& m) -> GridDiagram {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Translation>) {
          return detail::translate(grid, m.dx, m.dy);
        } else if constexpr (std::is_same_v<M, Commutation>) {
          return detail::commute(grid, m);
        } else if constexpr (std::is_same_v<M, Stabilization>) {
          return detail::stabilize(grid, m);
        } else {
          return detail::destabilize(grid, m);
        }
      },
      move);
}

/// Site of the destabilization that undoes `stab`; `grid` is the grid before stabilizing.
inline Destabilization inverse_site(const GridDiagram& grid, const Stabilization& stab) {
  const int n = grid.n();
  const int old_col = stab.kind == MarkingKind::X ? grid.xs()[stab.row] : grid.os()[stab.row];
  const int a = old_col / n, b = old_col % n;
  return Destabilization{stab.row, a * (n + 1) + b};
}

/// Lexicographically smallest (xs, os) over all pn x n translations.
inline GridDiagram canonical_form(const GridDiagram& grid) {
  GridDiagram best = grid;
  GridDiagram shifted = grid;
  for (int dy = 0; dy < grid.n(); ++dy) {
    for (int dx = 0; dx < grid.columns(); ++dx) {
      GridDiagram t = detail::translate(shifted, dx, 0);
      if (std::tie(t.xs(), t.os()) < std::tie(best.xs(), best.os())) best = std::move(t);
    }
    shifted = detail::shift_up_once(shifted);
  }
  return best;
}

/// Stable textual key, e.g. "2,3,1;0,1;3,4".
inline std::string grid_key(const GridDiagram& g) {
  std::ostringstream out;
  out << g.n() << ',' << g.p() << ',' << g.q() << ';';
  for (int r = 0; r < g.n(); ++r) out << (r ? "," : "") << g.xs()[r];
  out << ';';
  for (int r = 0; r < g.n(); ++r) out << (r ? "," : "") << g.os()[r];
  return out.str();
}

inline std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::string cleaned;
  for (char ch : text) cleaned += (ch == '[' || ch == ']') ? ' ' : ch;
  std::stringstream in(cleaned);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw GridError(GridErrorKind::Parse, "not an integer: '" + item + "'");
    }
  }
  return out;
}

/// Parses a key produced by grid_key.
inline GridDiagram parse_grid_key(const std::string& key) {
  const auto a = key.find(';');
  const auto b = a == std::string::npos ? a : key.find(';', a + 1);
  if (b == std::string::npos) throw GridError(GridErrorKind::Parse, "malformed grid key '" + key + "'");
  const auto params = parse_int_list(key.substr(0, a));
  if (params.size() != 3) throw GridError(GridErrorKind::Parse, "grid key needs n,p,q");
  return build_grid(params[0], params[1], params[2], parse_int_list(key.substr(a + 1, b - a - 1)),
                    parse_int_list(key.substr(b + 1)));
}

/// One line per row, top row first; '|' separates the p boxes.
inline std::string render_ascii(const GridDiagram& g) {
  std::ostringstream out;
  for (int r = g.n() - 1; r >= 0; --r) {
    for (int c = 0; c < g.columns(); ++c) {
      if (c > 0 && c % g.n() == 0) out << '|';
      out << (g.xs()[r] == c ? 'X' : g.os()[r] == c ? 'O' : '.');
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace lgh
