#pragma once

// Sign assignments on rectangles induced by a section of the Spin extension,
// gauge transformations, and an exhaustive check of the three sign axioms.

#include "lgh/gradings.hpp"
#include "lgh/rectangles.hpp"
#include "lgh/spin.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace lgh {

/// The generalized transposition of a rectangle: beta indices of the `from`
/// and `to` components on its bottom edge, in that order.
inline SpinElement phi(const Rectangle& rect) {
  return SpinElement::transposition(rect.from.size(), rect.from_beta, rect.to_beta);
}

/// rho(sigma) for every sigma of S_n, built once (eagerly up to n = 7).
class Section {
 public:
  explicit Section(int n) : n_(n) {
    if (n < 1 || n > kMaxGridSize) throw std::invalid_argument("section rank out of range");
    if (n <= kEagerLimit) {
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      do {
        table_.push_back(canonical_section(perm));
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  }

  int rank() const { return n_; }

  SpinElement operator()(std::span<const int> sigma) const {
    if (!table_.empty()) return table_[permutation_rank(sigma)];
    return canonical_section(sigma);
  }

  static constexpr int kEagerLimit = 7;

 private:
  int n_;
  std::vector<SpinElement> table_;  // lexicographic permutation order == Lehmer rank order
};

namespace detail {

inline void require_rectangle(const Rectangle& rect, int n) {
  const auto sx = rect.from.permutation(n);
  auto expected = sx;
  for (int& b : expected) {
    if (b == rect.from_beta) {
      b = rect.to_beta;
    } else if (b == rect.to_beta) {
      b = rect.from_beta;
    }
  }
  if (expected != rect.to.permutation(n)) {
    throw std::invalid_argument("NotARectangle: endpoints do not differ by the bottom-edge transposition");
  }
}

}  // namespace detail

/// S_rho(r): +1 when rho(x) phi(r) is a positive multiple of rho(y), -1 when
/// it is a negative multiple (i.e. z rho(y)).
inline int rect_sign(const Section& section, const Rectangle& rect) {
  const int n = section.rank();
  detail::require_rectangle(rect, n);
  const SpinElement lhs = section(rect.from.permutation(n)) * phi(rect);
  const SpinElement rhs = section(rect.to.permutation(n));
  const auto& a = lhs.terms();
  const auto& b = rhs.terms();
  if (a.size() != b.size() || a.empty()) throw std::logic_error("section elements are not proportional");
  // lhs = (num/den) rhs, with num/den read off the first blade
  const std::int64_t num = a.front().second, den = b.front().second;
  for (std::size_t t = 0; t < a.size(); ++t) {
    if (a[t].first != b[t].first || static_cast<__int128>(a[t].second) * den != static_cast<__int128>(b[t].second) * num) {
      throw std::logic_error("section elements are not proportional");
    }
  }
  return ((num > 0) == (den > 0)) ? 1 : -1;
}

/// Same sign through P = rho(x) phi(r) rho(y)^dagger, which lies over the
/// identity and must be a pure scalar +-2^(k/2).  rho(y) rho(y)^dagger =
/// (-2)^len(rho(y)), hence the parity correction.
inline int rect_sign_by_product(const Section& section, const Rectangle& rect) {
  const int n = section.rank();
  detail::require_rectangle(rect, n);
  const SpinElement ry = section(rect.to.permutation(n));
  const SpinElement product = section(rect.from.permutation(n)) * phi(rect) * ry.reversed();
  if (!product.is_scalar()) throw std::logic_error("rho(x) phi(r) rho(y)^dagger is not a scalar");
  const std::int64_t lambda = product.terms().front().second;
  const std::int64_t magnitude = lambda < 0 ? -lambda : lambda;
  const int k = product.word_length();
  if (k % 2 != 0 || magnitude != (std::int64_t{1} << (k / 2))) {
    throw std::logic_error("identity-lying element is not +-2^(k/2)");
  }
  const int sign = lambda > 0 ? 1 : -1;
  return (ry.word_length() % 2 == 0) ? sign : -sign;
}

/// A +-1 valued function on rectangles.
class SignAssignment {
 public:
  using Fn = std::function<int(const Rectangle&)>;

  SignAssignment() = default;
  explicit SignAssignment(Fn fn) : fn_(std::move(fn)) {}

  int operator()(const Rectangle& rect) const { return fn_(rect); }
  explicit operator bool() const { return static_cast<bool>(fn_); }

 private:
  Fn fn_;
};

/// S_rho for the insertion-sort section.  Signs only depend on (sigma_x, i, j),
/// so they are tabulated once for n <= 7 and read-only afterwards.
inline SignAssignment section_sign(int n) {
  auto section = std::make_shared<const Section>(n);
  if (n > Section::kEagerLimit) {
    return SignAssignment([section](const Rectangle& r) { return rect_sign(*section, r); });
  }
  auto table = std::make_shared<std::vector<std::int8_t>>();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  table->reserve(section->rank() == 1 ? 1 : 5040 * 49);
  do {
    const SpinElement base = (*section)(perm);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) {
          table->push_back(0);
          continue;
        }
        auto target = perm;
        for (int& b : target) b = (b == i) ? j : (b == j) ? i : b;
        const SpinElement lhs = base * SpinElement::transposition(n, i, j);
        const SpinElement rhs = (*section)(target);
        const std::int64_t num = lhs.terms().front().second, den = rhs.terms().front().second;
        table->push_back(((num > 0) == (den > 0)) ? 1 : -1);
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return SignAssignment([table, n](const Rectangle& r) {
    const auto sigma = r.from.permutation(n);
    return static_cast<int>((*table)[(permutation_rank(sigma) * n + r.from_beta) * n + r.to_beta]);
  });
}

/// v : generators -> {+1, -1}
using GaugeMap = std::function<int(const Generator&)>;

/// S^v(r) = v(x) S(r) v(y)
inline SignAssignment gauge_transform(SignAssignment sign, GaugeMap v) {
  return SignAssignment([sign = std::move(sign), v = std::move(v)](const Rectangle& r) {
    return v(r.from) * sign(r) * v(r.to);
  });
}

/// Deterministic pseudo-random gauge keyed by generator.
inline GaugeMap random_gauge(std::uint64_t seed, int columns) {
  return [seed, columns](const Generator& x) {
    std::uint64_t h = x.key(columns) ^ (seed * 0x9E3779B97F4A7C15ULL);
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    h *= 0xc4ceb9fe1a85ec53ULL;
    h ^= h >> 33;
    return (h & 1) ? -1 : 1;
  };
}

struct AxiomReport {
  bool passed = true;
  std::uint64_t rectangles = 0;
  std::uint64_t alpha_strips = 0;
  std::uint64_t beta_strips = 0;
  std::uint64_t paired_polygons = 0;  // domains x != z with two decompositions
  std::uint64_t single_polygons = 0;  // domains x != z with one decomposition (unconstrained)
  std::vector<std::string> counterexamples;
};

inline std::string describe(const Generator& g) {
  std::ostringstream out;
  out << '[';
  for (int r = 0; r < g.size(); ++r) out << (r ? "," : "") << g[r];
  out << ']';
  return out.str();
}

/// Exhaustively checks the sign axioms over all of Rect(G):
///  (1) r1*r2 = r3*r4 (x != z)      =>  S(r1)S(r2) = -S(r3)S(r4)
///  (2) r1*r2 an alpha-strip (x = z) =>  S(r1)S(r2) = +1
///  (3) r1*r2 a beta-strip  (x = z)  =>  S(r1)S(r2) = -1
/// Throws std::length_error ("TooLarge") when n! p^n exceeds `cap`.
inline AxiomReport verify_sign_axioms(const GridDiagram& grid, const SignAssignment& sign,
                                      std::uint64_t cap = 20000) {
  const GridParams& g = grid.params();
  const GeneratorRange gens(g);
  if (gens.size() > cap) throw std::length_error("TooLarge: n! p^n exceeds the axiom-check cap");
  const RectangleEnumerator rects(g);
  const int cols = g.columns();

  struct Arrow {
    Generator to;
    std::vector<int> domain;
    int sign;
  };
  std::unordered_map<std::uint64_t, std::vector<Arrow>> out_of;
  std::vector<Generator> all;
  AxiomReport report;
  for (const Generator& x : gens) {
    all.push_back(x);
    auto& arrows = out_of[x.key(cols)];
    rects.visit(x, false, [&](const Rectangle& r) {
      arrows.push_back({r.to, rects.domain(r), sign(r)});
      ++report.rectangles;
    });
  }

  auto fail = [&](std::string what) {
    report.passed = false;
    if (report.counterexamples.size() < 20) report.counterexamples.push_back(std::move(what));
  };

  for (const Generator& x : all) {
    struct Entry {
      int product;
      Generator via;
    };
    std::map<std::pair<std::uint64_t, std::vector<int>>, std::vector<Entry>> polygons;
    std::map<std::pair<std::uint64_t, std::vector<int>>, Generator> ends;
    for (const Arrow& first : out_of[x.key(cols)]) {
      for (const Arrow& second : out_of[first.to.key(cols)]) {
        std::vector<int> dom = first.domain;
        for (std::size_t c = 0; c < dom.size(); ++c) dom[c] += second.domain[c];
        auto key = std::make_pair(second.to.key(cols), std::move(dom));
        ends.emplace(key, second.to);
        polygons[key].push_back({first.sign * second.sign, first.to});
      }
    }
    for (const auto& [key, list] : polygons) {
      const Generator& z = ends.at(key);
      const std::vector<int>& dom = key.second;
      if (z == x) {
        bool rows_constant = true, circles_constant = true;
        for (int r = 0; r < g.n && rows_constant; ++r) {
          for (int c = 1; c < cols; ++c) rows_constant = rows_constant && dom[r * cols + c] == dom[r * cols];
        }
        for (int j = 0; j < g.n && circles_constant; ++j) {
          for (int r = 0; r < g.n; ++r) {
            for (int c = j; c < cols; c += g.n) circles_constant = circles_constant && dom[r * cols + c] == dom[j];
          }
        }
        for (const Entry& e : list) {
          if (rows_constant && !circles_constant) {
            ++report.alpha_strips;
            if (e.product != 1) fail("alpha-strip at " + describe(x) + " via " + describe(e.via) + " has sign product -1");
          } else if (circles_constant && !rows_constant) {
            ++report.beta_strips;
            if (e.product != -1) fail("beta-strip at " + describe(x) + " via " + describe(e.via) + " has sign product +1");
          } else {
            fail("closed domain at " + describe(x) + " via " + describe(e.via) + " is neither an alpha- nor a beta-strip");
          }
        }
        continue;
      }
      if (list.size() == 1) {
        ++report.single_polygons;
      } else if (list.size() == 2) {
        ++report.paired_polygons;
        if (list[0].product != -list[1].product) {
          fail("polygon " + describe(x) + " -> " + describe(z) + " via " + describe(list[0].via) + " and " +
               describe(list[1].via) + " has equal sign products");
        }
      } else {
        fail("polygon " + describe(x) + " -> " + describe(z) + " has " + std::to_string(list.size()) +
             " decompositions");
      }
    }
  }
  return report;
}

}  // namespace lgh
