#pragma once

// The tilde grid complex split into (Spin^c, Alexander) sectors, its
// bigraded homology over Z or F_2, removal of the W^(n-1) tensor factor, the
// Euler characteristic, and the signed minus differential with explicit
// V-exponents.

#include "lgh/gradings.hpp"
#include "lgh/grid.hpp"
#include "lgh/rational.hpp"
#include "lgh/rectangles.hpp"
#include "lgh/signs.hpp"
#include "lgh/smith.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lgh {

enum class Coefficients { Z, F2 };

inline const char* to_string(Coefficients c) { return c == Coefficients::Z ? "Z" : "F2"; }

/// Generators of one Maslov value inside a sector: basis[begin, end).
struct MaslovLevel {
  Rational maslov;
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
};

/// All generators sharing (spinc, alexander).  Levels are consecutive in M
/// (empty levels are kept so that boundaries[k] always maps level k to k-1).
struct Sector {
  int spinc = 0;
  Rational alexander;
  std::vector<Generator> basis;
  std::vector<MaslovLevel> maslov_levels;  // ascending M, step 1
  /// boundaries[k]: rows index level k, columns index level k-1; boundaries[0] has no columns.
  std::vector<SparseMatrix> boundaries;

  bool differential_is_zero() const {
    for (const auto& b : boundaries) {
      if (!b.is_zero()) return false;
    }
    return true;
  }
};

struct TildeComplex {
  GridParams params;
  Coefficients coefficients = Coefficients::Z;
  std::vector<Sector> sectors;  // ordered by (spinc, alexander)

  bool differential_is_zero(int spinc) const {
    for (const Sector& s : sectors) {
      if (s.spinc == spinc && !s.differential_is_zero()) return false;
    }
    return true;
  }
  std::size_t generator_count() const {
    std::size_t total = 0;
    for (const Sector& s : sectors) total += s.basis.size();
    return total;
  }
};

namespace detail {

inline void require_nilpotent(const SparseMatrix& upper, const SparseMatrix& lower, Coefficients coeff) {
  SparseMatrix square = upper.multiply(lower);
  if (coeff == Coefficients::F2) square = square.reduced_mod2();
  if (!square.is_zero()) throw std::logic_error("boundary map does not square to zero");
}

}  // namespace detail

/// Tilde complex: entry (x, y) is the sum of S(r) over empty rectangles x -> y
/// containing no marking (1 per rectangle over F_2; `sign` may then be empty).
inline TildeComplex build_tilde_complex(const GridDiagram& grid, const SignAssignment& sign,
                                        Coefficients coeff = Coefficients::Z) {
  if (coeff == Coefficients::Z && !sign) throw std::invalid_argument("integer coefficients need a sign assignment");
  const GradingEngine engine(grid);
  const int cols = grid.columns();

  using SectorKey = std::pair<int, Rational>;
  std::map<SectorKey, std::map<Rational, std::vector<Generator>>> buckets;
  for (const Generator& x : enumerate_generators(grid)) {
    const Trigrading t = engine.grade(x);
    buckets[{t.spinc, t.alexander}][t.maslov].push_back(x);
  }

  struct Location {
    std::size_t sector;
    std::size_t level;
    std::size_t index;  // within the level
  };
  std::unordered_map<std::uint64_t, Location> where;
  TildeComplex complex{grid.params(), coeff, {}};
  for (auto& [key, levels] : buckets) {
    Sector s;
    s.spinc = key.first;
    s.alexander = key.second;
    const Rational lowest = levels.begin()->first;
    const Rational highest = levels.rbegin()->first;
    if (!is_integer(highest - lowest)) throw std::logic_error("Maslov values of a sector differ by a non-integer");
    for (Rational m = lowest; m <= highest; m += 1) {
      MaslovLevel level{m, s.basis.size(), s.basis.size()};
      if (auto it = levels.find(m); it != levels.end()) {
        for (const Generator& x : it->second) {
          where[x.key(cols)] = {complex.sectors.size(), s.maslov_levels.size(), s.basis.size() - level.begin};
          s.basis.push_back(x);
        }
      }
      level.end = s.basis.size();
      s.maslov_levels.push_back(level);
    }
    for (std::size_t k = 0; k < s.maslov_levels.size(); ++k) {
      s.boundaries.emplace_back(s.maslov_levels[k].size(), k == 0 ? 0 : s.maslov_levels[k - 1].size());
    }
    complex.sectors.push_back(std::move(s));
  }

  const RectangleEnumerator rects(grid);
  for (const Sector& s : complex.sectors) {
    for (const Generator& x : s.basis) {
      const Location from = where.at(x.key(cols));
      rects.visit(x, true, [&](const Rectangle& r) {
        if (!r.marking_free()) return;
        const Location to = where.at(r.to.key(cols));
        if (to.sector != from.sector || to.level + 1 != from.level) {
          throw std::logic_error("rectangle does not drop (M, A, S) by (1, 0, 0)");
        }
        const int value = coeff == Coefficients::Z ? sign(r) : 1;
        complex.sectors[from.sector].boundaries[from.level].add(from.index, to.index, value);
      });
    }
  }
  for (Sector& s : complex.sectors) {
    if (coeff == Coefficients::F2) {
      for (auto& b : s.boundaries) b = b.reduced_mod2();
    }
    for (std::size_t k = 2; k < s.boundaries.size(); ++k) {
      detail::require_nilpotent(s.boundaries[k], s.boundaries[k - 1], coeff);
    }
  }
  return complex;
}

struct Bigrading {
  int spinc = 0;
  Rational maslov;
  Rational alexander;

  friend bool operator<(const Bigrading& a, const Bigrading& b) {
    return std::tie(a.spinc, a.maslov, a.alexander) < std::tie(b.spinc, b.maslov, b.alexander);
  }
  friend bool operator==(const Bigrading& a, const Bigrading& b) {
    return a.spinc == b.spinc && a.maslov == b.maslov && a.alexander == b.alexander;
  }
};

/// Z^free_rank plus cyclic summands of the given orders.
struct HomologyGroup {
  std::uint64_t free_rank = 0;
  std::vector<BigInt> torsion;

  bool is_zero() const { return free_rank == 0 && torsion.empty(); }
  friend bool operator==(const HomologyGroup&, const HomologyGroup&) = default;
};

/// Nonzero groups only.
using BigradedHomology = std::map<Bigrading, HomologyGroup>;

/// Homology sector by sector: free rank = dim - rank(out) - rank(in), torsion
/// = invariant factors of the incoming boundary.
inline BigradedHomology smith_homology(const TildeComplex& complex) {
  BigradedHomology out;
  for (const Sector& s : complex.sectors) {
    const std::size_t levels = s.maslov_levels.size();
    std::vector<SmithResult> forms(levels);
    for (std::size_t k = 1; k < levels; ++k) {
      if (complex.coefficients == Coefficients::Z) {
        forms[k] = smith_form(s.boundaries[k]);
      } else {
        forms[k].rank = rank_mod2(s.boundaries[k]);
      }
    }
    for (std::size_t k = 0; k < levels; ++k) {
      const std::size_t dim = s.maslov_levels[k].size();
      const std::size_t rank_out = forms[k].rank;
      const std::size_t rank_in = k + 1 < levels ? forms[k + 1].rank : 0;
      HomologyGroup g;
      g.free_rank = dim - rank_out - rank_in;
      if (k + 1 < levels) g.torsion = forms[k + 1].torsion;
      if (!g.is_zero()) out[{s.spinc, s.maslov_levels[k].maslov, s.alexander}] = std::move(g);
    }
  }
  return out;
}

inline std::uint64_t total_rank(const BigradedHomology& h, int spinc) {
  std::uint64_t total = 0;
  for (const auto& [grading, group] : h) {
    if (grading.spinc == spinc) total += group.free_rank;
  }
  return total;
}

inline bool has_torsion(const BigradedHomology& h) {
  for (const auto& [grading, group] : h) {
    if (!group.torsion.empty()) return true;
  }
  return false;
}

/// dim H(C; F_2) at each bigrading must equal the free rank plus the number of
/// even invariant factors at (M, A) and at (M - 1, A).  Returns the
/// bigradings where that fails.
inline std::vector<Bigrading> universal_coefficient_mismatches(const BigradedHomology& integral,
                                                               const BigradedHomology& mod2) {
  std::map<Bigrading, std::uint64_t> expected;
  for (const auto& [g, group] : integral) {
    std::uint64_t even = 0;
    for (const BigInt& t : group.torsion) even += (t % 2 == 0) ? 1 : 0;
    expected[g] += group.free_rank + even;
    if (even) expected[{g.spinc, g.maslov + 1, g.alexander}] += even;
  }
  std::vector<Bigrading> bad;
  for (const auto& [g, dim] : expected) {
    const auto it = mod2.find(g);
    const std::uint64_t have = it == mod2.end() ? 0 : it->second.free_rank;
    if (have != dim) bad.push_back(g);
  }
  for (const auto& [g, group] : mod2) {
    if (!expected.contains(g)) bad.push_back(g);
  }
  return bad;
}

class FactorizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

/// Prime-power decomposition of an invariant factor.
inline std::vector<BigInt> elementary_divisors(BigInt value) {
  std::vector<BigInt> out;
  for (BigInt prime = 2; prime * prime <= value; ++prime) {
    BigInt power = 1;
    while (value % prime == 0) {
      value /= prime;
      power *= prime;
    }
    if (power > 1) out.push_back(power);
  }
  if (value > 1) out.push_back(value);
  return out;
}

/// Reassembles invariant factors (each dividing the next) from prime powers.
inline std::vector<BigInt> invariant_factors(const std::vector<BigInt>& prime_powers) {
  std::map<BigInt, std::vector<BigInt>> by_prime;
  for (const BigInt& q : prime_powers) {
    BigInt prime = 2;
    while (q % prime != 0) ++prime;
    by_prime[prime].push_back(q);
  }
  std::size_t length = 0;
  for (auto& [prime, powers] : by_prime) {
    std::sort(powers.begin(), powers.end());
    length = std::max(length, powers.size());
  }
  std::vector<BigInt> out(length, 1);
  for (const auto& [prime, powers] : by_prime) {
    // the largest powers go to the last factors
    for (std::size_t i = 0; i < powers.size(); ++i) out[length - powers.size() + i] *= powers[i];
  }
  return out;
}

/// Counts keyed by (spinc, M, A); divides by (1 + u)^times, u lowering (M, A) by (1, 1).
inline std::map<Bigrading, std::int64_t> divide_by_w(const std::map<Bigrading, std::int64_t>& counts, int times) {
  std::map<Bigrading, std::int64_t> current = counts;
  for (int step = 0; step < times; ++step) {
    // diagonals are (spinc, M - A); walk each from its top down
    std::map<std::pair<int, Rational>, std::map<Rational, std::int64_t>> diagonals;
    for (const auto& [g, c] : current) {
      if (c != 0) diagonals[{g.spinc, g.maslov - g.alexander}][g.alexander] = c;
    }
    std::map<Bigrading, std::int64_t> quotient;
    for (const auto& [diag, coeffs] : diagonals) {
      const Rational top = coeffs.rbegin()->first;
      const Rational bottom = coeffs.begin()->first;
      std::int64_t above = 0;
      for (Rational a = top; a >= bottom; a -= 1) {
        const auto it = coeffs.find(a);
        const std::int64_t f = it == coeffs.end() ? 0 : it->second;
        const std::int64_t g = f - above;
        if (a == bottom) {
          if (g != 0) throw FactorizationError("NonExactFactorization: remainder at the bottom of a diagonal");
          break;
        }
        if (g < 0) throw FactorizationError("NonExactFactorization: negative quotient coefficient");
        if (g != 0) quotient[{diag.first, diag.second + a, a}] = g;
        above = g;
      }
    }
    current = std::move(quotient);
  }
  return current;
}

}  // namespace detail

/// Hat homology from tilde homology: removes W^(n-1), W = Z[0,0] + Z[-1,-1],
/// from free ranks and from each prime-power torsion pattern separately.
inline BigradedHomology factor_out_W(const BigradedHomology& tilde, int n) {
  if (n < 1) throw std::invalid_argument("grid size must be positive");
  std::map<Bigrading, std::int64_t> free;
  std::map<BigInt, std::map<Bigrading, std::int64_t>> torsion;
  for (const auto& [g, group] : tilde) {
    if (group.free_rank) free[g] = static_cast<std::int64_t>(group.free_rank);
    for (const BigInt& t : group.torsion) {
      for (const BigInt& q : detail::elementary_divisors(t)) ++torsion[q][g];
    }
  }
  BigradedHomology hat;
  for (const auto& [g, c] : detail::divide_by_w(free, n - 1)) hat[g].free_rank = static_cast<std::uint64_t>(c);
  std::map<Bigrading, std::vector<BigInt>> powers;
  for (const auto& [q, counts] : torsion) {
    for (const auto& [g, c] : detail::divide_by_w(counts, n - 1)) {
      for (std::int64_t i = 0; i < c; ++i) powers[g].push_back(q);
    }
  }
  for (const auto& [g, list] : powers) hat[g].torsion = detail::invariant_factors(list);
  return hat;
}

/// Inverse of factor_out_W on free ranks: tensors with W^(n-1).
inline BigradedHomology tensor_with_W(const BigradedHomology& hat, int n) {
  BigradedHomology current = hat;
  for (int step = 1; step < n; ++step) {
    BigradedHomology next;
    for (const auto& [g, group] : current) {
      for (int shift = 0; shift < 2; ++shift) {
        HomologyGroup& target = next[{g.spinc, g.maslov - shift, g.alexander - shift}];
        target.free_rank += group.free_rank;
        target.torsion.insert(target.torsion.end(), group.torsion.begin(), group.torsion.end());
      }
    }
    current = std::move(next);
  }
  for (auto& [g, group] : current) {
    std::vector<BigInt> primes;
    for (const BigInt& t : group.torsion) {
      for (const BigInt& q : detail::elementary_divisors(t)) primes.push_back(q);
    }
    group.torsion = detail::invariant_factors(primes);
  }
  return current;
}

/// Tilde homology of a grid with the insertion-sort sign assignment.
inline BigradedHomology tilde_homology(const GridDiagram& grid, Coefficients coeff = Coefficients::Z) {
  const SignAssignment sign = coeff == Coefficients::Z ? section_sign(grid.n()) : SignAssignment{};
  return smith_homology(build_tilde_complex(grid, sign, coeff));
}

inline BigradedHomology hat_homology(const GridDiagram& grid, Coefficients coeff = Coefficients::Z) {
  return factor_out_W(tilde_homology(grid, coeff), grid.n());
}

/// Free-rank Poincare polynomial of one Spin^c class: (M, A) -> rank.
using PoincarePolynomial = std::map<std::pair<Rational, Rational>, std::int64_t>;

inline std::map<int, PoincarePolynomial> poincare_polynomials(const BigradedHomology& h) {
  std::map<int, PoincarePolynomial> out;
  for (const auto& [g, group] : h) {
    if (group.free_rank) out[g.spinc][{g.maslov, g.alexander}] += static_cast<std::int64_t>(group.free_rank);
  }
  return out;
}

/// Laurent polynomial in t with rational exponents: exponent -> coefficient.
using LaurentPolynomial = std::map<Rational, std::int64_t>;

inline LaurentPolynomial multiply(const LaurentPolynomial& a, const LaurentPolynomial& b) {
  LaurentPolynomial out;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) out[ea + eb] += ca * cb;
  }
  std::erase_if(out, [](const auto& term) { return term.second == 0; });
  return out;
}

/// (1 - t^-1)^k, the Euler characteristic of W^k under the same sign anchor.
inline LaurentPolynomial w_power_character(int k) {
  LaurentPolynomial out{{Rational(0), 1}};
  for (int i = 0; i < k; ++i) out = multiply(out, LaurentPolynomial{{Rational(0), 1}, {Rational(-1), -1}});
  return out;
}

/// M_0(s): smallest Maslov grading carrying free rank in each Spin^c class.
inline std::map<int, Rational> maslov_anchors(const BigradedHomology& h) {
  std::map<int, Rational> out;
  for (const auto& [g, group] : h) {
    if (group.free_rank == 0) continue;
    auto [it, inserted] = out.try_emplace(g.spinc, g.maslov);
    if (!inserted && g.maslov < it->second) it->second = g.maslov;
  }
  return out;
}

/// chi_s(t) = sum rank * (-1)^(M - M_0(s)) t^A.
inline std::map<int, LaurentPolynomial> decategorify(const BigradedHomology& h, const std::map<int, Rational>& anchors) {
  std::map<int, LaurentPolynomial> out;
  for (const auto& [g, group] : h) {
    if (group.free_rank == 0) continue;
    const auto anchor = anchors.find(g.spinc);
    if (anchor == anchors.end()) throw std::invalid_argument("no Maslov anchor for Spin^c class " + std::to_string(g.spinc));
    const Rational offset = g.maslov - anchor->second;
    if (!is_integer(offset)) throw std::logic_error("Maslov offset from the anchor is not an integer");
    const bool odd = boost::multiprecision::numerator(offset) % 2 != 0;
    out[g.spinc][g.alexander] += (odd ? -1 : 1) * static_cast<std::int64_t>(group.free_rank);
  }
  for (auto& [s, poly] : out) std::erase_if(poly, [](const auto& term) { return term.second == 0; });
  return out;
}

inline std::map<int, LaurentPolynomial> decategorify(const BigradedHomology& h) {
  return decategorify(h, maslov_anchors(h));
}

struct SignedMonomialTerm {
  Generator target;
  int sign = 1;
  std::vector<int> v_exponents;  // O_i(r), indexed by the row of the O marking

  friend bool operator==(const SignedMonomialTerm&, const SignedMonomialTerm&) = default;
};

using MinusDifferential = std::map<Generator, std::vector<SignedMonomialTerm>>;

/// Signed minus differential: empty X-free rectangles, each weighted by
/// S(r) prod V_i^{O_i(r)}.
inline MinusDifferential build_signed_minus_differential(const GridDiagram& grid, const SignAssignment& sign) {
  const RectangleEnumerator rects(grid);
  MinusDifferential d;
  for (const Generator& x : enumerate_generators(grid)) {
    auto& terms = d[x];
    rects.visit(x, true, [&](const Rectangle& r) {
      if (r.x_total() != 0) return;
      terms.push_back({r.to, sign(r), std::vector<int>(r.o_counts.begin(), r.o_counts.begin() + grid.n())});
    });
  }
  return d;
}

/// Nonzero coefficients of the symbolic square, keyed by (x, z, exponent vector).
using MinusSquare = std::map<std::tuple<Generator, Generator, std::vector<int>>, std::int64_t>;

inline MinusSquare symbolic_square(const MinusDifferential& d) {
  MinusSquare out;
  for (const auto& [x, first] : d) {
    for (const SignedMonomialTerm& a : first) {
      for (const SignedMonomialTerm& b : d.at(a.target)) {
        std::vector<int> exps = a.v_exponents;
        for (std::size_t i = 0; i < exps.size(); ++i) exps[i] += b.v_exponents[i];
        out[{x, b.target, std::move(exps)}] += a.sign * b.sign;
      }
    }
  }
  std::erase_if(out, [](const auto& term) { return term.second == 0; });
  return out;
}

}  // namespace lgh
