#pragma once

// Shared fixtures for the test binaries: random valid grids and the list of
// lens-space parameters to sweep.

#include "lgh/grid.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace support {

/// Uniform over valid marking sets (rejection sampling on collisions).
/// There is no valid grid with n = p = 1.
inline lgh::GridDiagram random_grid(std::mt19937_64& rng, int n, int p, int q) {
  if (n * p < 2) throw std::invalid_argument("no valid grid has a single square");
  for (;;) {
    std::vector<int> xs(n), os(n), xp(n), op(n);
    std::iota(xp.begin(), xp.end(), 0);
    std::iota(op.begin(), op.end(), 0);
    std::shuffle(xp.begin(), xp.end(), rng);
    std::shuffle(op.begin(), op.end(), rng);
    std::uniform_int_distribution<int> chunk(0, p - 1);
    for (int r = 0; r < n; ++r) {
      xs[r] = xp[r] + n * chunk(rng);
      os[r] = op[r] + n * chunk(rng);
    }
    try {
      return lgh::build_grid(n, p, q, xs, os);
    } catch (const lgh::GridError&) {
    }
  }
}

/// Like random_grid, restricted to one-component diagrams.
inline lgh::GridDiagram random_knot(std::mt19937_64& rng, int n, int p, int q) {
  for (;;) {
    lgh::GridDiagram g = random_grid(rng, n, p, q);
    if (lgh::is_knot(g)) return g;
  }
}

/// (p, q) with 0 <= q < p, gcd(p, q) = 1, for p in [p_min, p_max].
inline std::vector<std::pair<int, int>> lens_parameters(int p_min, int p_max) {
  std::vector<std::pair<int, int>> out;
  for (int p = p_min; p <= p_max; ++p) {
    for (int q = 0; q < p; ++q) {
      if (std::gcd(p, q) == 1) out.emplace_back(p, q);
    }
  }
  return out;
}

/// Every valid grid with the given parameters.
inline std::vector<lgh::GridDiagram> all_grids(int n, int p, int q) {
  std::vector<lgh::GridDiagram> out;
  std::vector<int> xp(n), op(n);
  std::iota(xp.begin(), xp.end(), 0);
  do {
    std::iota(op.begin(), op.end(), 0);
    do {
      long combos = 1;
      for (int i = 0; i < 2 * n; ++i) combos *= p;
      for (long code = 0; code < combos; ++code) {
        std::vector<int> xs(n), os(n);
        long rest = code;
        for (int r = 0; r < n; ++r) {
          xs[r] = xp[r] + n * static_cast<int>(rest % p);
          rest /= p;
          os[r] = op[r] + n * static_cast<int>(rest % p);
          rest /= p;
        }
        try {
          out.push_back(lgh::build_grid(n, p, q, xs, os));
        } catch (const lgh::GridError&) {
        }
      }
    } while (std::next_permutation(op.begin(), op.end()));
  } while (std::next_permutation(xp.begin(), xp.end()));
  return out;
}

}  // namespace support
