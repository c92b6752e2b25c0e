#pragma once

// Batch survey for torsion in integral grid homology.

#include "lgh/complex.hpp"
#include "lgh/grid.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <functional>
#include <mutex>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

namespace lgh {

/// Every valid one-component grid with the given parameters, optionally one per translation class.
inline std::vector<GridDiagram> all_knot_grids(int n, int p, int q, bool up_to_translation) {
  std::vector<GridDiagram> out;
  std::set<std::string> seen;
  std::vector<int> xp(n), op(n);
  std::iota(xp.begin(), xp.end(), 0);
  std::uint64_t combos = 1;
  for (int i = 0; i < 2 * n; ++i) combos *= static_cast<std::uint64_t>(p);
  do {
    std::iota(op.begin(), op.end(), 0);
    do {
      for (std::uint64_t code = 0; code < combos; ++code) {
        std::vector<int> xs(n), os(n);
        std::uint64_t rest = code;
        for (int r = 0; r < n; ++r) {
          xs[r] = xp[r] + n * static_cast<int>(rest % p);
          rest /= p;
          os[r] = op[r] + n * static_cast<int>(rest % p);
          rest /= p;
        }
        bool collision = false;
        for (int r = 0; r < n; ++r) collision = collision || xs[r] == os[r];
        if (collision) continue;
        GridDiagram g = build_grid(n, p, q, xs, os);
        if (!is_knot(g)) continue;
        if (up_to_translation && !seen.insert(grid_key(canonical_form(g))).second) continue;
        out.push_back(std::move(g));
      }
    } while (std::next_permutation(op.begin(), op.end()));
  } while (std::next_permutation(xp.begin(), xp.end()));
  return out;
}

/// Uniform over valid one-component grids (rejection sampling).
inline GridDiagram random_knot_grid(std::mt19937_64& rng, int n, int p, int q) {
  if (n * p < 2) throw std::invalid_argument("no valid grid has a single square");
  std::uniform_int_distribution<int> chunk(0, p - 1);
  std::vector<int> xp(n), op(n), xs(n), os(n);
  for (;;) {
    std::iota(xp.begin(), xp.end(), 0);
    std::iota(op.begin(), op.end(), 0);
    std::shuffle(xp.begin(), xp.end(), rng);
    std::shuffle(op.begin(), op.end(), rng);
    bool collision = false;
    for (int r = 0; r < n; ++r) {
      xs[r] = xp[r] + n * chunk(rng);
      os[r] = op[r] + n * chunk(rng);
      collision = collision || xs[r] == os[r];
    }
    if (collision) continue;
    GridDiagram g = build_grid(n, p, q, xs, os);
    if (is_knot(g)) return g;
  }
}

struct ScanPolicy {
  int n = 2;
  int p_min = 1;
  int p_max = 6;
  bool exhaustive = true;
  std::size_t samples = 200;  // per (p, q) when not exhaustive
  std::uint64_t seed = 1;
  unsigned threads = 1;
  /// Test hook: runs on every tilde complex before its homology is taken.
  std::function<void(TildeComplex&)> mutate;
};

struct ScanFinding {
  std::string key;
  std::string kind;  // "tilde-torsion", "hat-torsion", "factorization", "euler"
  std::string detail;
  friend bool operator==(const ScanFinding&, const ScanFinding&) = default;
  friend bool operator<(const ScanFinding& a, const ScanFinding& b) {
    return std::tie(a.key, a.kind, a.detail) < std::tie(b.key, b.kind, b.detail);
  }
};

struct ScanResult {
  std::size_t grids = 0;
  std::map<std::pair<int, int>, std::size_t> per_params;
  std::vector<ScanFinding> findings;  // sorted

  bool clean() const { return findings.empty(); }
  std::size_t count(const std::string& kind) const {
    return static_cast<std::size_t>(std::count_if(findings.begin(), findings.end(),
                                                  [&](const ScanFinding& f) { return f.kind == kind; }));
  }
};

namespace detail {

inline std::string torsion_text(const Bigrading& g, const std::vector<BigInt>& torsion) {
  std::string out = "spinc " + std::to_string(g.spinc) + " (" + to_string(g.maslov) + "," + to_string(g.alexander) + "):";
  for (const BigInt& t : torsion) out += " Z/" + t.str();
  return out;
}

/// Torsion in tilde and hat, exactness of the W division, and the Euler identity.
inline std::vector<ScanFinding> inspect_grid(const GridDiagram& grid, const ScanPolicy& policy) {
  std::vector<ScanFinding> out;
  const std::string key = grid_key(grid);
  TildeComplex complex = build_tilde_complex(grid, section_sign(grid.n()));
  if (policy.mutate) policy.mutate(complex);
  const BigradedHomology tilde = smith_homology(complex);
  for (const auto& [g, group] : tilde) {
    if (!group.torsion.empty()) out.push_back({key, "tilde-torsion", torsion_text(g, group.torsion)});
  }
  BigradedHomology hat;
  try {
    hat = factor_out_W(tilde, grid.n());
  } catch (const FactorizationError& e) {
    out.push_back({key, "factorization", e.what()});
    return out;
  }
  for (const auto& [g, group] : hat) {
    if (!group.torsion.empty()) out.push_back({key, "hat-torsion", torsion_text(g, group.torsion)});
  }
  const auto anchors = maslov_anchors(hat);
  const auto chi_tilde = decategorify(tilde, anchors);
  const auto chi_hat = decategorify(hat, anchors);
  for (int s = 0; s < grid.p(); ++s) {
    const auto h = chi_hat.find(s);
    const auto t = chi_tilde.find(s);
    const LaurentPolynomial lifted = h == chi_hat.end() ? LaurentPolynomial{} : multiply(h->second, w_power_character(grid.n() - 1));
    if (lifted != (t == chi_tilde.end() ? LaurentPolynomial{} : t->second)) {
      out.push_back({key, "euler", "spinc " + std::to_string(s)});
    }
  }
  return out;
}

}  // namespace detail

/// Grids visited by a scan, in a deterministic order.
inline std::vector<GridDiagram> scan_grids(const ScanPolicy& policy) {
  std::vector<GridDiagram> grids;
  for (int p = std::max(1, policy.p_min); p <= policy.p_max; ++p) {
    for (int q = 0; q < p; ++q) {
      if (std::gcd(p, q) != 1 || policy.n * p < 2) continue;
      if (policy.exhaustive) {
        for (GridDiagram& g : all_knot_grids(policy.n, p, q, true)) grids.push_back(std::move(g));
      } else {
        std::mt19937_64 rng(policy.seed ^ (static_cast<std::uint64_t>(p) << 32) ^ (static_cast<std::uint64_t>(q) << 16));
        for (std::size_t i = 0; i < policy.samples; ++i) grids.push_back(random_knot_grid(rng, policy.n, p, q));
      }
    }
  }
  return grids;
}

inline ScanResult batch_scan(const ScanPolicy& policy) {
  const std::vector<GridDiagram> grids = scan_grids(policy);
  ScanResult result;
  result.grids = grids.size();
  for (const GridDiagram& g : grids) ++result.per_params[{g.p(), g.q()}];

  std::atomic<std::size_t> next{0};
  std::mutex merge;
  auto worker = [&] {
    std::vector<ScanFinding> local;
    for (std::size_t i = next++; i < grids.size(); i = next++) {
      auto found = detail::inspect_grid(grids[i], policy);
      local.insert(local.end(), found.begin(), found.end());
    }
    const std::lock_guard lock(merge);
    result.findings.insert(result.findings.end(), local.begin(), local.end());
  };
  const unsigned threads = std::max(1u, policy.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  std::sort(result.findings.begin(), result.findings.end());
  return result;
}

inline nlohmann::ordered_json to_json(const ScanPolicy& policy, const ScanResult& result) {
  nlohmann::ordered_json j;
  j["policy"] = {{"n", policy.n},
                 {"p_min", policy.p_min},
                 {"p_max", policy.p_max},
                 {"mode", policy.exhaustive ? "exhaustive" : "sampled"},
                 {"samples", policy.exhaustive ? 0 : policy.samples},
                 {"seed", policy.exhaustive ? 0 : policy.seed}};
  j["grids"] = result.grids;
  nlohmann::ordered_json params = nlohmann::ordered_json::array();
  for (const auto& [pq, count] : result.per_params) params.push_back({{"p", pq.first}, {"q", pq.second}, {"grids", count}});
  j["per_params"] = params;
  nlohmann::ordered_json findings = nlohmann::ordered_json::array();
  for (const ScanFinding& f : result.findings) findings.push_back({{"key", f.key}, {"kind", f.kind}, {"detail", f.detail}});
  j["findings"] = findings;
  j["torsion_free"] = result.count("tilde-torsion") + result.count("hat-torsion") == 0;
  return j;
}

}  // namespace lgh
