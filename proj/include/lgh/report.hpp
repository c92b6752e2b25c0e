#pragma once

// End-to-end computation for one grid and its JSON form.
//
// Schema (all rationals and torsion orders are strings, "num/den" or integer):
//   engine_version, input{n,p,q,xs,os}, homology_class, coefficients ("Z"|"F2"),
//   spinc_label_shift, euler_convention,
//   hat[{spinc, groups[{maslov, alexander, rank, torsion[]}]}],
//   tilde (same shape, optional), euler[{spinc, anchor, terms[{exponent, coefficient}]}],
//   generators[{columns, spinc, maslov, alexander}] (optional), ascii (optional),
//   timing_ms (optional).

#include "lgh/complex.hpp"
#include "lgh/grid.hpp"

#include <json.hpp>

#include <chrono>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lgh {

inline constexpr const char* kEngineVersion = "lgh 1.0.0";

inline constexpr const char* kEulerConvention =
    "chi_s(t) = sum of rank * (-1)^(M - M0(s)) * t^A, M0(s) = least Maslov grading of nonzero free rank in class s";

enum class ReportErrorKind { SizeCapExceeded, ZCoefficientCap, LinkNotSupported, Parse };

inline const char* to_string(ReportErrorKind kind) {
  switch (kind) {
    case ReportErrorKind::SizeCapExceeded: return "SizeCapExceeded";
    case ReportErrorKind::ZCoefficientCap: return "ZCoefficientCap";
    case ReportErrorKind::LinkNotSupported: return "LinkNotSupported";
    case ReportErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

class ReportError : public std::runtime_error {
 public:
  ReportError(ReportErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}
  ReportErrorKind kind() const { return kind_; }

 private:
  ReportErrorKind kind_;
};

struct ReportOptions {
  Coefficients coefficients = Coefficients::Z;
  bool tilde = false;
  bool generators = false;
  bool ascii = false;
  bool timing = false;
  /// Upper bound on n! p^n.
  std::uint64_t max_generators = 2'000'000;
  int z_max_n = 4;
  int f2_max_n = 6;
};

struct GroupEntry {
  Rational maslov;
  Rational alexander;
  std::uint64_t rank = 0;
  std::vector<BigInt> torsion;
  friend bool operator==(const GroupEntry&, const GroupEntry&) = default;
};

struct SpincHomology {
  int spinc = 0;
  std::vector<GroupEntry> groups;
  friend bool operator==(const SpincHomology&, const SpincHomology&) = default;
};

struct EulerEntry {
  int spinc = 0;
  std::optional<Rational> anchor;
  LaurentPolynomial terms;
  friend bool operator==(const EulerEntry&, const EulerEntry&) = default;
};

struct GeneratorEntry {
  std::vector<int> columns;
  int spinc = 0;
  Rational maslov;
  Rational alexander;
  friend bool operator==(const GeneratorEntry&, const GeneratorEntry&) = default;
};

struct ComputeReport {
  std::string engine_version = kEngineVersion;
  int n = 0, p = 0, q = 0;
  std::vector<int> xs, os;
  int homology_class = 0;
  Coefficients coefficients = Coefficients::Z;
  int spinc_label_shift = 0;
  std::vector<SpincHomology> hat;
  std::optional<std::vector<SpincHomology>> tilde;
  std::vector<EulerEntry> euler;
  std::optional<std::vector<GeneratorEntry>> generators;
  std::optional<std::string> ascii;
  std::optional<double> timing_ms;

  friend bool operator==(const ComputeReport&, const ComputeReport&) = default;
};

/// One entry per Spin^c class 0..p-1, groups in (M, A) order.
inline std::vector<SpincHomology> by_spinc(const BigradedHomology& h, int p) {
  std::vector<SpincHomology> out(p);
  for (int s = 0; s < p; ++s) out[s].spinc = s;
  for (const auto& [g, group] : h) {
    if (group.is_zero()) continue;
    out.at(g.spinc).groups.push_back({g.maslov, g.alexander, group.free_rank, group.torsion});
  }
  return out;
}

inline BigradedHomology to_homology(const std::vector<SpincHomology>& groups) {
  BigradedHomology out;
  for (const SpincHomology& s : groups) {
    for (const GroupEntry& e : s.groups) out[{s.spinc, e.maslov, e.alexander}] = {e.rank, e.torsion};
  }
  return out;
}

inline ComputeReport compute_report(const GridDiagram& grid, const ReportOptions& options = {}) {
  const auto start = std::chrono::steady_clock::now();
  const GridParams& g = grid.params();
  const GeneratorRange range(g);
  if (range.size() > options.max_generators) {
    throw ReportError(ReportErrorKind::SizeCapExceeded, std::to_string(range.size()) + " generators exceed the cap of " +
                                                            std::to_string(options.max_generators));
  }
  if (options.coefficients == Coefficients::Z && g.n > options.z_max_n) {
    throw ReportError(ReportErrorKind::ZCoefficientCap,
                      "integer coefficients are limited to n <= " + std::to_string(options.z_max_n) +
                          "; rerun with --coeff f2 (allowed up to n = " + std::to_string(options.f2_max_n) + ")");
  }
  if (options.coefficients == Coefficients::F2 && g.n > options.f2_max_n) {
    throw ReportError(ReportErrorKind::SizeCapExceeded, "F2 coefficients are limited to n <= " + std::to_string(options.f2_max_n));
  }
  if (!is_knot(grid)) {
    throw ReportError(ReportErrorKind::LinkNotSupported,
                      "the diagram has " + std::to_string(component_count(grid)) + " components");
  }

  ComputeReport report;
  report.n = g.n;
  report.p = g.p;
  report.q = g.q;
  report.xs = grid.xs();
  report.os = grid.os();
  report.homology_class = homology_class(grid);
  report.coefficients = options.coefficients;

  const BigradedHomology tilde = tilde_homology(grid, options.coefficients);
  const BigradedHomology hat = factor_out_W(tilde, g.n);
  report.hat = by_spinc(hat, g.p);
  if (options.tilde) report.tilde = by_spinc(tilde, g.p);

  const auto anchors = maslov_anchors(hat);
  const auto chi = decategorify(hat, anchors);
  for (int s = 0; s < g.p; ++s) {
    EulerEntry e{s, std::nullopt, {}};
    if (auto it = anchors.find(s); it != anchors.end()) e.anchor = it->second;
    if (auto it = chi.find(s); it != chi.end()) e.terms = it->second;
    report.euler.push_back(std::move(e));
  }

  if (options.generators) {
    const GradingEngine engine(grid);
    std::vector<GeneratorEntry> list;
    for (const Generator& x : range) {
      const Trigrading t = engine.grade(x);
      list.push_back({x.columns(), t.spinc, t.maslov, t.alexander});
    }
    report.generators = std::move(list);
  }
  if (options.ascii) report.ascii = render_ascii(grid);
  if (options.timing) {
    report.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return report;
}

// ------------------------------------------------------------------ JSON

namespace detail {

using nlohmann::ordered_json;

inline ordered_json groups_json(const std::vector<SpincHomology>& groups) {
  ordered_json out = ordered_json::array();
  for (const SpincHomology& s : groups) {
    ordered_json list = ordered_json::array();
    for (const GroupEntry& e : s.groups) {
      ordered_json torsion = ordered_json::array();
      for (const BigInt& t : e.torsion) torsion.push_back(t.str());
      list.push_back({{"maslov", to_string(e.maslov)},
                      {"alexander", to_string(e.alexander)},
                      {"rank", e.rank},
                      {"torsion", torsion}});
    }
    out.push_back({{"spinc", s.spinc}, {"groups", list}});
  }
  return out;
}

inline std::vector<SpincHomology> groups_from(const ordered_json& j) {
  std::vector<SpincHomology> out;
  for (const auto& s : j) {
    SpincHomology entry{s.at("spinc").get<int>(), {}};
    for (const auto& e : s.at("groups")) {
      GroupEntry g{parse_rational(e.at("maslov").get<std::string>()),
                   parse_rational(e.at("alexander").get<std::string>()), e.at("rank").get<std::uint64_t>(), {}};
      for (const auto& t : e.at("torsion")) g.torsion.emplace_back(t.get<std::string>());
      entry.groups.push_back(std::move(g));
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const ComputeReport& r) {
  using detail::ordered_json;
  ordered_json j;
  j["engine_version"] = r.engine_version;
  j["input"] = {{"n", r.n}, {"p", r.p}, {"q", r.q}, {"xs", r.xs}, {"os", r.os}};
  j["homology_class"] = r.homology_class;
  j["coefficients"] = to_string(r.coefficients);
  j["spinc_label_shift"] = r.spinc_label_shift;
  j["euler_convention"] = kEulerConvention;
  j["hat"] = detail::groups_json(r.hat);
  if (r.tilde) j["tilde"] = detail::groups_json(*r.tilde);
  ordered_json euler = ordered_json::array();
  for (const EulerEntry& e : r.euler) {
    ordered_json terms = ordered_json::array();
    for (const auto& [exponent, c] : e.terms) terms.push_back({{"exponent", to_string(exponent)}, {"coefficient", c}});
    euler.push_back({{"spinc", e.spinc},
                     {"anchor", e.anchor ? ordered_json(to_string(*e.anchor)) : ordered_json(nullptr)},
                     {"terms", terms}});
  }
  j["euler"] = euler;
  if (r.generators) {
    ordered_json list = ordered_json::array();
    for (const GeneratorEntry& g : *r.generators) {
      list.push_back({{"columns", g.columns},
                      {"spinc", g.spinc},
                      {"maslov", to_string(g.maslov)},
                      {"alexander", to_string(g.alexander)}});
    }
    j["generators"] = list;
  }
  if (r.ascii) j["ascii"] = *r.ascii;
  if (r.timing_ms) j["timing_ms"] = *r.timing_ms;
  return j;
}

inline ComputeReport report_from_json(const nlohmann::ordered_json& j) {
  try {
    ComputeReport r;
    r.engine_version = j.at("engine_version").get<std::string>();
    const auto& in = j.at("input");
    r.n = in.at("n").get<int>();
    r.p = in.at("p").get<int>();
    r.q = in.at("q").get<int>();
    r.xs = in.at("xs").get<std::vector<int>>();
    r.os = in.at("os").get<std::vector<int>>();
    r.homology_class = j.at("homology_class").get<int>();
    const std::string coeff = j.at("coefficients").get<std::string>();
    if (coeff != "Z" && coeff != "F2") throw ReportError(ReportErrorKind::Parse, "unknown coefficients " + coeff);
    r.coefficients = coeff == "Z" ? Coefficients::Z : Coefficients::F2;
    r.spinc_label_shift = j.at("spinc_label_shift").get<int>();
    r.hat = detail::groups_from(j.at("hat"));
    if (j.contains("tilde")) r.tilde = detail::groups_from(j.at("tilde"));
    for (const auto& e : j.at("euler")) {
      EulerEntry entry{e.at("spinc").get<int>(), std::nullopt, {}};
      if (!e.at("anchor").is_null()) entry.anchor = parse_rational(e.at("anchor").get<std::string>());
      for (const auto& t : e.at("terms")) {
        entry.terms[parse_rational(t.at("exponent").get<std::string>())] = t.at("coefficient").get<std::int64_t>();
      }
      r.euler.push_back(std::move(entry));
    }
    if (j.contains("generators")) {
      std::vector<GeneratorEntry> list;
      for (const auto& g : j.at("generators")) {
        list.push_back({g.at("columns").get<std::vector<int>>(), g.at("spinc").get<int>(),
                        parse_rational(g.at("maslov").get<std::string>()),
                        parse_rational(g.at("alexander").get<std::string>())});
      }
      r.generators = std::move(list);
    }
    if (j.contains("ascii")) r.ascii = j.at("ascii").get<std::string>();
    if (j.contains("timing_ms")) r.timing_ms = j.at("timing_ms").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ReportError(ReportErrorKind::Parse, e.what());
  } catch (const std::invalid_argument& e) {
    throw ReportError(ReportErrorKind::Parse, e.what());
  }
}

inline std::string render_json(const ComputeReport& r) { return to_json(r).dump(2) + "\n"; }

inline ComputeReport parse_report(const std::string& text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ReportError(ReportErrorKind::Parse, e.what());
  }
  return report_from_json(j);
}

namespace detail {

inline std::string group_name(const GroupEntry& e, Coefficients coeff) {
  const std::string ring = coeff == Coefficients::Z ? "Z" : "F2";
  std::string out = e.rank == 1 ? ring : (e.rank > 1 ? ring + "^" + std::to_string(e.rank) : "");
  for (const BigInt& t : e.torsion) out += (out.empty() ? "" : " + ") + std::string("Z/") + t.str();
  return out;
}

inline std::string polynomial_text(const LaurentPolynomial& poly) {
  if (poly.empty()) return "0";
  std::string out;
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) {
    const auto& [exponent, c] = *it;
    const std::int64_t magnitude = c < 0 ? -c : c;
    if (out.empty()) {
      out += c < 0 ? "-" : "";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    const bool constant = exponent == 0;
    if (magnitude != 1 || constant) out += std::to_string(magnitude);
    if (!constant) out += "t^" + (is_integer(exponent) ? to_string(exponent) : "(" + to_string(exponent) + ")");
  }
  return out;
}

}  // namespace detail

/// Plain-text summary: one line per nonzero group, then the Euler characteristics.
inline std::string render_table(const ComputeReport& r) {
  std::ostringstream out;
  out << "grid (n,p,q) = (" << r.n << "," << r.p << "," << r.q << ")  X = [";
  for (std::size_t i = 0; i < r.xs.size(); ++i) out << (i ? "," : "") << r.xs[i];
  out << "]  O = [";
  for (std::size_t i = 0; i < r.os.size(); ++i) out << (i ? "," : "") << r.os[i];
  out << "]\nhomology class " << r.homology_class << " in Z/" << r.p << "\n";
  if (r.ascii) out << "\n" << *r.ascii << "\n";
  auto section = [&](const char* title, const std::vector<SpincHomology>& groups) {
    out << title << " (" << to_string(r.coefficients) << ")\n";
    out << "  " << std::left << std::setw(7) << "spinc" << std::setw(10) << "M" << std::setw(8) << "A" << "group\n";
    for (const SpincHomology& s : groups) {
      if (s.groups.empty()) out << "  " << std::setw(7) << s.spinc << "0\n";
      for (const GroupEntry& e : s.groups) {
        out << "  " << std::setw(7) << s.spinc << std::setw(10) << to_string(e.maslov) << std::setw(8)
            << to_string(e.alexander) << detail::group_name(e, r.coefficients) << "\n";
      }
    }
  };
  section("hat homology", r.hat);
  if (r.tilde) section("tilde homology", *r.tilde);
  out << "Euler characteristic\n";
  for (const EulerEntry& e : r.euler) {
    out << "  spinc " << e.spinc << ": " << detail::polynomial_text(e.terms);
    if (e.anchor) out << "   (anchor M0 = " << to_string(*e.anchor) << ")";
    out << "\n";
  }
  if (r.generators) {
    out << "generators\n";
    for (const GeneratorEntry& g : *r.generators) {
      out << "  [";
      for (std::size_t i = 0; i < g.columns.size(); ++i) out << (i ? "," : "") << g.columns[i];
      out << "]  spinc " << g.spinc << "  M " << to_string(g.maslov) << "  A " << to_string(g.alexander) << "\n";
    }
  }
  if (r.timing_ms) out << "time " << std::fixed << std::setprecision(1) << *r.timing_ms << " ms\n";
  return out.str();
}

}  // namespace lgh
