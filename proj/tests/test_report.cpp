#include "lgh/atlas.hpp"
#include "lgh/report.hpp"
#include "lgh/scan.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace lgh;

namespace {

Rational r(long num, long den = 1) { return Rational(num, den); }

GridDiagram example() { return build_grid(2, 3, 1, {0, 1}, {3, 4}); }

ReportErrorKind error_kind(auto&& fn) {
  try {
    fn();
  } catch (const ReportError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no ReportError thrown";
  return ReportErrorKind::Parse;
}

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("lgh-test-" + std::to_string(std::random_device{}()) + "-" + std::to_string(counter_++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

}  // namespace

TEST(Report, ExampleGroups) {
  const ComputeReport report = compute_report(example());
  ASSERT_EQ(report.hat.size(), 3u);
  EXPECT_EQ(report.hat[0].groups, (std::vector<GroupEntry>{{r(-1, 2), r(-1), 1, {}}, {r(1, 2), r(0), 1, {}}, {r(3, 2), r(1), 1, {}}}));
  EXPECT_EQ(report.hat[1].groups, (std::vector<GroupEntry>{{r(1, 6), r(0), 1, {}}}));
  EXPECT_EQ(report.homology_class, 0);
  EXPECT_EQ(report.spinc_label_shift, 0);
  EXPECT_FALSE(report.tilde.has_value());
  EXPECT_FALSE(report.timing_ms.has_value());
}

TEST(Report, UnknotAndSimpleKnot) {
  const ComputeReport unknot = compute_report(build_grid(2, 1, 0, {0, 1}, {1, 0}));
  EXPECT_EQ(unknot.hat[0].groups, (std::vector<GroupEntry>{{r(0), r(0), 1, {}}}));

  const ComputeReport simple = compute_report(build_grid(1, 5, 1, {0}, {2}));
  std::multiset<Rational> maslovs, expected;
  for (const SpincHomology& s : simple.hat) {
    ASSERT_EQ(s.groups.size(), 1u);
    EXPECT_EQ(s.groups[0].rank, 1u);
    maslovs.insert(s.groups[0].maslov);
  }
  for (int s = 0; s < 5; ++s) expected.insert(d_invariant(5, 1, s));
  EXPECT_EQ(maslovs, expected);
}

TEST(Report, Caps) {
  ReportOptions tight;
  tight.max_generators = 10;
  EXPECT_EQ(error_kind([&] { compute_report(example(), tight); }), ReportErrorKind::SizeCapExceeded);
  const GridDiagram five = build_grid(5, 1, 0, {0, 1, 2, 3, 4}, {1, 2, 3, 4, 0});
  EXPECT_EQ(error_kind([&] { compute_report(five); }), ReportErrorKind::ZCoefficientCap);
  ReportOptions f2;
  f2.coefficients = Coefficients::F2;
  EXPECT_EQ(compute_report(five, f2).hat[0].groups, (std::vector<GroupEntry>{{r(0), r(0), 1, {}}}));
  EXPECT_EQ(error_kind([] { compute_report(build_grid(2, 2, 1, {1, 2}, {3, 0})); }), ReportErrorKind::LinkNotSupported);
}

TEST(Report, ZCapMessageOffersFallback) {
  try {
    compute_report(build_grid(5, 1, 0, {0, 1, 2, 3, 4}, {1, 2, 3, 4, 0}));
    FAIL();
  } catch (const ReportError& e) {
    EXPECT_NE(std::string(e.what()).find("--coeff f2"), std::string::npos);
  }
}

TEST(Report, JsonRoundTrip) {
  ReportOptions everything;
  everything.tilde = everything.generators = everything.ascii = everything.timing = true;
  for (const GridDiagram& g : {example(), build_grid(3, 2, 1, {0, 4, 2}, {1, 5, 3}), build_grid(1, 7, 3, {0}, {4})}) {
    if (!is_knot(g)) continue;
    for (const ReportOptions& options : {ReportOptions{}, everything}) {
      const ComputeReport report = compute_report(g, options);
      EXPECT_EQ(parse_report(render_json(report)), report) << grid_key(g);
    }
  }
}

TEST(Report, JsonSchema) {
  const auto j = to_json(compute_report(example()));
  EXPECT_EQ(j.at("hat").at(1).at("groups").at(0).at("maslov"), "1/6");
  EXPECT_EQ(j.at("coefficients"), "Z");
  EXPECT_EQ(j.at("input").at("os"), (std::vector<int>{3, 4}));
  EXPECT_FALSE(j.contains("timing_ms"));
  EXPECT_EQ(j.at("euler").at(1).at("terms").at(0).at("exponent"), "0");
}

TEST(Report, ByteReproducible) {
  EXPECT_EQ(render_json(compute_report(example())), render_json(compute_report(example())));
}

TEST(Report, ParseErrors) {
  EXPECT_EQ(error_kind([] { parse_report("{"); }), ReportErrorKind::Parse);
  EXPECT_EQ(error_kind([] { parse_report("{}"); }), ReportErrorKind::Parse);
  std::string text = render_json(compute_report(example()));
  text.replace(text.find("\"1/6\""), 5, "\"1/x\"");
  EXPECT_EQ(error_kind([&] { parse_report(text); }), ReportErrorKind::Parse);
}

TEST(Report, TableMentionsGroups) {
  ReportOptions options;
  options.ascii = true;
  const std::string table = render_table(compute_report(example(), options));
  EXPECT_NE(table.find("1/6"), std::string::npos);
  EXPECT_NE(table.find("3/2"), std::string::npos);
  EXPECT_NE(table.find(".X|..|O."), std::string::npos);
  EXPECT_NE(table.find("spinc 0: t^1 - 1 + t^-1"), std::string::npos);
}

TEST(Atlas, PutGetRoundTrip) {
  const TempDir dir;
  Atlas atlas(dir.path());
  const ComputeReport report = compute_report(example());
  EXPECT_FALSE(atlas.get(example()).has_value());
  EXPECT_TRUE(atlas.put(report));
  const auto record = atlas.get(example());
  ASSERT_TRUE(record.has_value());
  EXPECT_EQ(record->report, report);
  EXPECT_FALSE(record->version_mismatch);
  EXPECT_EQ(record->key, atlas_key(example()));
}

TEST(Atlas, TranslatesShareRecord) {
  const TempDir dir;
  Atlas atlas(dir.path());
  atlas.put(compute_report(example()));
  const auto direct = atlas.get(example());
  for (int dx = 0; dx < 6; ++dx) {
    for (int dy = 0; dy < 2; ++dy) {
      const auto hit = atlas.get(apply_move(example(), Translation{dx, dy}));
      ASSERT_TRUE(hit.has_value());
      EXPECT_EQ(*hit, *direct);
    }
  }
  EXPECT_FALSE(atlas.put(compute_report(apply_move(example(), Translation{1, 0}))));
}

TEST(Atlas, UnknownKeyAndVersionMismatch) {
  const TempDir dir;
  Atlas atlas(dir.path());
  EXPECT_FALSE(atlas.get("9,9,9;0;1").has_value());
  ComputeReport old = compute_report(example());
  old.engine_version = "lgh 0.1.0";
  atlas.put(old);
  const auto record = atlas.get(example());
  ASSERT_TRUE(record.has_value());
  EXPECT_TRUE(record->version_mismatch);
}

TEST(Atlas, CorruptRecordIsStorageError) {
  const TempDir dir;
  Atlas atlas(dir.path());
  std::ofstream(atlas.path_for(atlas_key(example()))) << "not json";
  EXPECT_THROW(atlas.get(example()), StorageError);
}

TEST(Atlas, EnvironmentDirectory) {
  const TempDir dir;
  ::setenv(Atlas::kDirectoryVariable, dir.path().c_str(), 1);
  EXPECT_EQ(Atlas::from_environment().root(), dir.path());
  ::unsetenv(Atlas::kDirectoryVariable);
}

TEST(Scan, EnumerationMatchesBruteForce) {
  for (const auto& [p, q] : support::lens_parameters(1, 4)) {
    for (int n = 1; n <= 2; ++n) {
      if (n * p < 2) continue;
      std::size_t knots = 0;
      for (const GridDiagram& g : support::all_grids(n, p, q)) knots += is_knot(g) ? 1 : 0;
      EXPECT_EQ(all_knot_grids(n, p, q, false).size(), knots);
      std::set<std::string> classes;
      for (const GridDiagram& g : all_knot_grids(n, p, q, false)) classes.insert(grid_key(canonical_form(g)));
      EXPECT_EQ(all_knot_grids(n, p, q, true).size(), classes.size());
    }
  }
}

TEST(Scan, ExhaustiveSmallRangeIsTorsionFree) {
  ScanPolicy policy;
  policy.n = 2;
  policy.p_max = 4;
  const ScanResult result = batch_scan(policy);
  EXPECT_GT(result.grids, 0u);
  EXPECT_TRUE(result.clean());
}

TEST(Scan, SampledIsSeededAndThreadIndependent) {
  ScanPolicy policy;
  policy.n = 3;
  policy.p_min = 2;
  policy.p_max = 2;
  policy.exhaustive = false;
  policy.samples = 10;
  policy.seed = 5;
  const auto a = scan_grids(policy);
  const auto b = scan_grids(policy);
  EXPECT_EQ(a, b);
  const ScanResult one = batch_scan(policy);
  policy.threads = 4;
  const ScanResult four = batch_scan(policy);
  EXPECT_EQ(one.findings, four.findings);
  EXPECT_EQ(one.grids, 10u);
  EXPECT_EQ(one.per_params.at({2, 1}), 10u);
}

TEST(Scan, InjectedTorsionIsReported) {
  ScanPolicy policy;
  policy.n = 2;
  policy.p_max = 2;
  policy.mutate = [](TildeComplex& c) {
    Sector s;
    s.spinc = 0;
    s.alexander = Rational(10);
    s.basis = {Generator(std::vector<int>{0, 1}), Generator(std::vector<int>{1, 0})};
    s.maslov_levels = {{Rational(0), 0, 1}, {Rational(1), 1, 2}};
    s.boundaries = {SparseMatrix(1, 0), SparseMatrix(1, 1)};
    s.boundaries[1].add(0, 0, 2);
    c.sectors.push_back(s);
  };
  const ScanResult result = batch_scan(policy);
  EXPECT_FALSE(result.clean());
  EXPECT_EQ(result.count("tilde-torsion"), result.grids);
  // a lone Z/2 has no W partner, so the division fails as well
  EXPECT_EQ(result.count("factorization"), result.grids);
  const auto torsion = std::find_if(result.findings.begin(), result.findings.end(),
                                    [](const ScanFinding& f) { return f.kind == "tilde-torsion"; });
  ASSERT_NE(torsion, result.findings.end());
  EXPECT_NE(torsion->detail.find("Z/2"), std::string::npos);
  EXPECT_FALSE(to_json(policy, result).at("torsion_free").get<bool>());
}
