// lgh: grid homology of knots in lens spaces from the command line.
//
//   lgh compute --params 2,3,1 --x 0,1 --o 3,4 [--coeff z|f2] [--tilde] [--generators] [--ascii] [--json out.json]
//   lgh scan --n 2 --p-max 6 [--exhaustive | --samples 200 --seed 1] [--threads 4]
//   lgh atlas put --params 2,3,1 --x 0,1 --o 3,4
//   lgh atlas get --params 2,3,1 --x 0,1 --o 3,4      (or --key "2,3,1;0,1;3,4")

#include "lgh/atlas.hpp"
#include "lgh/report.hpp"
#include "lgh/scan.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <thread>

namespace {

struct GridArgs {
  std::string params, xs, os;

  void attach(CLI::App* cmd, bool required) {
    auto* p = cmd->add_option("--params", params, "grid parameters n,p,q");
    auto* x = cmd->add_option("--x", xs, "X columns, bottom row first");
    auto* o = cmd->add_option("--o", os, "O columns, bottom row first");
    if (required) {
      p->required();
      x->required();
      o->required();
    }
  }

  lgh::GridDiagram grid() const {
    const auto npq = lgh::parse_int_list(params);
    if (npq.size() != 3) throw lgh::GridError(lgh::GridErrorKind::Parse, "--params needs three integers n,p,q");
    return lgh::build_grid(npq[0], npq[1], npq[2], lgh::parse_int_list(xs), lgh::parse_int_list(os));
  }
};

void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sign-refined grid homology of knots in lens spaces"};
  app.require_subcommand(1);

  GridArgs compute_grid;
  std::string coeff = "z", json_path;
  lgh::ReportOptions options;
  auto* compute = app.add_subcommand("compute", "hat (and tilde) homology of one grid");
  compute_grid.attach(compute, true);
  compute->add_option("--coeff", coeff, "coefficient ring")->check(CLI::IsMember({"z", "f2"}, CLI::ignore_case));
  compute->add_flag("--tilde", options.tilde, "also report tilde homology");
  compute->add_flag("--generators", options.generators, "list every generator with its gradings");
  compute->add_flag("--ascii", options.ascii, "draw the grid");
  compute->add_flag("--timing", options.timing, "record wall-clock time (breaks byte reproducibility)");
  compute->add_option("--json", json_path, "write the JSON report to this file ('-' for stdout)");
  compute->add_option("--max-generators", options.max_generators, "size cap on n! p^n");

  lgh::ScanPolicy policy;
  std::string scan_json;
  bool exhaustive = false;
  auto* scan = app.add_subcommand("scan", "survey grids for torsion in integral homology");
  scan->add_option("--n", policy.n, "grid dimension")->required()->check(CLI::Range(1, 4));
  scan->add_option("--p-min", policy.p_min, "smallest p")->check(CLI::PositiveNumber);
  scan->add_option("--p-max", policy.p_max, "largest p")->required()->check(CLI::PositiveNumber);
  auto* exhaustive_flag = scan->add_flag("--exhaustive", exhaustive, "every grid up to translation");
  auto* samples = scan->add_option("--samples", policy.samples, "random grids per (p,q)");
  scan->add_option("--seed", policy.seed, "sampling seed");
  scan->add_option("--threads", policy.threads, "worker threads")->default_val(std::max(1u, std::thread::hardware_concurrency()));
  scan->add_option("--json", scan_json, "write the survey as JSON ('-' for stdout)");
  exhaustive_flag->excludes(samples);

  auto* atlas = app.add_subcommand("atlas", "stored reports, directory from $LGH_ATLAS_DIR");
  atlas->require_subcommand(1);
  GridArgs put_grid, get_grid;
  std::string get_key;
  auto* put = atlas->add_subcommand("put", "compute a grid and store its report");
  put_grid.attach(put, true);
  auto* get = atlas->add_subcommand("get", "print a stored report");
  get_grid.attach(get, false);
  get->add_option("--key", get_key, "canonical key n,p,q;xs;os");

  CLI11_PARSE(app, argc, argv);

  try {
    if (compute->parsed()) {
      options.coefficients = (coeff == "f2" || coeff == "F2") ? lgh::Coefficients::F2 : lgh::Coefficients::Z;
      const lgh::ComputeReport report = lgh::compute_report(compute_grid.grid(), options);
      if (json_path.empty()) {
        std::cout << lgh::render_table(report);
      } else {
        write_output(json_path, lgh::render_json(report));
        if (json_path != "-") std::cout << lgh::render_table(report);
      }
      return 0;
    }
    if (scan->parsed()) {
      policy.exhaustive = exhaustive || samples->count() == 0;
      const lgh::ScanResult result = lgh::batch_scan(policy);
      std::cout << "scanned " << result.grids << " grids (n = " << policy.n << ", " << policy.p_min << " <= p <= "
                << policy.p_max << ", " << (policy.exhaustive ? "exhaustive up to translation" : "sampled") << ")\n";
      for (const auto& [pq, count] : result.per_params) {
        std::cout << "  L(" << pq.first << "," << pq.second << "): " << count << "\n";
      }
      for (const lgh::ScanFinding& f : result.findings) std::cout << "  " << f.kind << " " << f.key << " " << f.detail << "\n";
      std::cout << (result.clean() ? "no torsion found\n" : "findings reported above\n");
      if (!scan_json.empty()) write_output(scan_json, lgh::to_json(policy, result).dump(2) + "\n");
      return result.clean() ? 0 : 3;
    }
    lgh::Atlas store = lgh::Atlas::from_environment();
    if (put->parsed()) {
      const lgh::GridDiagram grid = put_grid.grid();
      const bool written = store.put(lgh::compute_report(grid));
      std::cout << (written ? "stored " : "already present ") << lgh::atlas_key(grid) << " in " << store.root().string()
                << "\n";
      return 0;
    }
    if (get->parsed()) {
      std::optional<lgh::AtlasRecord> record;
      if (!get_key.empty()) {
        record = store.get(lgh::atlas_key(lgh::parse_grid_key(get_key)));
      } else if (!get_grid.params.empty()) {
        record = store.get(get_grid.grid());
      } else {
        std::cerr << "atlas get needs --key or --params/--x/--o\n";
        return 1;
      }
      if (!record) {
        std::cerr << "not in atlas\n";
        return 2;
      }
      if (record->version_mismatch) {
        std::cerr << "warning: VersionMismatch (record written by " << record->engine_version << ")\n";
      }
      std::cout << lgh::render_json(record->report);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
