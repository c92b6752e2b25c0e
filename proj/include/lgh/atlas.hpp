#pragma once

// A directory of computed reports, one JSON file per canonical grid.
// Records are written once (temp file + rename) and never rewritten.

#include "lgh/grid.hpp"
#include "lgh/report.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

namespace lgh {

class StorageError : public std::runtime_error {
 public:
  explicit StorageError(const std::string& what) : std::runtime_error("StorageError: " + what) {}
};

struct AtlasRecord {
  std::string key;
  std::string engine_version;
  ComputeReport report;
  /// Set on lookup when the record was written by another engine version.
  bool version_mismatch = false;

  friend bool operator==(const AtlasRecord&, const AtlasRecord&) = default;
};

inline std::string atlas_key(const GridDiagram& grid) { return grid_key(canonical_form(grid)); }

class Atlas {
 public:
  static constexpr const char* kDirectoryVariable = "LGH_ATLAS_DIR";

  explicit Atlas(std::filesystem::path root) : root_(std::move(root)) {}

  /// Directory from $LGH_ATLAS_DIR, else ./lgh-atlas.
  static Atlas from_environment() {
    const char* dir = std::getenv(kDirectoryVariable);
    return Atlas(dir && *dir ? std::filesystem::path(dir) : std::filesystem::path("lgh-atlas"));
  }

  const std::filesystem::path& root() const { return root_; }

  std::filesystem::path path_for(const std::string& key) const {
    std::string name = key;
    for (char& c : name) {
      if (c == ';') c = '_';
    }
    return root_ / (name + ".json");
  }

  /// Stores the report under the canonical key of its grid.  Returns false
  /// (and leaves the file untouched) when a record already exists.
  bool put(const ComputeReport& report) {
    const GridDiagram grid = build_grid(report.n, report.p, report.q, report.xs, report.os);
    const std::string key = atlas_key(grid);
    const auto target = path_for(key);
    std::error_code ec;
    std::filesystem::create_directories(root_, ec);
    if (ec) throw StorageError("cannot create " + root_.string() + ": " + ec.message());
    if (std::filesystem::exists(target)) return false;

    nlohmann::ordered_json j;
    j["key"] = key;
    j["engine_version"] = report.engine_version;
    j["report"] = to_json(report);
    std::mt19937_64 rng(std::random_device{}());
    const auto temp = root_ / (".tmp-" + std::to_string(rng()) + ".json");
    {
      std::ofstream out(temp, std::ios::binary);
      if (!out) throw StorageError("cannot write " + temp.string());
      out << j.dump(2) << "\n";
      if (!out) throw StorageError("write to " + temp.string() + " failed");
    }
    std::filesystem::rename(temp, target, ec);
    if (ec) {
      std::filesystem::remove(temp);
      throw StorageError("cannot move record into place: " + ec.message());
    }
    return true;
  }

  std::optional<AtlasRecord> get(const std::string& key) const {
    const auto path = path_for(key);
    if (!std::filesystem::exists(path)) return std::nullopt;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StorageError("cannot read " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
      const auto j = nlohmann::ordered_json::parse(buffer.str());
      AtlasRecord record{j.at("key").get<std::string>(), j.at("engine_version").get<std::string>(),
                         report_from_json(j.at("report")), false};
      record.version_mismatch = record.engine_version != kEngineVersion;
      return record;
    } catch (const nlohmann::json::exception& e) {
      throw StorageError("corrupt record " + path.string() + ": " + e.what());
    } catch (const ReportError& e) {
      throw StorageError("corrupt record " + path.string() + ": " + e.what());
    }
  }

  std::optional<AtlasRecord> get(const GridDiagram& grid) const { return get(atlas_key(grid)); }

 private:
  std::filesystem::path root_;
};

}  // namespace lgh
