#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace qpw {

/// Library version string embedded in every artifact.
std::string artifact_version();

/// Identifies the run that produced an artifact.
struct ArtifactMeta {
  std::string config_hash;
  std::string version = artifact_version();
};

/// 17 significant digits (%.17g): reads back to the identical double.
std::string format_double(double value);

/// CSV table. Line 1 is "# qpw <version> config=<hash>", line 2 the column
/// names; cells are written verbatim, numbers via format_double.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);
  CsvTable& row(std::vector<std::string> cells);
  std::size_t rows() const { return rows_.size(); }
  std::string render(const ArtifactMeta& meta) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

std::string cell(double value);
std::string cell(long long value);
inline std::string cell(int value) { return cell(static_cast<long long>(value)); }
inline std::string cell(long value) { return cell(static_cast<long long>(value)); }
inline std::string cell(std::string value) { return value; }

/// Adds "config_hash" and "version" to a JSON record.
nlohmann::json stamped(nlohmann::json record, const ArtifactMeta& meta);

/// Writes `text` atomically-enough for a single writer (temp file, then rename).
void write_text(const std::filesystem::path& path, const std::string& text);
/// Two-space indented JSON with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& record);

}  // namespace qpw
