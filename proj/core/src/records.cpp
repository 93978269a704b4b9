#include "qpw/records.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qpw/types.hpp"

namespace qpw {

std::string artifact_version() { return QPW_VERSION; }

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string cell(double value) { return format_double(value); }
std::string cell(long long value) { return std::to_string(value); }

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw InvalidArgument("CSV table needs at least one column");
}

CsvTable& CsvTable::row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size()) {
    throw InvalidArgument("CSV row has " + std::to_string(cells.size()) + " cells, expected " +
                          std::to_string(columns_.size()));
  }
  rows_.push_back(std::move(cells));
  return *this;
}

namespace {
void join(std::ostringstream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}
}  // namespace

std::string CsvTable::render(const ArtifactMeta& meta) const {
  std::ostringstream out;
  out << "# qpw " << meta.version << " config=" << meta.config_hash << '\n';
  join(out, columns_);
  for (const auto& r : rows_) join(out, r);
  return out.str();
}

nlohmann::json stamped(nlohmann::json record, const ArtifactMeta& meta) {
  record["config_hash"] = meta.config_hash;
  record["version"] = meta.version;
  return record;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ComputationError("cannot write " + tmp.string());
    out << text;
    if (!out) throw ComputationError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_json(const std::filesystem::path& path, const nlohmann::json& record) {
  write_text(path, record.dump(2) + "\n");
}

}  // namespace qpw
