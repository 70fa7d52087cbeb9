#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

namespace kinklab {

// Round-trip formatting of a double (%.17g).
std::string fmt(double v);

// Streaming CSV writer; values are formatted with fmt().
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;
  void row(const std::vector<double>& values);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::FILE* f_ = nullptr;
};

void ensure_dir(const std::string& dir);
std::string join_path(const std::string& dir, const std::string& name);

// Writes to a temporary sibling and renames over `path`.
void write_json_atomic(const std::string& path, const nlohmann::json& j);

}  // namespace kinklab
