#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace ibcsym::io {

using Json = nlohmann::ordered_json;

extern const char* const version;

// %.17g
std::string format_double(double v);

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

struct Provenance {
  std::string command;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::string version;
  std::vector<std::pair<std::string, std::string>> parameters;
};

// '#'-prefixed comment block.
std::string provenance_comment(const Provenance& p);
Json provenance_json(const Provenance& p);

// Writes to a temporary file next to `path` and renames it into place.
void atomic_write(const std::filesystem::path& path, std::string_view content);

class CsvWriter {
 public:
  CsvWriter(const Provenance& p, const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  // Mixed rows; numbers should already be formatted with format_double.
  void row_text(const std::vector<std::string>& values);
  const std::string& str() const { return buffer_; }
  void write(const std::filesystem::path& path) const { atomic_write(path, buffer_); }

 private:
  std::string buffer_;
  std::size_t columns_;
};

// Two-space indented text with every float in format_double form.
std::string json_text(const Json& j);
// Single-line form with a trailing newline (one JSON-lines record).
std::string json_line(const Json& j);

// Writes {"provenance": ..., <body keys>} with two-space indentation.
void write_json(const std::filesystem::path& path, const Provenance& p, const Json& body);

}  // namespace ibcsym::io
