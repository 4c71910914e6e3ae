#include "ibcsym/io/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <system_error>

#ifndef IBCSYM_VERSION
#define IBCSYM_VERSION "0.0.0"
#endif

namespace ibcsym::io {

const char* const version = IBCSYM_VERSION;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string provenance_comment(const Provenance& p) {
  std::string s;
  s += "# ibcsym " + p.version + "\n";
  s += "# command: " + p.command + "\n";
  s += "# config_hash: fnv1a64:" + hex64(p.config_hash) + "\n";
  s += "# seed: " + std::to_string(p.seed) + "\n";
  for (const auto& [k, v] : p.parameters) s += "# param " + k + " = " + v + "\n";
  return s;
}

Json provenance_json(const Provenance& p) {
  Json j;
  j["tool"] = "ibcsym";
  j["version"] = p.version;
  j["command"] = p.command;
  j["config_hash"] = "fnv1a64:" + hex64(p.config_hash);
  j["seed"] = p.seed;
  Json params = Json::array();
  for (const auto& [k, v] : p.parameters) params.push_back(k + " = " + v);
  j["parameters"] = params;
  return j;
}

void atomic_write(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw std::runtime_error("cannot rename " + tmp.string() + ": " + ec.message());
}

CsvWriter::CsvWriter(const Provenance& p, const std::vector<std::string>& columns)
    : buffer_(provenance_comment(p)), columns_(columns.size()) {
  row_text(columns);
}

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> s;
  s.reserve(values.size());
  for (double v : values) s.push_back(format_double(v));
  row_text(s);
}

void CsvWriter::row_text(const std::vector<std::string>& values) {
  if (values.size() != columns_) throw std::logic_error("CSV row width mismatch");
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) buffer_ += ',';
    buffer_ += values[k];
  }
  buffer_ += '\n';
}

namespace {

// Like Json::dump, but floats use format_double; non-finite values become null.
// pretty: two-space indentation; otherwise a single line.
void dump_json(const Json& j, std::size_t depth, bool pretty, std::string& out) {
  const std::string pad = pretty ? "\n" + std::string(2 * (depth + 1), ' ') : "";
  const std::string close = pretty ? "\n" + std::string(2 * depth, ' ') : "";
  const char* sep = pretty ? ": " : ":";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",";
        first = false;
        out += pad + Json(it.key()).dump() + sep;
        dump_json(it.value(), depth + 1, pretty, out);
      }
      out += close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[";
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) out += ",";
        out += pad;
        dump_json(j[k], depth + 1, pretty, out);
      }
      out += close + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string json_text(const Json& j) {
  std::string out;
  dump_json(j, 0, true, out);
  return out;
}

std::string json_line(const Json& j) {
  std::string out;
  dump_json(j, 0, false, out);
  return out + "\n";
}

void write_json(const std::filesystem::path& path, const Provenance& p, const Json& body) {
  Json doc;
  doc["provenance"] = provenance_json(p);
  for (auto it = body.begin(); it != body.end(); ++it) doc[it.key()] = it.value();
  atomic_write(path, json_text(doc) + "\n");
}

}  // namespace ibcsym::io
