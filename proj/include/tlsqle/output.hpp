#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include "tlsqle/errors.hpp"

namespace tlsqle {

enum class OutputFormat { Csv, Json };

// Column-ordered table of doubles / integers / strings. All floating-point
// text is written with 17 significant digits so runs are byte-reproducible
// and values round-trip exactly.
struct Table {
  using Cell = std::variant<double, long long, std::string>;
  std::vector<std::string> headers;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string cell_to_csv(const Table::Cell& c) {
  if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
  if (std::holds_alternative<long long>(c)) return std::to_string(std::get<long long>(c));
  return std::get<std::string>(c);
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out += ch;
    }
  }
  return out;
}

inline std::string cell_to_json(const Table::Cell& c) {
  if (std::holds_alternative<double>(c)) {
    const double v = std::get<double>(c);
    if (std::isnan(v)) return "null";
    return format_double(v);
  }
  if (std::holds_alternative<long long>(c)) return std::to_string(std::get<long long>(c));
  return "\"" + json_escape(std::get<std::string>(c)) + "\"";
}

}  // namespace detail

inline std::string to_csv(const Table& t) {
  std::string out;
  for (size_t i = 0; i < t.headers.size(); ++i) {
    if (i) out += ',';
    out += t.headers[i];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += detail::cell_to_csv(row[i]);
    }
    out += '\n';
  }
  return out;
}

inline std::string to_json(const Table& t) {
  std::string out = "[\n";
  for (size_t r = 0; r < t.rows.size(); ++r) {
    out += "  {";
    for (size_t i = 0; i < t.rows[r].size(); ++i) {
      if (i) out += ", ";
      out += "\"" + detail::json_escape(t.headers[i]) + "\": " + detail::cell_to_json(t.rows[r][i]);
    }
    out += r + 1 < t.rows.size() ? "},\n" : "}\n";
  }
  out += "]\n";
  return out;
}

inline std::string render(const Table& t, OutputFormat fmt) {
  return fmt == OutputFormat::Csv ? to_csv(t) : to_json(t);
}

// Writes via a temporary in the same directory followed by an atomic rename,
// so an interrupted run never leaves a truncated file at the target path.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + tmp.string() + " for writing");
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!os) throw IoError("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace tlsqle
