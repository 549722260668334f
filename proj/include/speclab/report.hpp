#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "speclab/numeric.hpp"

namespace speclab {

inline constexpr const char* kVersion = "speclab 0.1.0";

/// Deterministic tabular report: fixed header, ordered rows, and a
/// provenance footer (model spec hash, command line, version) so a
/// published table can be reproduced byte for byte.
struct ReportTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string spec_hash;  // "fnv1a:<hex>" of the model spec text, or "-"
  std::string command;
  std::string version = kVersion;

  void add_row(std::vector<std::string> row) {
    if (row.size() != header.size())
      throw std::invalid_argument("ReportTable: row width differs from header");
    rows.push_back(std::move(row));
  }
};

inline std::string spec_hash_of(const std::string& text) {
  std::ostringstream out;
  out << "fnv1a:" << std::hex << fnv1a_64(text);
  return out.str();
}

// Cells containing the separator or quotes are quoted per the usual CSV
// convention; list-valued cells use ';' separators and never need it.
inline std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += "\"";
  return out;
}

inline std::string render_csv(const ReportTable& table) {
  std::ostringstream out;
  for (std::size_t j = 0; j < table.header.size(); ++j)
    out << (j ? "," : "") << csv_escape(table.header[j]);
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << csv_escape(row[j]);
    out << "\n";
  }
  out << "# spec_hash=" << table.spec_hash << "\n";
  out << "# command=" << table.command << "\n";
  out << "# version=" << table.version << "\n";
  return out.str();
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

/// Structured-text rendering: one JSON object mirroring the table fields.
/// All values are strings; rationals stay exact ("p/q").
inline std::string render_structured(const ReportTable& table) {
  std::ostringstream out;
  out << "{\n  \"header\": [";
  for (std::size_t j = 0; j < table.header.size(); ++j)
    out << (j ? ", " : "") << "\"" << json_escape(table.header[j]) << "\"";
  out << "],\n  \"rows\": [\n";
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    out << "    [";
    for (std::size_t j = 0; j < table.rows[i].size(); ++j)
      out << (j ? ", " : "") << "\"" << json_escape(table.rows[i][j]) << "\"";
    out << "]" << (i + 1 < table.rows.size() ? "," : "") << "\n";
  }
  out << "  ],\n  \"provenance\": {\n";
  out << "    \"spec_hash\": \"" << json_escape(table.spec_hash) << "\",\n";
  out << "    \"command\": \"" << json_escape(table.command) << "\",\n";
  out << "    \"version\": \"" << json_escape(table.version) << "\"\n";
  out << "  }\n}\n";
  return out.str();
}

inline std::string render_report(const ReportTable& table, const std::string& format) {
  if (format == "csv") return render_csv(table);
  if (format == "text" || format == "structured" || format == "json")
    return render_structured(table);
  throw std::invalid_argument("unknown report format '" + format + "' (use csv or text)");
}

inline void write_report(const ReportTable& table, const std::string& format,
                         const std::string& out_path, std::ostream& fallback) {
  std::string rendered = render_report(table, format);
  if (out_path.empty()) {
    fallback << rendered;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + out_path + "'");
  out << rendered;
}

}  // namespace speclab
