#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "paramp/errors.hpp"
#include "paramp/version.hpp"

namespace paramp {

// Shortest round-trippable-ish decimal form; fixed format so identical
// inputs always serialize to identical bytes.
inline std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

using CsvValue = std::variant<double, long, std::string>;

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<CsvValue>> rows;
  std::vector<std::string> comments;  // extra context lines after the banner
};

inline std::string quote_csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string render_csv(const CsvTable& table) {
  std::ostringstream os;
  os << "# paramp-lab v" << version_string << ", schema "
     << output_schema_version << "\n";
  for (const auto& line : table.comments) os << "# " << line << "\n";
  for (std::size_t i = 0; i < table.header.size(); ++i)
    os << (i ? "," : "") << quote_csv_field(table.header[i]);
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ",";
      if (const double* d = std::get_if<double>(&row[i]))
        os << format_number(*d);
      else if (const long* l = std::get_if<long>(&row[i]))
        os << *l;
      else
        os << quote_csv_field(std::get<std::string>(row[i]));
    }
    os << "\n";
  }
  return os.str();
}

inline void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot open output file: " + path);
  out << render_csv(table);
  if (!out) throw config_error("failed writing output file: " + path);
}

}  // namespace paramp
