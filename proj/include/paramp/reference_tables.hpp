#pragma once

#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "paramp/errors.hpp"

// Published benchmark figures for cryogenic amplifier families and for
// the four parametric-amplifier architectures modeled here, kept
// verbatim (UTF-8, including en dashes) so reported numbers can be
// checked against the literature they came from.

namespace paramp {

struct ReferenceTable {
  std::string title;
  std::vector<std::string> columns;               // data columns, no stub
  std::vector<std::string> rows;                  // parameter names
  std::vector<std::vector<std::string>> cells;    // [row][column]
};

inline const ReferenceTable& amplifier_family_comparison() {
  static const ReferenceTable table{
      "Cryogenic amplifier families",
      {"CMOS (4.2 K)", "HEMT (4.2 K)", "JPA (10 mK)"},
      {"Gain", "Bandwidth", "P_{1dB}", "Noise Figure", "Power Consumption",
       "Size", "Scalability"},
      {
          {"10-20 dB", "20-30 dB", "20-25 dB"},
          {"~1-4 GHz", "~4 GHz", "10-40 MHz"},
          {"-20 to -10 dBm", "0 to 10 dBm", "-125 to -108 dBm"},
          {"0.6~0.9 dB", "~0.02 dB", "~0.0065 dB"},
          {"Milliwatts", "Tens of milliwatts", "Microwatts"},
          {"Very compact", "Moderate", "Larger, bulkier"},
          {"Highly scalable", "Moderately scalable", "Limited scalability"},
      }};
  return table;
}

inline const ReferenceTable& jpa_architecture_comparison() {
  static const ReferenceTable table{
      "Parametric amplifier architectures",
      {"Single JJ JPA", "Arrayed JJ JPA", "BJPA", "Modified BJPA"},
      {"Gain", "Bandwidth", "P_{1dB}", "Noise Figure", "Advantages",
       "Disadvantages"},
      {
          {"20–25 dB typical", "11–31 dB depending on design",
           "~25 dB simulated",
           "~25 dB with frequency-selective peaks across C-band (comb-like "
           "structure)"},
          {"Narrow (typically 10–50 MHz)", "Very broad for JTWPAs",
           "Tunable across C-band (~4–8 GHz)",
           "Tunable; structured comb profile across C-band (~4–8 GHz); not "
           "flat but engineered for selective frequency gain"},
          {"–115 to –133 dBm",
           "~–125 to –95 dBm (distributed 1000-JJ JPA)",
           "~–92 dBm (N = 70, M = 8); improved by Quarton architecture",
           "Variable; better than ~–115 dBm"},
          {"Near quantum limit (~1–2× SQL)", "Near quantum limit",
           "Near quantum limit due to high coherence of Blochonium",
           "Low noise; harmonic purity maintained with low 3rd-order output "
           "modes"},
          {"Simple fabrication, well understood, low noise",
           "Higher gain-bandwidth product, more robust power handling, "
           "tunability via array design",
           "High gain with fewer junctions, improved linearity and power "
           "handling, compact design, tunable nonlinearity",
           "Selective gain structure ideal for frequency-multiplexed qubit "
           "readout; suppresses qubit leakage into readout chain"},
          {"Narrow bandwidth, limited power handling, pump leakage "
           "challenges",
           "Fabrication complexity, phase matching sensitivity, higher power "
           "demand in large arrays",
           "Requires precise control over junction parameters, new "
           "fabrication challenges with Blochonium",
           "Complex impedance matching; sharp gain dips between peaks "
           "require careful frequency planning"},
      }};
  return table;
}

namespace reference_detail {

inline std::string lower(const std::string& s) {
  std::string out = s;
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline std::optional<std::size_t> try_match(
    const std::vector<std::string>& names, const std::string& query) {
  const std::string q = lower(query);
  std::vector<std::size_t> hits;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const std::string n = lower(names[i]);
    if (n == q) return i;
    if (n.find(q) != std::string::npos) hits.push_back(i);
  }
  if (hits.size() == 1) return hits.front();
  return std::nullopt;
}

[[noreturn]] inline void fail_match(const std::vector<std::string>& names,
                                    const std::string& query,
                                    const char* kind) {
  const std::string q = lower(query);
  bool any = false;
  for (const auto& name : names)
    if (lower(name).find(q) != std::string::npos) any = true;
  std::ostringstream os;
  os << "reference table: " << (any ? "ambiguous" : "no") << " " << kind
     << " match for \"" << query << "\"; available:";
  for (const auto& n : names) os << " \"" << n << "\"";
  throw config_error(os.str());
}

}  // namespace reference_detail

// Case-insensitive substring lookup; exact names always win. The two
// queries may arrive in either order: the (row, column) orientation is
// tried first, then the swap, so "JPA" x "Gain" works even though the
// amplifier families label the columns.
inline const std::string& lookup(const ReferenceTable& table,
                                 const std::string& row_query,
                                 const std::string& column_query) {
  using reference_detail::try_match;
  const auto r = try_match(table.rows, row_query);
  const auto c = try_match(table.columns, column_query);
  if (r && c) return table.cells[*r][*c];
  const auto rs = try_match(table.rows, column_query);
  const auto cs = try_match(table.columns, row_query);
  if (rs && cs) return table.cells[*rs][*cs];
  if (!r) reference_detail::fail_match(table.rows, row_query, "row");
  reference_detail::fail_match(table.columns, column_query, "column");
}

inline std::string format_reference_table(const ReferenceTable& table) {
  std::ostringstream os;
  os << table.title << "\n";
  os << "Parameter";
  for (const auto& c : table.columns) os << "\t" << c;
  os << "\n";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    os << table.rows[r];
    for (const auto& cell : table.cells[r]) os << "\t" << cell;
    os << "\n";
  }
  return os.str();
}

}  // namespace paramp
