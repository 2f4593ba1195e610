#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "paramp/csv.hpp"
#include "paramp/errors.hpp"

// Dependency-free SVG line plots for quick inspection of sweep output.
// Byte-deterministic: same series in, same file out.

namespace paramp {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  int width = 860;
  int height = 520;
};

namespace plot_detail {

inline constexpr const char* palette[] = {"#1f6f8b", "#c0504d", "#5b8a38",
                                          "#7d5ba6", "#c78a28", "#3b3b3b"};
inline constexpr int palette_size = 6;

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!(lo <= hi)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (lo == hi) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double m = 0.05 * (hi - lo);
    lo -= m;
    hi += m;
  }
};

inline std::string svg_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

// Round tick positions: 1-2-5 ladder covering the range.
inline std::vector<double> ticks(double lo, double hi, int target = 6) {
  const double span = hi - lo;
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double mult : {1.0, 2.0, 5.0, 10.0})
    if (mag * mult >= raw) {
      step = mag * mult;
      break;
    }
  std::vector<double> out;
  double t = std::ceil(lo / step) * step;
  for (; t <= hi + 0.5 * step; t += step) out.push_back(t == 0.0 ? 0.0 : t);
  return out;
}

}  // namespace plot_detail

inline std::string render_svg(const PlotSpec& spec) {
  using namespace plot_detail;
  const int w = spec.width, h = spec.height;
  const int ml = 70, mr = 20, mt = 40, mb = 55;
  const double pw = w - ml - mr, ph = h - mt - mb;

  Range rx, ry;
  for (const auto& s : spec.series) {
    for (double v : s.x) rx.add(v);
    for (double v : s.y) ry.add(v);
  }
  rx.pad();
  ry.pad();
  const auto sx = [&](double v) {
    return ml + pw * (v - rx.lo) / (rx.hi - rx.lo);
  };
  const auto sy = [&](double v) {
    return mt + ph * (1.0 - (v - ry.lo) / (ry.hi - ry.lo));
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
     << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h
     << "\">\n";
  os << "<rect width=\"" << w << "\" height=\"" << h
     << "\" fill=\"#ffffff\"/>\n";
  os << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"15\">"
     << svg_escape(spec.title) << "</text>\n";

  for (double t : ticks(rx.lo, rx.hi)) {
    const double x = sx(t);
    os << "<line x1=\"" << format_number(x) << "\" y1=\"" << mt << "\" x2=\""
       << format_number(x) << "\" y2=\"" << mt + ph
       << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    os << "<text x=\"" << format_number(x) << "\" y=\"" << mt + ph + 18
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"11\">"
       << format_number(t) << "</text>\n";
  }
  for (double t : ticks(ry.lo, ry.hi)) {
    const double y = sy(t);
    os << "<line x1=\"" << ml << "\" y1=\"" << format_number(y) << "\" x2=\""
       << ml + pw << "\" y2=\"" << format_number(y)
       << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    os << "<text x=\"" << ml - 8 << "\" y=\"" << format_number(y + 4)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
          "font-size=\"11\">"
       << format_number(t) << "</text>\n";
  }
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\""
     << format_number(pw) << "\" height=\"" << format_number(ph)
     << "\" fill=\"none\" stroke=\"#444444\"/>\n";
  os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << h - 14
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"12\">"
     << svg_escape(spec.x_label) << "</text>\n";
  os << "<text x=\"18\" y=\"" << mt + ph / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"12\" transform=\"rotate(-90 18 "
     << mt + ph / 2 << ")\">" << svg_escape(spec.y_label) << "</text>\n";

  int color = 0;
  for (const auto& s : spec.series) {
    const char* stroke = palette[color % palette_size];
    ++color;
    os << "<polyline fill=\"none\" stroke=\"" << stroke
       << "\" stroke-width=\"1.6\" points=\"";
    const std::size_t n = std::min(s.x.size(), s.y.size());
    bool first = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (!first) os << " ";
      first = false;
      os << format_number(sx(s.x[i])) << "," << format_number(sy(s.y[i]));
    }
    os << "\"/>\n";
  }

  double ly = mt + 16;
  color = 0;
  for (const auto& s : spec.series) {
    if (s.label.empty()) {
      ++color;
      continue;
    }
    const char* stroke = palette[color % palette_size];
    ++color;
    os << "<line x1=\"" << ml + 10 << "\" y1=\"" << format_number(ly - 4)
       << "\" x2=\"" << ml + 34 << "\" y2=\"" << format_number(ly - 4)
       << "\" stroke=\"" << stroke << "\" stroke-width=\"1.6\"/>\n";
    os << "<text x=\"" << ml + 40 << "\" y=\"" << format_number(ly)
       << "\" font-family=\"sans-serif\" font-size=\"11\">"
       << svg_escape(s.label) << "</text>\n";
    ly += 16;
  }
  os << "</svg>\n";
  return os.str();
}

inline void write_svg(const std::string& path, const PlotSpec& spec) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot open plot file: " + path);
  out << render_svg(spec);
  if (!out) throw config_error("failed writing plot file: " + path);
}

}  // namespace paramp
