#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "odekit/core.hpp"
#include "odekit/errors.hpp"
#include "odekit/stability.hpp"

namespace odekit {

// Shortest decimal string that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  if (res.ec != std::errc{}) throw Error("format_double failed");
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  // from_chars rejects a leading '+', and inf/nan spellings vary; handle both.
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw InvalidArgumentError("not a number: '" + std::string(s) + "'");
  return v;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

inline void write_csv(std::ostream& os, const CsvTable& t) {
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
    os << '\n';
  }
}

inline CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
      const std::size_t pos = s.find(',', start);
      out.push_back(s.substr(start, pos - start));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    return out;
  };
  if (!std::getline(is, line)) throw InvalidArgumentError("empty CSV input");
  t.header = split(line);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& cell : split(line)) row.push_back(parse_double(cell));
    if (row.size() != t.header.size()) throw InvalidArgumentError("CSV row has the wrong number of fields");
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline CsvTable trajectory_table(const Trajectory& traj) {
  CsvTable t;
  t.header.push_back("t");
  const std::size_t n = traj.states.empty() ? 0 : traj.states.front().size();
  for (std::size_t i = 1; i <= n; ++i) t.header.push_back("y" + std::to_string(i));
  for (std::size_t k = 0; k < traj.size(); ++k) {
    std::vector<double> row{traj.times[k]};
    row.insert(row.end(), traj.states[k].begin(), traj.states[k].end());
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline CsvTable raster_table(const StabilityRegionRaster& r) {
  CsvTable t{{"re", "im", "stable"}, {}};
  for (std::size_t iy = 0; iy < r.ny; ++iy)
    for (std::size_t ix = 0; ix < r.nx; ++ix) {
      const Complex z = r.center(ix, iy);
      t.rows.push_back({z.real(), z.imag(), r.at(ix, iy) ? 1.0 : 0.0});
    }
  return t;
}

inline CsvTable locus_table(const std::vector<LocusPoint>& locus) {
  CsvTable t{{"theta", "re", "im"}, {}};
  for (const auto& p : locus) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    t.rows.push_back({p.theta, p.z ? p.z->real() : nan, p.z ? p.z->imag() : nan});
  }
  return t;
}

// Self-contained 800x800 SVG: member cells as rectangles, optional locus polyline.
inline std::string render_svg(const StabilityRegionRaster& r, const std::vector<LocusPoint>* locus = nullptr) {
  constexpr double size = 800.0;
  const Bounds& b = r.bounds;
  auto px = [&](double re) { return (re - b.re_min) / (b.re_max - b.re_min) * size; };
  auto py = [&](double im) { return size - (im - b.im_min) / (b.im_max - b.im_min) * size; };
  const double cw = size / static_cast<double>(r.nx);
  const double ch = size / static_cast<double>(r.ny);

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"800\" fill=\"white\"/>\n";
  os << "<g fill=\"#7aa6d6\" stroke=\"none\">\n";
  for (std::size_t iy = 0; iy < r.ny; ++iy) {
    // Merge runs of member cells in a row into one rectangle.
    std::size_t ix = 0;
    while (ix < r.nx) {
      if (!r.at(ix, iy)) {
        ++ix;
        continue;
      }
      std::size_t end = ix;
      while (end < r.nx && r.at(end, iy)) ++end;
      os << "<rect x=\"" << format_double(static_cast<double>(ix) * cw) << "\" y=\""
         << format_double(size - static_cast<double>(iy + 1) * ch) << "\" width=\""
         << format_double(static_cast<double>(end - ix) * cw) << "\" height=\"" << format_double(ch) << "\"/>\n";
      ix = end;
    }
  }
  os << "</g>\n";
  os << "<g stroke=\"#444\" stroke-width=\"1\">\n";
  if (b.re_min < 0.0 && b.re_max > 0.0)
    os << "<line x1=\"" << format_double(px(0.0)) << "\" y1=\"0\" x2=\"" << format_double(px(0.0)) << "\" y2=\"800\"/>\n";
  if (b.im_min < 0.0 && b.im_max > 0.0)
    os << "<line x1=\"0\" y1=\"" << format_double(py(0.0)) << "\" x2=\"800\" y2=\"" << format_double(py(0.0)) << "\"/>\n";
  os << "</g>\n";
  if (locus) {
    os << "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"2\" points=\"";
    bool first = true;
    for (const auto& p : *locus) {
      if (!p.z) continue;
      os << (first ? "" : " ") << format_double(px(p.z->real())) << "," << format_double(py(p.z->imag()));
      first = false;
    }
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace odekit
