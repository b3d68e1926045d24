#include "refbill/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace refbill {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_json(std::ostream& os, const nlohmann::json& j) {
  os << j.dump(2) << "\n";
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path);
  write_json(f, j);
  if (!f) throw IoError("write failed: " + path);
}

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i)
    os << header[i] << (i + 1 < header.size() ? "," : "");
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << row[i] << (i + 1 < row.size() ? "," : "");
    os << "\n";
  }
}

void write_csv_file(const std::string& path,
                    const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path);
  write_csv(f, header, rows);
  if (!f) throw IoError("write failed: " + path);
}

const std::vector<std::string> kPortraitHeader = {"orbit_id", "iter", "xi",
                                                  "alpha", "termination"};
const std::vector<std::string> kScanHeader = {"x",     "y",     "delta0",
                                              "delta1", "sign0", "sign1"};
const std::vector<std::string> kFreefallHeader = {"theta", "delta", "clamped"};

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::completed: return "completed";
    case Termination::total_reflection: return "total_reflection";
    case Termination::tangency: return "tangency";
    case Termination::error: return "error";
  }
  return "error";
}

std::vector<std::vector<std::string>> portrait_rows(
    const std::vector<OrbitRecord>& records) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t id = 0; id < records.size(); ++id) {
    const OrbitRecord& rec = records[id];
    // one row per iteration: seed plus n-1 images for completed orbits, every
    // recorded state for orbits that died early
    std::size_t n = rec.states.size();
    if (rec.termination == Termination::completed && n > 1) --n;
    for (std::size_t it = 0; it < n; ++it) {
      rows.push_back({std::to_string(id), std::to_string(it),
                      format_double(rec.states[it].xi),
                      format_double(rec.states[it].alpha),
                      termination_name(rec.termination)});
    }
  }
  return rows;
}

std::vector<std::vector<std::string>> scan_rows(
    const std::vector<GridCell>& cells) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(cells.size());
  for (const GridCell& c : cells) {
    if (!c.admissible) {
      rows.push_back({format_double(c.x), format_double(c.y), "nan", "nan",
                      "0", "0"});
      continue;
    }
    rows.push_back({format_double(c.x), format_double(c.y),
                    format_double(c.delta0), format_double(c.delta1),
                    std::to_string(c.sign0), std::to_string(c.sign1)});
  }
  return rows;
}

std::vector<std::vector<std::string>> freefall_rows(
    const std::vector<FreeFallSample>& samples) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(samples.size());
  for (const FreeFallSample& s : samples)
    rows.push_back({format_double(s.theta), format_double(s.delta),
                    s.clamped ? "1" : "0"});
  return rows;
}

void write_svg(std::ostream& os, const std::vector<SvgSeries>& series,
               double x_lo, double x_hi, double y_lo, double y_hi, int width,
               int height) {
  const int margin = 46;
  const double xs = (width - 2.0 * margin) / (x_hi - x_lo);
  const double ys = (height - 2.0 * margin) / (y_hi - y_lo);
  auto px = [&](double x) { return margin + (x - x_lo) * xs; };
  auto py = [&](double y) { return height - margin - (y - y_lo) * ys; };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
     << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // axes
  os << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\""
     << width - margin << "\" y2=\"" << height - margin
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin
     << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << margin << "\" y=\"" << height - margin + 28
     << "\" font-size=\"12\">" << format_double(x_lo) << "</text>\n";
  os << "<text x=\"" << width - margin - 40 << "\" y=\"" << height - margin + 28
     << "\" font-size=\"12\">" << format_double(x_hi) << "</text>\n";
  os << "<text x=\"4\" y=\"" << height - margin << "\" font-size=\"12\">"
     << format_double(y_lo) << "</text>\n";
  os << "<text x=\"4\" y=\"" << margin << "\" font-size=\"12\">"
     << format_double(y_hi) << "</text>\n";

  for (const SvgSeries& s : series) {
    if (s.polyline && s.points.size() > 1) {
      os << "<polyline fill=\"none\" stroke=\"" << s.color
         << "\" stroke-width=\"1\" points=\"";
      for (const auto& [x, y] : s.points) os << px(x) << "," << py(y) << " ";
      os << "\"/>\n";
    } else {
      for (const auto& [x, y] : s.points)
        os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y)
           << "\" r=\"1.2\" fill=\"" << s.color << "\"/>\n";
    }
  }
  os << "</svg>\n";
}

void write_svg_file(const std::string& path,
                    const std::vector<SvgSeries>& series, double x_lo,
                    double x_hi, double y_lo, double y_hi) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path);
  write_svg(f, series, x_lo, x_hi, y_lo, y_hi);
  if (!f) throw IoError("write failed: " + path);
}

}  // namespace refbill
