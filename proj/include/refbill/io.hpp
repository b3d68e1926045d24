#pragma once

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

#include "refbill/return_map.hpp"
#include "refbill/scan.hpp"
#include "refbill/types.hpp"

namespace refbill {

// Shortest exact decimal form (17 significant digits round-trip).
std::string format_double(double v);

// Pretty-printed JSON (2-space indent, trailing newline). Keys are the
// caller's responsibility; numbers round-trip exactly.
void write_json(std::ostream& os, const nlohmann::json& j);
void write_json_file(const std::string& path, const nlohmann::json& j);

// CSV with a header row; every cell is already formatted.
void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);
void write_csv_file(const std::string& path,
                    const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows);

// Fixed column orders used by the CLI.
std::vector<std::vector<std::string>> portrait_rows(
    const std::vector<OrbitRecord>& records);
std::vector<std::vector<std::string>> scan_rows(
    const std::vector<GridCell>& cells);
std::vector<std::vector<std::string>> freefall_rows(
    const std::vector<FreeFallSample>& samples);

extern const std::vector<std::string> kPortraitHeader;  // orbit_id,iter,xi,alpha,termination
extern const std::vector<std::string> kScanHeader;      // x,y,delta0,delta1,sign0,sign1
extern const std::vector<std::string> kFreefallHeader;  // theta,delta,clamped

// Minimal self-contained SVG scatter plot (axes + points), no external assets.
struct SvgSeries {
  std::vector<std::pair<double, double>> points;
  std::string color = "#1f6fb2";
  bool polyline = false;
};

void write_svg(std::ostream& os, const std::vector<SvgSeries>& series,
               double x_lo, double x_hi, double y_lo, double y_hi,
               int width = 860, int height = 640);
void write_svg_file(const std::string& path,
                    const std::vector<SvgSeries>& series, double x_lo,
                    double x_hi, double y_lo, double y_hi);

const char* termination_name(Termination t);

}  // namespace refbill
