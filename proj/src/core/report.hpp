#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core/model.hpp"

namespace nsprofile {

// Header plus rows of finite reals; every row has one value per column.
struct Table {
  std::vector<std::string> columns;
  std::vector<RealVec> rows;
};

// Throws std::invalid_argument on empty header, column mismatch or non-finite values.
void validate_table(const Table& table);

// 17 significant digits, shortest exponent form, '.' decimal separator.
std::string format_real(double x);

std::string to_csv(const Table& table);
Table parse_csv(std::string_view text);

void write_text_file(const std::string& path, std::string_view text);
std::string read_text_file(const std::string& path);

void write_csv(const Table& table, const std::string& path);
Table read_csv(const std::string& path);

enum class AxisScale { Linear, Log };

struct PlotSeries {
  std::string label;
  RealVec x;
  RealVec y;
};

struct PlotSpec {
  AxisScale x_scale = AxisScale::Log;
  AxisScale y_scale = AxisScale::Log;
  std::string title;
  std::string x_label = "t";
  std::string y_label;
  // Guide line of this slope in the scaled coordinates, anchored at the first
  // point of the first series.
  std::optional<double> reference_slope;
  double width = 720.0;
  double height = 480.0;
};

// Pixel coordinates of each emitted polyline, in series order.
using SvgPolylines = std::vector<std::vector<std::pair<double, double>>>;

std::string to_svg(const std::vector<PlotSeries>& series, const PlotSpec& spec,
                   SvgPolylines* polylines = nullptr);
void write_svg(const std::vector<PlotSeries>& series, const PlotSpec& spec, const std::string& path);

// First column as abscissa, each remaining column as one series.
std::vector<PlotSeries> series_from_table(const Table& table);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

}  // namespace nsprofile
