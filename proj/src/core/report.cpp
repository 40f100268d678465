#include "core/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "core/errors.hpp"

namespace nsprofile {
namespace {

std::string format_fixed(double x, int digits) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, digits);
  return std::string(buf, res.ptr);
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw std::invalid_argument("unterminated quoted CSV field");
  fields.push_back(std::move(cur));
  return fields;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

double parse_real(std::string_view s) {
  double x = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument("malformed number in CSV: '" + std::string(s) + "'");
  return x;
}

struct Axis {
  AxisScale scale;
  double lo, hi;      // in scaled units
  double p_lo, p_hi;  // pixel range

  double scaled(double v) const { return scale == AxisScale::Log ? std::log10(v) : v; }
  double pixel(double v) const { return p_lo + (scaled(v) - lo) / (hi - lo) * (p_hi - p_lo); }
  double pixel_scaled(double s) const { return p_lo + (s - lo) / (hi - lo) * (p_hi - p_lo); }
};

Axis make_axis(AxisScale scale, double vmin, double vmax, double p_lo, double p_hi) {
  Axis a{scale, 0.0, 0.0, p_lo, p_hi};
  a.lo = a.scaled(vmin);
  a.hi = a.scaled(vmax);
  if (a.hi - a.lo < 1e-12) {
    const double pad = scale == AxisScale::Log ? 0.5 : std::max(std::abs(a.lo) * 0.1, 0.5);
    a.lo -= pad;
    a.hi += pad;
  }
  return a;
}

std::vector<double> ticks(const Axis& a) {
  std::vector<double> out;
  if (a.scale == AxisScale::Log) {
    for (double k = std::ceil(a.lo - 1e-9); k <= a.hi + 1e-9; k += 1.0) out.push_back(k);
  } else {
    for (int i = 0; i <= 5; ++i) out.push_back(a.lo + (a.hi - a.lo) * i / 5.0);
  }
  return out;
}

std::string tick_label(const Axis& a, double s) {
  if (a.scale == AxisScale::Log) return "1e" + std::to_string(static_cast<int>(std::lround(s)));
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, s, std::chars_format::general, 4);
  return std::string(buf, res.ptr);
}

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

void validate_table(const Table& table) {
  if (table.columns.empty()) throw std::invalid_argument("table has no columns");
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (table.rows[i].size() != table.columns.size())
      throw std::invalid_argument("column mismatch in row " + std::to_string(i + 1) + ": expected " +
                                  std::to_string(table.columns.size()) + " values, got " +
                                  std::to_string(table.rows[i].size()));
    for (double x : table.rows[i])
      if (!std::isfinite(x)) throw std::invalid_argument("non-finite value in row " + std::to_string(i + 1));
  }
}

std::string format_real(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string to_csv(const Table& table) {
  validate_table(table);
  std::string out;
  for (std::size_t j = 0; j < table.columns.size(); ++j) {
    if (j) out += ',';
    out += csv_field(table.columns[j]);
  }
  out += '\n';
  for (const RealVec& row : table.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ',';
      out += format_real(row[j]);
    }
    out += '\n';
  }
  return out;
}

Table parse_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    pos = end + 1;
  }
  if (lines.empty()) throw std::invalid_argument("no data rows (empty CSV)");
  Table table;
  table.columns = split_fields(lines[0]);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string> fields = split_fields(lines[i]);
    RealVec row;
    row.reserve(fields.size());
    for (const std::string& f : fields) row.push_back(parse_real(f));
    table.rows.push_back(std::move(row));
  }
  if (table.rows.empty()) throw std::invalid_argument("no data rows");
  validate_table(table);
  return table;
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_csv(const Table& table, const std::string& path) { write_text_file(path, to_csv(table)); }

Table read_csv(const std::string& path) { return parse_csv(read_text_file(path)); }

std::vector<PlotSeries> series_from_table(const Table& table) {
  validate_table(table);
  std::vector<PlotSeries> out;
  for (std::size_t j = 1; j < table.columns.size(); ++j) {
    PlotSeries s;
    s.label = table.columns[j];
    for (const RealVec& row : table.rows) {
      s.x.push_back(row[0]);
      s.y.push_back(row[j]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string to_svg(const std::vector<PlotSeries>& series, const PlotSpec& spec, SvgPolylines* polylines) {
  if (series.empty()) throw std::invalid_argument("plot needs at least one series");
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const PlotSeries& s : series) {
    if (s.x.size() != s.y.size()) throw std::invalid_argument("series '" + s.label + "' has mismatched x/y");
    if (s.x.empty()) throw std::invalid_argument("series '" + s.label + "' is empty");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double x = s.x[i], y = s.y[i];
      if (!std::isfinite(x) || !std::isfinite(y))
        throw std::invalid_argument("series '" + s.label + "' has a non-finite value");
      if (spec.x_scale == AxisScale::Log && !(x > 0.0))
        throw std::invalid_argument("nonpositive x value in series '" + s.label + "' on a log axis");
      if (spec.y_scale == AxisScale::Log && !(y > 0.0))
        throw std::invalid_argument("nonpositive y value in series '" + s.label + "' on a log axis");
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  const double left = 80.0, right = 170.0, top = 40.0, bottom = 55.0;
  const Axis ax = make_axis(spec.x_scale, xmin, xmax, left, spec.width - right);
  const Axis ay = make_axis(spec.y_scale, ymin, ymax, spec.height - bottom, top);
  auto px = [](double v) { return format_fixed(v, 3); };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(spec.width) << "\" height=\""
    << px(spec.height) << "\" viewBox=\"0 0 " << px(spec.width) << ' ' << px(spec.height) << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<clipPath id=\"plot\"><rect x=\"" << px(left) << "\" y=\"" << px(top) << "\" width=\""
    << px(ax.p_hi - ax.p_lo) << "\" height=\"" << px(ay.p_lo - ay.p_hi) << "\"/></clipPath>\n";
  if (!spec.title.empty())
    o << "<text x=\"" << px(spec.width / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << xml_escape(spec.title) << "</text>\n";
  o << "<rect x=\"" << px(left) << "\" y=\"" << px(top) << "\" width=\"" << px(ax.p_hi - ax.p_lo)
    << "\" height=\"" << px(ay.p_lo - ay.p_hi) << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (double s : ticks(ax)) {
    const double x = ax.pixel_scaled(s);
    o << "<line x1=\"" << px(x) << "\" y1=\"" << px(ay.p_lo) << "\" x2=\"" << px(x) << "\" y2=\""
      << px(ay.p_hi) << "\" stroke=\"#dddddd\"/>\n";
    o << "<text x=\"" << px(x) << "\" y=\"" << px(ay.p_lo + 18) << "\" text-anchor=\"middle\" font-size=\"11\">"
      << tick_label(ax, s) << "</text>\n";
  }
  for (double s : ticks(ay)) {
    const double y = ay.pixel_scaled(s);
    o << "<line x1=\"" << px(ax.p_lo) << "\" y1=\"" << px(y) << "\" x2=\"" << px(ax.p_hi) << "\" y2=\""
      << px(y) << "\" stroke=\"#dddddd\"/>\n";
    o << "<text x=\"" << px(ax.p_lo - 6) << "\" y=\"" << px(y + 4) << "\" text-anchor=\"end\" font-size=\"11\">"
      << tick_label(ay, s) << "</text>\n";
  }
  o << "<text x=\"" << px((ax.p_lo + ax.p_hi) / 2) << "\" y=\"" << px(spec.height - 12)
    << "\" text-anchor=\"middle\" font-size=\"13\">" << xml_escape(spec.x_label) << "</text>\n";
  if (!spec.y_label.empty())
    o << "<text x=\"18\" y=\"" << px((ay.p_lo + ay.p_hi) / 2) << "\" text-anchor=\"middle\" font-size=\"13\""
      << " transform=\"rotate(-90 18 " << px((ay.p_lo + ay.p_hi) / 2) << ")\">" << xml_escape(spec.y_label)
      << "</text>\n";

  if (polylines) polylines->clear();
  const std::size_t palette = std::size(kPalette);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const PlotSeries& s = series[k];
    std::vector<std::pair<double, double>> pts;
    o << "<polyline clip-path=\"url(#plot)\" fill=\"none\" stroke=\"" << kPalette[k % palette]
      << "\" stroke-width=\"1.8\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double x = ax.pixel(s.x[i]), y = ay.pixel(s.y[i]);
      pts.emplace_back(x, y);
      if (i) o << ' ';
      o << px(x) << ',' << px(y);
    }
    o << "\"/>\n";
    if (polylines) polylines->push_back(std::move(pts));
    const double ly = top + 16.0 + 18.0 * static_cast<double>(k);
    o << "<line x1=\"" << px(ax.p_hi + 12) << "\" y1=\"" << px(ly) << "\" x2=\"" << px(ax.p_hi + 36)
      << "\" y2=\"" << px(ly) << "\" stroke=\"" << kPalette[k % palette] << "\" stroke-width=\"1.8\"/>\n";
    o << "<text class=\"legend\" x=\"" << px(ax.p_hi + 40) << "\" y=\"" << px(ly + 4) << "\" font-size=\"11\">"
      << xml_escape(s.label) << "</text>\n";
  }

  if (spec.reference_slope) {
    const double sx0 = ax.scaled(series[0].x[0]), sy0 = ay.scaled(series[0].y[0]);
    const double k = *spec.reference_slope;
    const double y_lo = sy0 + k * (ax.lo - sx0), y_hi = sy0 + k * (ax.hi - sx0);
    o << "<line class=\"reference\" clip-path=\"url(#plot)\" x1=\"" << px(ax.p_lo) << "\" y1=\""
      << px(ay.pixel_scaled(y_lo)) << "\" x2=\"" << px(ax.p_hi) << "\" y2=\"" << px(ay.pixel_scaled(y_hi))
      << "\" stroke=\"#777777\" stroke-dasharray=\"6 4\"/>\n";
    const double ly = top + 16.0 + 18.0 * static_cast<double>(series.size());
    o << "<line x1=\"" << px(ax.p_hi + 12) << "\" y1=\"" << px(ly) << "\" x2=\"" << px(ax.p_hi + 36)
      << "\" y2=\"" << px(ly) << "\" stroke=\"#777777\" stroke-dasharray=\"6 4\"/>\n";
    o << "<text x=\"" << px(ax.p_hi + 40) << "\" y=\"" << px(ly + 4) << "\" font-size=\"11\">slope "
      << tick_label(Axis{AxisScale::Linear, 0, 1, 0, 1}, k) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void write_svg(const std::vector<PlotSeries>& series, const PlotSpec& spec, const std::string& path) {
  write_text_file(path, to_svg(series, spec));
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  for (int i = 15; i >= 0; --i) {
    buf[i] = "0123456789abcdef"[value & 0xf];
    value >>= 4;
  }
  return std::string(buf, 16);
}

}  // namespace nsprofile
